#include <doctest.h>

#include <random>
#include <set>

#include "entanglab/lattice.hpp"

using namespace entanglab;

namespace {

// independent neighbor scan
std::set<int> boundary_scan(const Region& a) {
  const Window& w = a.window();
  std::set<int> in(a.sites().begin(), a.sites().end());
  std::set<int> out;
  for (int u : a.sites()) {
    for (int v = 0; v < w.site_count(); ++v) {
      if (in.count(v)) continue;
      if (w.distance(u, v) == 1) out.insert(u);
    }
  }
  return out;
}

std::set<int> buffer_scan(const Region& a, int l) {
  const Window& w = a.window();
  std::set<int> in(a.sites().begin(), a.sites().end());
  std::set<int> out;
  for (int u = 0; u < w.site_count(); ++u) {
    if (in.count(u)) continue;
    int best = 1 << 20;
    for (int v : a.sites()) best = std::min(best, w.distance(u, v));
    if (best <= l) out.insert(u);
  }
  return out;
}

}  // namespace

TEST_CASE("window indexing is row-major") {
  Window w({4, 4});
  CHECK(w.site_count() == 16);
  CHECK(w.site({1, 2, 0}) == 6);
  CHECK(w.coords(6)[0] == 1);
  CHECK(w.coords(6)[1] == 2);
  CHECK(w.distance(0, 5) == 2);  // (0,0) -> (1,1)
  CHECK_THROWS(Window({}));
  CHECK_THROWS(Window({2, 2, 2, 2}));
  CHECK_THROWS(Window({0}));
}

TEST_CASE("boundary of an interval") {
  Window w({20});
  Region a = Region::box(w, {5}, {8});
  Region b = boundary(a);
  CHECK(b.sites() == std::vector<int>{5, 8});
}

TEST_CASE("boundary of the full window is empty") {
  Window w({20});
  CHECK(boundary(Region::full(w)).is_empty());
  CHECK_THROWS_WITH(boundary(Region::empty(w)), "empty region");
}

TEST_CASE("boundary of a corner block matches the neighbor scan") {
  Window w({4, 4});
  Region a = Region::box(w, {0, 0}, {1, 1});
  Region b = boundary(a);
  CHECK(b.size() == 4);  // every site of the 2x2 block touches outside
  std::set<int> got(b.sites().begin(), b.sites().end());
  CHECK(got == boundary_scan(a));
}

TEST_CASE("buffer on an interval") {
  Window w({20});
  Region a = Region::box(w, {5}, {8});
  Tripartition t = buffer(a, 2);
  CHECK(t.b.sites() == std::vector<int>{3, 4, 9, 10});
  CHECK(t.a.size() + t.b.size() + t.c.size() == 20);
  CHECK(t.a.disjoint_with(t.b));
  CHECK(t.b.disjoint_with(t.c));
}

TEST_CASE("wide buffer exhausts the complement") {
  Window w({20});
  Region a = Region::box(w, {5}, {8});
  CHECK(buffer(a, 20).c.is_empty());
}

TEST_CASE("2d buffer size matches the distance scan") {
  Window w({6, 6});
  Region a = Region::box(w, {2, 2}, {3, 3});
  Tripartition t = buffer(a, 1);
  CHECK(t.b.size() == 12);
  std::set<int> got(t.b.sites().begin(), t.b.sites().end());
  CHECK(got == buffer_scan(a, 1));
}

TEST_CASE("split buffers on a chain") {
  Window w({20});
  Region a1 = Region::box(w, {0}, {1});
  Region a2 = Region::box(w, {18}, {19});
  SplitBuffers s = split_buffer(a1, a2, 3);
  CHECK(s.b1.sites() == std::vector<int>{2, 3, 4});
  CHECK(s.b2.sites() == std::vector<int>{15, 16, 17});
  CHECK(s.b1.disjoint_with(s.b2));

  // d(a1, a2) = 3l exactly is accepted
  Region a2b = Region::box(w, {10}, {11});  // d = 9 = 3*3
  CHECK_NOTHROW(split_buffer(a1, a2b, 3));
  Region a2c = Region::box(w, {9}, {10});  // d = 8 = 3*3 - 1
  CHECK_THROWS_WITH(split_buffer(a1, a2c, 3), "buffers overlap");
}

TEST_CASE("regularity of a 1d interior interval") {
  Window w({20});
  RegularityReport r = regularity_check(Region::box(w, {5}, {8}));
  CHECK(r.boundary_size == 2);
  CHECK(r.c_d == doctest::Approx(1.0));
  CHECK(r.C_d == doctest::Approx(1.0));
  CHECK(r.is_regular);
  CHECK(r.length_scale == doctest::Approx(2.0));
}

TEST_CASE("regularity of a single interior site") {
  Window w({21});
  RegularityReport r = regularity_check(Region(w, {10}));
  CHECK(r.boundary_size == 1);
  CHECK(r.C_d == doctest::Approx(2.0));  // |B_l| = 2l while it fits
  CHECK(r.is_regular);
}

TEST_CASE("regularity of a centered 2d block against exhaustive counts") {
  Window w({8, 8});
  Region a = Region::box(w, {2, 2}, {5, 5});
  RegularityReport r = regularity_check(a);
  CHECK(r.boundary_size == 12);
  CHECK(r.c_d <= r.C_d);
  CHECK(r.is_regular);
  // recount the scanned ratios directly
  const int lmax = std::max(1, (int)std::ceil(16.0 / 12.0));
  double cmin = 1e9, cmax = 0;
  for (int l = 1; l <= lmax; ++l) {
    const double ratio = double(buffer_scan(a, l).size()) / (l * 12.0);
    cmin = std::min(cmin, ratio);
    cmax = std::max(cmax, ratio);
  }
  CHECK(r.c_d == doctest::Approx(cmin));
  CHECK(r.C_d == doctest::Approx(cmax));
  CHECK_THROWS(regularity_check(Region::full(w)));
}

TEST_CASE("tiling and monotonicity over random regions") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    Window w = trial % 2 ? Window({4, 4}) : Window({12});
    std::vector<int> sites;
    std::uniform_int_distribution<int> pick(0, w.site_count() - 1);
    for (int k = 0; k < 4; ++k) sites.push_back(pick(rng));
    Region a(w, sites);
    Region prev = Region::empty(w);
    for (int l = 1; l <= 4; ++l) {
      Tripartition t = buffer(a, l);
      CHECK(t.a.disjoint_with(t.b));
      CHECK(t.a.disjoint_with(t.c));
      CHECK(t.b.disjoint_with(t.c));
      CHECK(t.a.set_union(t.b).set_union(t.c).size() == w.site_count());
      CHECK(t.b.contains(prev));  // B_l grows with l
      prev = t.b;
    }
    Region bd = boundary(a);
    CHECK(a.contains(bd));
    CHECK(std::set<int>(bd.sites().begin(), bd.sites().end()) ==
          boundary_scan(a));
  }
}
