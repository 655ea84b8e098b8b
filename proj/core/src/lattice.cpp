#include "entanglab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace entanglab {

Window::Window(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 3)
    throw std::invalid_argument("window dimension must be 1, 2 or 3");
  site_count_ = 1;
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("window edge lengths must be positive");
    site_count_ *= d;
  }
}

std::array<int, 3> Window::coords(int site) const {
  if (site < 0 || site >= site_count_)
    throw std::invalid_argument("site index out of range");
  std::array<int, 3> c{0, 0, 0};
  // row-major: last dimension varies fastest
  for (int k = dimension() - 1; k >= 0; --k) {
    c[k] = site % dims_[k];
    site /= dims_[k];
  }
  return c;
}

int Window::site(const std::array<int, 3>& c) const {
  int s = 0;
  for (int k = 0; k < dimension(); ++k) {
    if (c[k] < 0 || c[k] >= dims_[k])
      throw std::invalid_argument("coordinate out of range");
    s = s * dims_[k] + c[k];
  }
  return s;
}

bool Window::contains(const std::array<int, 3>& c) const {
  for (int k = 0; k < dimension(); ++k)
    if (c[k] < 0 || c[k] >= dims_[k]) return false;
  return true;
}

int Window::distance(int u, int v) const {
  auto cu = coords(u), cv = coords(v);
  int d = 0;
  for (int k = 0; k < dimension(); ++k) d += std::abs(cu[k] - cv[k]);
  return d;
}

Region::Region(Window window, std::vector<int> sites)
    : window_(std::move(window)), sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  for (int s : sites_)
    if (s < 0 || s >= window_.site_count())
      throw std::invalid_argument("region site " + std::to_string(s) +
                                  " outside window");
}

Region Region::full(const Window& w) {
  std::vector<int> all(w.site_count());
  for (int i = 0; i < w.site_count(); ++i) all[i] = i;
  return Region(w, std::move(all));
}

Region Region::empty(const Window& w) { return Region(w, {}); }

Region Region::box(const Window& w, const std::vector<int>& lo,
                   const std::vector<int>& hi) {
  const int d = w.dimension();
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
    throw std::invalid_argument("box lo/hi arity does not match window dimension");
  std::vector<int> sites;
  for (int s = 0; s < w.site_count(); ++s) {
    auto c = w.coords(s);
    bool in = true;
    for (int k = 0; k < d; ++k)
      if (c[k] < lo[k] || c[k] > hi[k]) { in = false; break; }
    if (in) sites.push_back(s);
  }
  if (sites.empty()) throw std::invalid_argument("box selects no sites");
  return Region(w, std::move(sites));
}

bool Region::contains(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::contains(const Region& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(),
                       other.sites_.end());
}

bool Region::disjoint_with(const Region& other) const {
  std::vector<int> tmp;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(),
                        other.sites_.end(), std::back_inserter(tmp));
  return tmp.empty();
}

Region Region::complement() const {
  std::vector<int> out;
  for (int s = 0; s < window_.site_count(); ++s)
    if (!contains(s)) out.push_back(s);
  return Region(window_, std::move(out));
}

Region Region::set_union(const Region& other) const {
  std::vector<int> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(),
                 other.sites_.end(), std::back_inserter(out));
  return Region(window_, std::move(out));
}

Region Region::set_minus(const Region& other) const {
  std::vector<int> out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(),
                      other.sites_.end(), std::back_inserter(out));
  return Region(window_, std::move(out));
}

int site_to_region_distance(const Window& w, int u, const Region& a) {
  if (a.is_empty()) throw std::invalid_argument("empty region");
  int best = -1;
  for (int v : a.sites()) {
    int d = w.distance(u, v);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

int region_distance(const Region& a, const Region& b) {
  if (a.is_empty() || b.is_empty()) throw std::invalid_argument("empty region");
  int best = -1;
  for (int u : a.sites()) {
    int d = site_to_region_distance(a.window(), u, b);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

Region boundary(const Region& a) {
  if (a.is_empty()) throw std::invalid_argument("empty region");
  const Window& w = a.window();
  std::vector<int> out;
  for (int u : a.sites()) {
    auto c = w.coords(u);
    bool edge = false;
    for (int k = 0; k < w.dimension() && !edge; ++k) {
      for (int step : {-1, 1}) {
        auto n = c;
        n[k] += step;
        if (w.contains(n) && !a.contains(w.site(n))) { edge = true; break; }
      }
    }
    if (edge) out.push_back(u);
  }
  return Region(w, std::move(out));
}

Tripartition buffer(const Region& a, int width) {
  if (a.is_empty()) throw std::invalid_argument("empty region");
  if (width < 1) throw std::invalid_argument("buffer width must be >= 1");
  const Window& w = a.window();
  std::vector<int> b, c;
  for (int u = 0; u < w.site_count(); ++u) {
    if (a.contains(u)) continue;
    if (site_to_region_distance(w, u, a) <= width)
      b.push_back(u);
    else
      c.push_back(u);
  }
  return Tripartition{a, Region(w, std::move(b)), Region(w, std::move(c))};
}

SplitBuffers split_buffer(const Region& a1, const Region& a2, int width) {
  if (a1.is_empty() || a2.is_empty()) throw std::invalid_argument("empty region");
  if (width < 1) throw std::invalid_argument("buffer width must be >= 1");
  if (!a1.disjoint_with(a2))
    throw std::invalid_argument("components overlap");
  if (region_distance(a1, a2) < 3 * width)
    throw std::invalid_argument("buffers overlap");
  const Window& w = a1.window();
  Region a = a1.set_union(a2);
  std::vector<int> b1, b2;
  for (int u = 0; u < w.site_count(); ++u) {
    if (a.contains(u)) continue;
    if (site_to_region_distance(w, u, a1) <= width) b1.push_back(u);
    if (site_to_region_distance(w, u, a2) <= width) b2.push_back(u);
  }
  Region rb1(w, std::move(b1)), rb2(w, std::move(b2));
  Region c = a.set_union(rb1).set_union(rb2).complement();
  return SplitBuffers{rb1, rb2, c};
}

RegularityReport regularity_check(const Region& a) {
  if (a.is_empty()) throw std::invalid_argument("empty region");
  if (a.size() == a.window().site_count())
    throw std::invalid_argument("region covers the window, no boundary");
  RegularityReport rep;
  const int da = boundary(a).size();
  rep.boundary_size = da;
  const int lmax = std::max(
      1, static_cast<int>(std::ceil(static_cast<double>(a.size()) / da)));
  double cmin = 0.0, cmax = 0.0;
  for (int l = 1; l <= lmax; ++l) {
    const double ratio =
        static_cast<double>(buffer(a, l).b.size()) / (static_cast<double>(l) * da);
    if (l == 1) { cmin = cmax = ratio; }
    cmin = std::min(cmin, ratio);
    cmax = std::max(cmax, ratio);
  }
  rep.c_d = cmin;
  rep.C_d = cmax;
  rep.is_regular = cmin > 0.0;
  rep.length_scale = cmin > 0.0
                         ? static_cast<double>(a.size()) / (cmin * da)
                         : 0.0;
  return rep;
}

}  // namespace entanglab
