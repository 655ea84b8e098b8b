#include <doctest.h>

#include <cmath>
#include <random>

#include "entanglab/approximation.hpp"
#include "entanglab/gibbs.hpp"
#include "entanglab/ising.hpp"
#include "oracles.hpp"

using namespace entanglab;

namespace {

PureState make_state(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(std::round(std::log2(double(v.size()))));
  return PureState(Window({n}), 2, v);
}

Tripartition tri_of(const PureState& psi, std::vector<int> a, std::vector<int> b) {
  const Window& w = psi.window();
  Region ra(w, a), rb(w, b);
  return Tripartition{ra, rb, ra.set_union(rb).complement()};
}

MarkovApproximation build_markov(const PureState& psi, const Tripartition& tri) {
  return markov_state(psi, tri, phase_deficit(psi, tri));
}

}  // namespace

TEST_CASE("GHZ is its own Markov approximation across the middle site") {
  PureState g3 = make_state(oracle::ghz(3));
  Tripartition tri = tri_of(g3, {0}, {1});
  MarkovApproximation mk = build_markov(g3, tri);
  CHECK((mk.assembled.amplitudes() - g3.amplitudes()).norm() < 1e-12);
  OverlapReport ov = overlap_and_fidelity(g3, mk);
  CHECK(std::abs(ov.overlap - 1.0) < 1e-12);
  CHECK(ov.trace_distance < 1e-12);
}

TEST_CASE("Bell pair with an empty buffer") {
  PureState bell = make_state(oracle::ghz(2));
  Tripartition tri = tri_of(bell, {0}, {});
  MarkovApproximation mk = build_markov(bell, tri);
  OverlapReport ov = overlap_and_fidelity(bell, mk);
  CHECK(ov.overlap.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(ov.overlap.imag()) < 1e-12);
  // chain of fidelity inequalities
  CHECK(ov.trace_distance <= ov.bound + 1e-10);
  // phi factors: single sector, uniform square roots
  REQUIRE(mk.weights.size() == 1);
  CHECK(mk.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("Markov exactness for nearest-neighbor Gibbs square-root states") {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (int t = 0; t < 3; ++t) {
    GibbsSpec spec{Window({9}), {{{1}, u(rng)}}, 0.05 * t, {}};
    PureState psi = gibbs_sqrt_state(spec);
    for (int width : {1, 2}) {
      Tripartition tri = buffer(Region::box(psi.window(), {0}, {2}), width);
      MarkovApproximation mk = build_markov(psi, tri);
      OverlapReport ov = overlap_and_fidelity(psi, mk);
      CHECK(std::abs(std::abs(ov.overlap) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("markov approximation preserves the A-B marginal") {
  std::mt19937_64 rng(97);
  PureState psi = make_state(oracle::random_state(rng, 7));
  Tripartition tri = tri_of(psi, {0, 1}, {2, 3});
  MarkovApproximation mk = build_markov(psi, tri);
  ProbabilityTable p = measure(psi);
  ProbabilityTable q = measure(mk.assembled);
  Region ab = tri.a.set_union(tri.b);
  ProbabilityTable pm = marginal(p, ab), qm = marginal(q, ab);
  CHECK((pm.probs() - qm.probs()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mk.renormalization < 1e-12);
  CHECK_THROWS_WITH(markov_state(psi, tri_of(psi, {0, 1}, {2, 4}),
                                 mk.phase_split),
                    "tripartition mismatch");
}

TEST_CASE("reduced-state approximation") {
  std::mt19937_64 rng(101);
  PureState prod = make_state(oracle::product_state(rng, 5));
  Window w = prod.window();
  ReducedApproximation ra =
      reduced_state_approximation(prod, Region(w, {0, 1}), Region(w, {2}));
  CHECK(ra.bound == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ra.distance < 1e-10);
  for (double lam : ra.leading_values) CHECK(lam == doctest::Approx(1.0));

  PureState g3 = make_state(oracle::ghz(3));
  ReducedApproximation rg = reduced_state_approximation(
      g3, Region(g3.window(), {0}), Region(g3.window(), {1}));
  CHECK(rg.bound == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rg.distance < 1e-10);

  for (int t = 0; t < 5; ++t) {
    PureState psi = make_state(oracle::random_state(rng, 8));
    auto regions = oracle::random_disjoint_regions(rng, 8, {3, 2});
    ReducedApproximation rr = reduced_state_approximation(
        psi, Region(psi.window(), regions[0]), Region(psi.window(), regions[1]));
    CHECK(rr.distance <= rr.bound + 1e-10);
    CHECK(rr.approx.numerical_rank() <= 4);  // <= dim H_B
  }
}

TEST_CASE("fidelity bound audit") {
  PureState g3 = make_state(oracle::ghz(3));
  AuditReport rg = fidelity_bound_audit(g3, tri_of(g3, {0}, {1}));
  CHECK(rg.pass);
  CHECK(rg.lhs == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rg.rhs == doctest::Approx(0.0).epsilon(1e-10));

  PureState bell = make_state(oracle::ghz(2));
  AuditReport rb = fidelity_bound_audit(bell, tri_of(bell, {0}, {}));
  CHECK(rb.pass);
  CHECK(rb.meta["mid"].get<double>() ==
        doctest::Approx(2.0 * (1.0 - 1.0 / std::sqrt(2.0))).epsilon(1e-6));
  CHECK(rb.rhs == doctest::Approx(1.0));

  std::mt19937_64 rng(103);
  for (int t = 0; t < 20; ++t) {
    PureState psi = make_state(oracle::random_state(rng, 8));
    auto sizes = std::vector<int>{1 + int(t % 3), 1 + int((t / 3) % 2)};
    auto regions = oracle::random_disjoint_regions(rng, 8, sizes);
    AuditReport r = fidelity_bound_audit(
        psi, tri_of(psi, regions[0], regions[1]));
    CHECK(r.pass);
  }
}

TEST_CASE("mutual information") {
  std::mt19937_64 rng(107);
  PureState prod = make_state(oracle::product_state(rng, 6));
  Window w = prod.window();
  CHECK(mutual_information(prod, Region(w, {0, 1}), Region(w, {4, 5})) ==
        doctest::Approx(0.0).epsilon(1e-10));

  PureState g3 = make_state(oracle::ghz(3));
  CHECK(mutual_information(g3, Region(g3.window(), {0}),
                           Region(g3.window(), {2})) ==
        doctest::Approx(std::log(2.0)));

  // complementary bipartition of a pure state: I = 2 S(A1)
  PureState psi = make_state(oracle::random_state(rng, 6));
  Region a1(psi.window(), {0, 2, 4});
  CHECK(mutual_information(psi, a1, a1.complement()) ==
        doctest::Approx(2.0 * entanglement_entropy(psi, a1)).epsilon(1e-10));
  CHECK(mutual_information(psi, a1, Region(psi.window(), {1, 3})) >= -1e-10);
  CHECK_THROWS(mutual_information(psi, a1, Region(psi.window(), {0})));
}

TEST_CASE("pinsker audit") {
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  PureState g3 = make_state(oracle::ghz(3));
  AuditReport r = pinsker_audit(g3, Region(g3.window(), {0}),
                                Region(g3.window(), {2}), sz, sz);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(1e-5));

  std::mt19937_64 rng(109);
  PureState prod = make_state(oracle::product_state(rng, 4));
  AuditReport rp = pinsker_audit(prod, Region(prod.window(), {0}),
                                 Region(prod.window(), {3}), sz, sz);
  CHECK(rp.pass);
  CHECK(rp.lhs == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS(pinsker_audit(g3, Region(g3.window(), {0, 1}),
                             Region(g3.window(), {2}), sz, sz));
}

TEST_CASE("rank and Schmidt audits for constructed approximations") {
  std::mt19937_64 rng(113);
  for (int t = 0; t < 6; ++t) {
    PureState psi = make_state(oracle::random_state(rng, 8));
    auto regions = oracle::random_disjoint_regions(rng, 8, {3, 2});
    MarkovApproximation mk =
        build_markov(psi, tri_of(psi, regions[0], regions[1]));
    for (const AuditReport& r : markov_rank_audits(mk)) CHECK(r.pass);
  }
}
