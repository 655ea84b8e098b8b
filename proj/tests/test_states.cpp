#include <doctest.h>

#include <cmath>
#include <random>

#include "entanglab/errors.hpp"
#include "entanglab/states.hpp"
#include "oracles.hpp"

using namespace entanglab;

namespace {

PureState make_state(const Eigen::VectorXcd& v, std::vector<int> dims = {}) {
  const int n = static_cast<int>(std::round(std::log2(double(v.size()))));
  if (dims.empty()) dims = {n};
  return PureState(Window(dims), 2, v);
}

ProbabilityTable make_table(const std::vector<double>& p, int n) {
  Eigen::VectorXd v(Eigen::Index(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i];
  return ProbabilityTable(Region::full(Window({n})), 2, v);
}

}  // namespace

TEST_CASE("state construction validates") {
  Eigen::VectorXcd v(4);
  v << 1.0, 0.0, 0.0, 0.0;
  CHECK_NOTHROW(PureState(Window({2}), 2, v));
  CHECK_THROWS(PureState(Window({3}), 2, v));          // size mismatch
  CHECK_THROWS(PureState(Window({2}), 2, 2.0 * v));    // not normalized
  CHECK_THROWS(PureState(Window({2}), 5, v));          // nu out of range
  CHECK_THROWS_AS(PureState(Window({25}), 2, v), CapacityError);
}

TEST_CASE("amplitude decomposition of stoquastic and signed states") {
  PureState ghz2 = make_state(oracle::ghz(2));
  auto dec = amplitude_decompose(ghz2);
  CHECK(dec.probabilities[0] == doctest::Approx(0.5));
  CHECK(dec.probabilities[3] == doctest::Approx(0.5));
  CHECK(dec.phases.phases[0] == doctest::Approx(0.0));
  CHECK(dec.phases.phases[3] == doctest::Approx(0.0));
  CHECK(dec.phases.defined[0]);
  CHECK_FALSE(dec.phases.defined[1]);

  Eigen::VectorXcd minus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  auto dm = amplitude_decompose(make_state(minus));
  CHECK(dm.probabilities[0] == doctest::Approx(0.5));
  CHECK(dm.probabilities[1] == doctest::Approx(0.5));
  CHECK(std::abs(dm.phases.phases[1]) == doctest::Approx(M_PI));
}

TEST_CASE("decomposition round trip on random states") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    PureState psi = make_state(oracle::random_state(rng, 6));
    PureState fixed = fix_global_phase(psi);
    auto dec = amplitude_decompose(psi);
    double err = 0.0;
    for (Eigen::Index c = 0; c < psi.dim(); ++c) {
      if (!dec.phases.defined[c]) continue;
      const std::complex<double> rebuilt =
          std::sqrt(dec.probabilities[c]) *
          std::exp(std::complex<double>(0.0, dec.phases.phases[c]));
      err = std::max(err, std::abs(rebuilt - fixed.amplitudes()[c]));
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("marginals") {
  // GHZ_3 measure
  std::vector<double> p(8, 0.0);
  p[0] = p[7] = 0.5;
  ProbabilityTable tab = make_table(p, 3);
  Window w({3});
  ProbabilityTable m = marginal(tab, Region(w, {0}));
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));
  CHECK(marginal(tab, Region::full(w)).probs() == tab.probs());

  std::mt19937_64 rng(3);
  auto prod = oracle::product_measure(rng, 4);
  ProbabilityTable pt = make_table(prod, 4);
  Window w4({4});
  auto m23 = marginal(pt, Region(w4, {2, 3}));
  auto m2 = marginal(pt, Region(w4, {2}));
  auto m3 = marginal(pt, Region(w4, {3}));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(m23[i + 2 * j] == doctest::Approx(m2[i] * m3[j]).epsilon(1e-12));
  CHECK_THROWS(marginal(m2, Region(w4, {0, 1})));  // not a sub-region
}

TEST_CASE("conditionals") {
  std::vector<double> p(8, 0.0);
  p[0] = p[7] = 0.5;
  ProbabilityTable tab = make_table(p, 3);
  Window w({3});
  // target {0} given sigma_1 = + (digit 0)
  auto c0 = conditional(tab, Region(w, {0}), {Region(w, {1}), 0});
  CHECK(c0[0] == doctest::Approx(1.0));
  CHECK(c0[1] == doctest::Approx(0.0));
  // vacuous conditioning equals the marginal
  auto cm = conditional(tab, Region(w, {0}), {Region::empty(w), 0});
  CHECK(cm[0] == doctest::Approx(0.5));
  // null event
  std::vector<double> q(8, 0.0);
  q[0] = 1.0;
  CHECK_THROWS_WITH(
      conditional(make_table(q, 3), Region(w, {0}), {Region(w, {1}), 1}),
      "conditioning on null event");

  std::mt19937_64 rng(5);
  auto prod = oracle::product_measure(rng, 4);
  Window w4({4});
  ProbabilityTable pt = make_table(prod, 4);
  auto cond = conditional(pt, Region(w4, {0}), {Region(w4, {2, 3}), 2});
  auto marg = marginal(pt, Region(w4, {0}));
  CHECK(cond[0] == doctest::Approx(marg[0]).epsilon(1e-12));
}

TEST_CASE("reduce against hand cases and the partial-trace oracle") {
  PureState bell = make_state(oracle::ghz(2));
  DensityMatrix half = reduce(bell, Region(bell.window(), {0}));
  CHECK(half.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(half.matrix()(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(half.matrix()(0, 1)) < 1e-14);

  std::mt19937_64 rng(11);
  PureState prod = make_state(oracle::product_state(rng, 4));
  CHECK(reduce(prod, Region(prod.window(), {1, 2})).numerical_rank() == 1);

  PureState g3 = make_state(oracle::ghz(3));
  DensityMatrix r02 = reduce(g3, Region(g3.window(), {0, 2}));
  CHECK(r02.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(r02.matrix()(3, 3).real() == doctest::Approx(0.5));
  CHECK(std::abs(r02.matrix()(0, 3)) < 1e-14);

  for (int t = 0; t < 4; ++t) {
    Eigen::VectorXcd v = oracle::random_state(rng, 6);
    PureState psi = make_state(v);
    std::vector<int> a = oracle::random_disjoint_regions(rng, 6, {3})[0];
    DensityMatrix rho = reduce(psi, Region(psi.window(), a));
    Eigen::MatrixXcd ref = oracle::partial_trace(v, 6, a);
    CHECK((rho.matrix() - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("entropies") {
  Window w1({1});
  Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  DensityMatrix r(Region::full(w1), 2, half);
  CHECK(von_neumann_entropy(r) == doctest::Approx(std::log(2.0)));

  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(2, 2);
  proj(0, 0) = 1.0;
  CHECK(von_neumann_entropy(DensityMatrix(Region::full(w1), 2, proj)) ==
        doctest::Approx(0.0));

  // qutrit diag(.5,.3,.2)
  Eigen::MatrixXcd d3 = Eigen::MatrixXcd::Zero(3, 3);
  d3(0, 0) = 0.5;
  d3(1, 1) = 0.3;
  d3(2, 2) = 0.2;
  DensityMatrix r3(Region::full(w1), 3, d3);
  CHECK(von_neumann_entropy(r3) == doctest::Approx(1.02965).epsilon(1e-4));

  CHECK(renyi_entropy(r, 2.0) == doctest::Approx(std::log(2.0)));
  CHECK(renyi_entropy(r3, 2.0) == doctest::Approx(-std::log(0.38)));
  CHECK_THROWS(renyi_entropy(r3, 1.0));
  CHECK_THROWS(renyi_entropy(r3, -0.5));
  // monotone decreasing in alpha, and alpha -> 1 recovers von Neumann
  double prev = renyi_entropy(r3, 0.5);
  for (double alpha : {0.9, 1.5, 2.0, 3.0}) {
    const double cur = renyi_entropy(r3, alpha);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  const double s = von_neumann_entropy(r3);
  CHECK(renyi_entropy(r3, 1.0 + 1e-4) == doctest::Approx(s).epsilon(1e-3));
  CHECK(renyi_entropy(r3, 1.0 - 1e-4) == doctest::Approx(s).epsilon(1e-3));

  CHECK(spectral_tail(r3, 0) == doctest::Approx(1.0));
  CHECK(spectral_tail(r3, 1) == doctest::Approx(0.5));
  CHECK(spectral_tail(DensityMatrix(Region::full(w1), 2, proj), 1) ==
        doctest::Approx(0.0));
}

TEST_CASE("trace distance") {
  Window w1({1});
  Eigen::MatrixXcd d0 = Eigen::MatrixXcd::Zero(2, 2), d1 = d0;
  d0(0, 0) = 1.0;
  d1(1, 1) = 1.0;
  DensityMatrix r0(Region::full(w1), 2, d0), r1(Region::full(w1), 2, d1);
  CHECK(trace_distance(r0, r0) == doctest::Approx(0.0));
  CHECK(trace_distance(r0, r1) == doctest::Approx(2.0));

  PureState g3 = make_state(oracle::ghz(3));
  Region a02(g3.window(), {0, 2});
  DensityMatrix marg = reduce(g3, a02);
  DensityMatrix unif(a02, 2, 0.25 * Eigen::MatrixXcd::Identity(4, 4));
  CHECK(trace_distance(marg, unif) == doctest::Approx(1.0));
  CHECK_THROWS_WITH(trace_distance(r0, marg), "region mismatch");
}

TEST_CASE("pinch") {
  PureState g3 = make_state(oracle::ghz(3));
  PinchedEnsemble ens = pinch(g3, Region(g3.window(), {1}));
  REQUIRE(ens.members.size() == 2);
  CHECK(ens.weights[0] == doctest::Approx(0.5));
  CHECK(ens.weights[1] == doctest::Approx(0.5));
  CHECK(std::abs(ens.members[0][0]) == doctest::Approx(1.0));
  CHECK(std::abs(ens.members[1][7]) == doctest::Approx(1.0));

  // empty pinch region returns the state itself
  PinchedEnsemble none = pinch(g3, Region::empty(g3.window()));
  REQUIRE(none.members.size() == 1);
  CHECK(none.weights[0] == doctest::Approx(1.0));

  // product state: every member reduces identically outside the buffer
  std::mt19937_64 rng(13);
  PureState prod = make_state(oracle::product_state(rng, 4));
  Region b(prod.window(), {1});
  PinchedEnsemble pe = pinch(prod, b);
  Region rest(prod.window(), {0, 2, 3});
  DensityMatrix first = reduce(pe.member_state(0, prod), rest);
  for (std::size_t k = 1; k < pe.members.size(); ++k) {
    DensityMatrix other = reduce(pe.member_state(k, prod), rest);
    CHECK((first.matrix() - other.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pinch mixture reproduces the reduced state") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 4; ++t) {
    PureState psi = make_state(oracle::random_state(rng, 6));
    auto regions = oracle::random_disjoint_regions(rng, 6, {2, 2});
    Region a(psi.window(), regions[0]), b(psi.window(), regions[1]);
    PinchedEnsemble ens = pinch(psi, b);
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(4, 4);
    for (std::size_t k = 0; k < ens.members.size(); ++k)
      mix += ens.weights[k] * reduce(ens.member_state(k, psi), a).matrix();
    CHECK((mix - reduce(psi, a).matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("purity and Schmidt symmetry") {
  std::mt19937_64 rng(19);
  for (int n : {6, 8, 10}) {
    PureState psi = make_state(oracle::random_state(rng, n));
    CHECK(entanglement_entropy(psi, Region::full(psi.window())) ==
          doctest::Approx(0.0).epsilon(1e-10));
    std::vector<int> a = oracle::random_disjoint_regions(rng, n, {n / 3})[0];
    Region ra(psi.window(), a);
    const double sa = entanglement_entropy(psi, ra);
    const double sc = entanglement_entropy(psi, ra.complement());
    CHECK(sa == doctest::Approx(sc).epsilon(1e-10));
    CHECK(sa >= 0.0);
    CHECK(sa <= ra.size() * std::log(2.0) + 1e-9);
  }
}
