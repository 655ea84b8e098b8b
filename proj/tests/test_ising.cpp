#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "entanglab/errors.hpp"
#include "entanglab/ising.hpp"
#include "oracles.hpp"

using namespace entanglab;

namespace {

IsingSpec chain(int n, double j, double b, double hz = 0.0) {
  return IsingSpec{Window({n}), {{{1}, j}}, b, hz};
}

}  // namespace

TEST_CASE("single-site transverse field") {
  GroundStateResult g = ground_state(build_hamiltonian(chain(1, 0.0, 1.0)));
  CHECK(g.energy == doctest::Approx(-1.0));
  CHECK(std::abs(g.state.amplitudes()[0] - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(g.state.amplitudes()[1] - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(g.gap == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("two-site classical limit is degenerate") {
  IsingOperator h = build_hamiltonian(chain(2, 1.0, 0.0));
  CHECK(h.diagonal()[0] == doctest::Approx(-1.0));
  CHECK(h.diagonal()[1] == doctest::Approx(1.0));
  CHECK(h.diagonal()[2] == doctest::Approx(1.0));
  CHECK(h.diagonal()[3] == doctest::Approx(-1.0));
  CHECK_THROWS(ground_state(h));
  GroundStateResult g = ground_state(h, {.accept_degenerate = true});
  CHECK(g.degenerate);
  CHECK(g.gap == doctest::Approx(0.0));
  CHECK(g.energy == doctest::Approx(-1.0));
}

TEST_CASE("two-site ground energy matches the dense oracle") {
  GroundStateResult g = ground_state(build_hamiltonian(chain(2, 1.0, 1.0)));
  CHECK(g.energy == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-10));
}

TEST_CASE("matvec agrees with the dense construction") {
  std::mt19937_64 rng(23);
  for (int n : {3, 6, 8}) {
    IsingOperator h = build_hamiltonian(chain(n, 0.7, 1.3, 0.2));
    Eigen::MatrixXd dense = oracle::dense_tfim_chain(n, 0.7, 1.3, 0.2);
    Eigen::VectorXd v(h.dim()), out;
    std::normal_distribution<double> gauss;
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    h.apply(v, out);
    CHECK((out - dense * v).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("Lanczos matches dense diagonalization at n = 10") {
  IsingOperator h = build_hamiltonian(chain(10, 1.0, 2.0));
  GroundStateResult g = ground_state(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      oracle::dense_tfim_chain(10, 1.0, 2.0));
  CHECK(g.energy == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-9));
  CHECK(g.gap ==
        doctest::Approx(es.eigenvalues()[1] - es.eigenvalues()[0]).epsilon(1e-6));
  CHECK(g.residual < 1e-10);
  CHECK_FALSE(g.degenerate);
}

TEST_CASE("hamiltonian validation") {
  CHECK_THROWS(build_hamiltonian(chain(4, -1.0, 1.0)));  // antiferromagnetic
  CHECK_THROWS(build_hamiltonian(IsingSpec{Window({4}), {{{0}, 1.0}}, 1.0, 0.0}));
  CHECK_THROWS_AS(build_hamiltonian(chain(25, 1.0, 1.0)), CapacityError);
}

TEST_CASE("ground states are stoquastic, spin-flip symmetric, variational") {
  std::mt19937_64 rng(29);
  for (double b : {0.7, 1.5, 3.0}) {
    GroundStateResult g = ground_state(build_hamiltonian(chain(8, 1.0, b)));
    StoquasticReport s = stoquastic_check(g.state);
    CHECK(s.stoquastic);
    // p(sigma) = p(-sigma) at hz = 0
    const auto& amps = g.state.amplitudes();
    const std::int64_t mask = (1 << 8) - 1;
    for (std::int64_t c = 0; c < amps.size(); ++c)
      CHECK(std::norm(amps[c]) ==
            doctest::Approx(std::norm(amps[c ^ mask])).epsilon(1e-10));
    // variational property on random trials
    IsingOperator h = build_hamiltonian(chain(8, 1.0, b));
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXcd v = oracle::random_state(rng, 8);
      Eigen::VectorXd re = v.real(), im = v.imag(), hre, him;
      h.apply(re, hre);
      h.apply(im, him);
      const double energy = re.dot(hre) + im.dot(him);
      CHECK(energy >= g.energy - 1e-10);
    }
  }
}

TEST_CASE("non-stoquastic states are flagged") {
  Eigen::VectorXcd minus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  PureState psi = fix_global_phase(PureState(Window({1}), 2, minus));
  CHECK_FALSE(stoquastic_check(psi).stoquastic);

  std::mt19937_64 rng(31);
  PureState rnd = fix_global_phase(
      PureState(Window({4}), 2, oracle::random_state(rng, 4)));
  CHECK_FALSE(stoquastic_check(rnd).stoquastic);
}

TEST_CASE("correlators") {
  // frozen ferromagnet sector: equal superposition of the two aligned configs
  GroundStateResult frozen =
      ground_state(build_hamiltonian(chain(4, 1.0, 0.0)), {.accept_degenerate = true});
  CHECK(correlator(frozen.state, 0, 3, Axis::z, false) == doctest::Approx(1.0));
  GroundStateResult g = ground_state(build_hamiltonian(chain(6, 1.0, 2.0)));
  CHECK(correlator(g.state, 2, 2, Axis::z, false) == doctest::Approx(1.0));
  CHECK(correlator(g.state, 1, 1, Axis::x, false) == doctest::Approx(1.0));

  // x correlator against a dense expectation
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      oracle::dense_tfim_chain(6, 1.0, 2.0));
  Eigen::VectorXd psi = es.eigenvectors().col(0);
  double xx = 0.0;
  for (std::int64_t c = 0; c < psi.size(); ++c)
    xx += psi[c] * psi[c ^ 1 ^ (1 << 3)];
  CHECK(correlator(g.state, 0, 3, Axis::x, false) ==
        doctest::Approx(xx).epsilon(1e-8));

  // truncated z decay along the chain
  double prev = 1.0;
  for (int v = 1; v < 6; ++v) {
    const double c = correlator(g.state, 0, v, Axis::z, true);
    CHECK(c > 0.0);
    CHECK(c < prev + 1e-12);
    prev = c;
  }
}

TEST_CASE("conditional correlators") {
  GroundStateResult g = ground_state(build_hamiltonian(chain(8, 1.0, 2.0)));
  const Window& w = g.state.window();
  // vacuous conditioning equals the truncated correlator
  CHECK(conditional_correlator(g.state, 1, 5, {Region::empty(w), 0}) ==
        doctest::Approx(correlator(g.state, 1, 5, Axis::z, true)));
  // product state: conditioning changes nothing, covariance vanishes
  std::mt19937_64 rng(37);
  PureState prod = PureState(Window({5}), 2, oracle::product_state(rng, 5));
  CHECK(conditional_correlator(prod, 0, 4, {Region(prod.window(), {2}), 1}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS(conditional_correlator(g.state, 1, 5, {Region(w, {1}), 0}));
}

TEST_CASE("exhaustive DSS audit on small ground states") {
  for (double b : {1.5, 2.0}) {
    GroundStateResult g = ground_state(build_hamiltonian(chain(8, 1.0, b)));
    AuditReport rep = dss_audit(g.state, 2);
    CHECK(rep.pass);
    CHECK(rep.margin >= -1e-10);
  }
}
