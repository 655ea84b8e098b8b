#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "entanglab/decorrelation.hpp"
#include "entanglab/lattice.hpp"
#include "entanglab/report.hpp"
#include "entanglab/states.hpp"

namespace entanglab {

/// psi_(B): conditionally independent across the buffer with additively
/// split phases. Conditioned on any sigma_B, it factorizes into
/// phi_A(sigma_B) ⊗ |sigma_B> ⊗ phi_C(sigma_B).
struct MarkovApproximation {
  Tripartition tri;
  std::vector<std::uint64_t> sector_codes;  // sigma_B with nonzero weight
  std::vector<double> weights;              // p(sigma_B)
  std::vector<Eigen::VectorXcd> phi_a;
  std::vector<Eigen::VectorXcd> phi_c;
  PhaseSplit phase_split;
  PureState assembled;
  double renormalization = 0.0;  // |1 - norm before the final renormalize|
};

/// Assemble psi_(B) from the measure of psi and the given phase split.
/// The split's merged components must reproduce the tripartition.
MarkovApproximation markov_state(const PureState& psi, const Tripartition& tri,
                                 const PhaseSplit& split);

/// rho_hat_A: per-sigma_B leading eigenvector mixture, rank <= dim H_B.
struct ReducedApproximation {
  Region a;
  Region b;
  std::vector<std::uint64_t> sector_codes;
  std::vector<double> weights;
  std::vector<double> leading_values;  // lambda(sigma_B)
  std::vector<Eigen::VectorXcd> leading_vectors;
  DensityMatrix approx;
  double bound = 0.0;     // 2 sum p(sigma_B) (1 - lambda(sigma_B))
  double distance = 0.0;  // ||rho_A - rho_hat_A||_1
};

ReducedApproximation reduced_state_approximation(const PureState& psi,
                                                 const Region& a,
                                                 const Region& b);

struct OverlapReport {
  std::complex<double> overlap;  // <psi|psi_(B)> on the phase-fixed psi
  double trace_distance = 0.0;   // on the tripartition's A
  double bound = 0.0;            // 2 sqrt(2 (1 - Re overlap))
};

OverlapReport overlap_and_fidelity(const PureState& psi,
                                   const MarkovApproximation& approx);

/// Both fidelity inequalities:
/// [1/2 ||rho_A - rho_A(psi_B)||_1]^2 <= 2|1 - <psi|psi_B>| <= 2 delta + 2 vartheta.
AuditReport fidelity_bound_audit(const PureState& psi, const Tripartition& tri,
                                 double slack = 1e-10);

/// I(A1:A2) = S(A1) + S(A2) - S(A1 ∪ A2), in nats.
double mutual_information(const PureState& psi, const Region& a1,
                          const Region& a2);

/// |<O1 O2> - <O1><O2>| <= ||O1|| ||O2|| sqrt(2 I) with I in nats.
AuditReport pinsker_audit(const PureState& psi, const Region& a1,
                          const Region& a2, const Eigen::MatrixXcd& o1,
                          const Eigen::MatrixXcd& o2, double slack = 1e-10);

/// rank(rho_A(psi_B)) <= nu^{|B|} and S(rho_A(psi_B)) <= |B| ln nu.
std::vector<AuditReport> markov_rank_audits(const MarkovApproximation& approx);

}  // namespace entanglab
