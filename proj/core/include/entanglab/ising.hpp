#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "entanglab/lattice.hpp"
#include "entanglab/report.hpp"
#include "entanglab/states.hpp"

namespace entanglab {

/// Translation-invariant bond: offset vector (per window dimension) and
/// coupling strength. Each (offset, J) contributes one bond u -> u+offset
/// for every site u with u+offset inside the window.
struct Coupling {
  std::vector<int> offset;
  double strength = 0.0;
};

/// Transverse-field Ising model on a window of qubits. Operator
/// convention: S^z, S^x are the Pauli matrices themselves (eigenvalues
/// +-1); with this choice the 1D nearest-neighbor chain at J = 1 is
/// critical at b = 1.
struct IsingSpec {
  Window window;
  std::vector<Coupling> couplings;     // J >= 0, ferromagnetic
  double transverse_field = 0.0;       // b
  double longitudinal_field = 0.0;     // hz, default 0
};

/// H = -sum_bonds J S^z S^z - hz sum_u S^z_u - b sum_u S^x_u in the
/// z-computational basis: a diagonal part plus -b on every single-flip
/// pair. Off-diagonal entries of (-H) are nonnegative (stoquastic form).
class IsingOperator {
 public:
  IsingOperator(Window window, Eigen::VectorXd diagonal, double transverse_field);

  const Window& window() const { return window_; }
  std::int64_t dim() const { return diagonal_.size(); }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  double transverse_field() const { return transverse_field_; }

  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Eigen::MatrixXd dense() const;  // small windows only

 private:
  Window window_;
  Eigen::VectorXd diagonal_;
  double transverse_field_;
};

IsingOperator build_hamiltonian(const IsingSpec& spec);

struct GroundStateResult {
  double energy = 0.0;
  PureState state;
  double gap = 0.0;  // E1 - E0
  int iterations = 0;
  double residual = 0.0;
  bool degenerate = false;  // gap < 1e-8
};

struct GroundStateOptions {
  double tolerance = 1e-10;
  int max_iterations = 300;
  bool accept_degenerate = false;
};

/// Lowest eigenpair by Lanczos with full reorthogonalization, started from
/// the (normalized) all-ones vector; for b > 0 the Perron-Frobenius ground
/// vector has nonzero overlap with it. b = 0 is handled as an exactly
/// diagonal operator and requires accept_degenerate.
GroundStateResult ground_state(const IsingOperator& h,
                               const GroundStateOptions& opts = {});

enum class Axis { z, x };

/// <S^a_u S^a_v>, minus <S^a_u><S^a_v> when truncated.
double correlator(const PureState& psi, int u, int v, Axis axis, bool truncated);

/// Truncated z covariance of sites u, v under the z-basis measure
/// conditioned on sigma_D; error on a null conditioning event.
double conditional_correlator(const PureState& psi, int u, int v,
                              const SpinConfiguration& given);

struct StoquasticReport {
  bool stoquastic = false;
  double min_real = 0.0;      // most negative real part
  double max_abs_imag = 0.0;
};

/// All amplitudes nonnegative real within 1e-12; call after
/// fix_global_phase.
StoquasticReport stoquastic_check(const PureState& psi);

/// Exhaustive audit of the conditional-correlation inequality
/// <s_u; s_v>_{sigma_D} <= <s_u s_v> over all D with |D| <= max_d and all
/// u, v not in D.
AuditReport dss_audit(const PureState& psi, int max_d, double slack = 1e-10);

}  // namespace entanglab
