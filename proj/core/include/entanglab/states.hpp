#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "entanglab/indexing.hpp"
#include "entanglab/lattice.hpp"

namespace entanglab {

/// Basis-label assignment on a region, encoded as a radix-nu integer whose
/// k-th digit is the label of the region's k-th (sorted) site. For nu = 2,
/// digit 0 <-> sigma = +1, digit 1 <-> sigma = -1.
struct SpinConfiguration {
  Region region;
  std::uint64_t code = 0;
};

/// sigma value (+1/-1) of a binary digit.
inline int spin_of_digit(int digit) { return 1 - 2 * digit; }

/// Unit-norm complex amplitude table over all configurations of a window,
/// in lexicographic configuration order (site 0 = least significant digit).
class PureState {
 public:
  PureState(Window window, int local_dim, Eigen::VectorXcd amplitudes);

  const Window& window() const { return window_; }
  int local_dim() const { return local_dim_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::int64_t dim() const { return amplitudes_.size(); }

  /// Normalizes the given table (error if zero).
  static PureState normalized(Window window, int local_dim,
                              Eigen::VectorXcd amplitudes);

 private:
  Window window_;
  int local_dim_;
  Eigen::VectorXcd amplitudes_;
};

class ProbabilityTable {
 public:
  ProbabilityTable(Region region, int local_dim, Eigen::VectorXd probs);

  const Region& region() const { return region_; }
  int local_dim() const { return local_dim_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  double operator[](std::uint64_t code) const {
    return probs_[static_cast<Eigen::Index>(code)];
  }

 private:
  Region region_;
  int local_dim_;
  Eigen::VectorXd probs_;
};

/// theta(sigma) in (-pi, pi]; defined only where the amplitude modulus
/// exceeds the zero threshold (1e-14).
struct PhaseTable {
  Region region;
  Eigen::VectorXd phases;
  std::vector<char> defined;
};

struct AmplitudeDecomposition {
  ProbabilityTable probabilities;
  PhaseTable phases;
};

/// Hermitian, positive, unit-trace operator on a region's space with its
/// decreasing spectrum cached at construction.
class DensityMatrix {
 public:
  DensityMatrix(Region region, int local_dim, Eigen::MatrixXcd matrix);

  const Region& region() const { return region_; }
  int local_dim() const { return local_dim_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  /// Eigenvalues in decreasing order, clipped into [0, 1].
  const Eigen::VectorXd& spectrum() const { return spectrum_; }
  std::int64_t dim() const { return matrix_.rows(); }
  /// Count of eigenvalues above 1e-12 * lambda_max.
  int numerical_rank() const;

 private:
  Region region_;
  int local_dim_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd spectrum_;
};

/// Outcome ensemble of a non-destructive measurement of sigma_B: weights
/// p(sigma_B) and unit-norm conditional vectors on the full window,
/// supported only on configurations consistent with sigma_B. Null-weight
/// outcomes are omitted.
struct PinchedEnsemble {
  Region buffer;
  std::vector<std::uint64_t> codes;
  std::vector<double> weights;
  std::vector<Eigen::VectorXcd> members;

  PureState member_state(std::size_t k, const PureState& parent) const;
};

/// Multiply by a global phase so the largest-modulus amplitude is real
/// positive (ties broken by lowest configuration code).
PureState fix_global_phase(const PureState& psi);

/// z-basis measure p(sigma) = |psi(sigma)|^2 on the full window.
ProbabilityTable measure(const PureState& psi);

/// p and theta of the phase-fixed representative of psi; the
/// reconstruction sum_sigma e^{i theta} sqrt(p) |sigma> reproduces it on
/// the unmasked support.
AmplitudeDecomposition amplitude_decompose(const PureState& psi);

/// Sum out the digits of region() \ sub.
ProbabilityTable marginal(const ProbabilityTable& p, const Region& sub);

/// Normalized p(sigma_target | given); error "conditioning on null event"
/// if the conditioning event has zero probability.
ProbabilityTable conditional(const ProbabilityTable& p, const Region& target,
                             const SpinConfiguration& given);

/// Partial trace of |psi><psi| onto region a.
DensityMatrix reduce(const PureState& psi, const Region& a);

/// Eigenvalues of reduce(psi, a) in decreasing order, computed on the
/// cheaper side of the bipartition (Schmidt duality).
Eigen::VectorXd reduced_spectrum(const PureState& psi, const Region& a);

/// S(rho_a(psi)) in nats, via reduced_spectrum.
double entanglement_entropy(const PureState& psi, const Region& a);

/// -sum lambda ln lambda, in nats.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const Eigen::VectorXd& spectrum);

/// (1-alpha)^{-1} ln tr rho^alpha; alpha > 0, alpha != 1.
double renyi_entropy(const DensityMatrix& rho, double alpha);

/// tau(n) = sum_{j > n} lambda_j in decreasing order.
double spectral_tail(const DensityMatrix& rho, std::int64_t n);
double spectral_tail(const Eigen::VectorXd& spectrum, std::int64_t n);

/// ||r1 - r2||_1 (sum of absolute eigenvalues of the difference).
double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);

PinchedEnsemble pinch(const PureState& psi, const Region& b);

}  // namespace entanglab
