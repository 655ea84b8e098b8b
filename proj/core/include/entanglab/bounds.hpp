#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "entanglab/lattice.hpp"
#include "entanglab/report.hpp"
#include "entanglab/states.hpp"

namespace entanglab {

enum class DecayKind { exponential, power };

/// Decay profile phi with phi(0) = 1: e^{-k/xi} or (1 + k/xi)^{-alpha},
/// plus the decoupling distance l0 beyond which the profile applies.
struct DecayModel {
  DecayKind kind = DecayKind::exponential;
  double xi = 1.0;
  double alpha = 3.0;  // power kind only
  double l0 = 0.0;

  double phi(double k) const;
};

using BoundReport = AuditReport;

/// |S(r1) - S(r2)| <= 1/2 T (1 + ln(2 rank(r1-r2)/T)), T the trace distance.
/// Distances below 1e-14 pass trivially.
BoundReport fannes_bound(const DensityMatrix& r1, const DensityMatrix& r2,
                         double slack = 1e-10);

/// For PSD a, b and F(x) = x(1 + ln(1/x)) on [0,1] (1 above):
/// tr F(a+b) <= tr F(a) + tr F(b), and
/// tr F(a+b) <= tr F(a) + N F(tr b / N).
std::vector<BoundReport> f_trace_check(const Eigen::MatrixXcd& a,
                                       const Eigen::MatrixXcd& b,
                                       double slack = 1e-10);

/// tau_{rho_A}(nu^{|B|}) <= 2 delta_B(A|C) + 2 vartheta_B(A|C).
BoundReport tail_mass_audit(const PureState& psi, const Region& a,
                            const Region& b, double slack = 1e-10);

/// Direct sums I1(l;A) = sum_{k=l}^{L} phi(k)(1+k) and
/// I2(l;A) = sum_{k=l}^{L} phi(k)(1 + ln phi(k)^{-1}); `from` may be
/// fractional, terms step by 1 up to length_scale.
double decay_sum_i1(const DecayModel& model, double from, double length_scale);
double decay_sum_i2(const DecayModel& model, double from, double length_scale);

struct AreaLawBound {
  double rhs = 0.0;  // C_d |dA| ln(nu) [l0 + 2(1+l0) I1(0)] + 2 I2(0)
  double i1 = 0.0;
  double i2 = 0.0;
  double single_scale_reference = 0.0;  // |dA| ln max(L(A), 2)
  RegularityReport regularity;
};

/// Multiscale area-law right side with the region's measured constants;
/// the single-scale theorem's constant is not explicit, so only the
/// reference quantity |dA| ln L(A) is reported for ratio tracking.
AreaLawBound area_law_rhs(const DecayModel& model, const Region& a, int nu);

/// Three-term entropy-difference right side at buffer width l >= l0, with
/// the measured |B_l|.
double entropy_diff_rhs(const DecayModel& model, const Region& a, int l, int nu);

/// |S(rho_A(psi)) - S(rho_A(psi_(B_l)))| <= entropy_diff_rhs(...).
BoundReport entropy_diff_audit(const PureState& psi, const Region& a, int l,
                               const DecayModel& model, double slack = 1e-10);

struct DecayFit {
  DecayModel model;
  double max_rel_residual = 0.0;
  bool certificate = false;  // residual < 25% and genuinely decaying
};

/// Least-squares fit of ln(value): against l (exponential) or against
/// ln(1 + l/xi) over a xi grid (power). Values must be positive.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   DecayKind kind);

struct DecouplingRow {
  int l = 0;
  double delta = 0.0;
  double vartheta = 0.0;
  double one_minus_overlap = 0.0;
  double tau = 0.0;
  double entropy_diff = 0.0;
};

/// Width sweep of every decorrelation functional for a fixed region; the
/// exponential fit of delta + vartheta (where positive) is the empirical
/// decay certificate.
struct DecouplingTable {
  Region a;
  std::vector<DecouplingRow> rows;
  bool exact_markov = false;  // delta + vartheta <= 1e-12 at every width
  bool has_fit = false;
  DecayFit fit;
  double l0 = 0.0;  // pointwise-valid decoupling distance of the fit
};

DecouplingTable decoupling_verify(const PureState& psi, const Region& a,
                                  const std::vector<int>& widths);

/// CSV rows `l,delta,vartheta,one_minus_overlap,tau,entropy_diff`.
void write_decoupling_csv(std::ostream& os, const DecouplingTable& table);

}  // namespace entanglab
