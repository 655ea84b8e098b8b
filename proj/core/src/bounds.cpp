#include "entanglab/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "entanglab/approximation.hpp"
#include "entanglab/decorrelation.hpp"

namespace entanglab {

double DecayModel::phi(double k) const {
  if (k < 0.0) k = 0.0;
  if (kind == DecayKind::exponential) return std::exp(-k / xi);
  return std::pow(1.0 + k / xi, -alpha);
}

namespace {

// F(x) = x (1 + ln(1/x)) on [0,1], 1 above, 0 at 0
double cap_f(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * (1.0 + std::log(1.0 / x));
}

Eigen::VectorXd psd_eigenvalues(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + " is not square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(std::string(what) + " is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-12)
      throw std::invalid_argument(std::string(what) + " is not PSD");
    if (ev[i] < 0.0) ev[i] = 0.0;
  }
  return ev;
}

}  // namespace

BoundReport fannes_bound(const DensityMatrix& r1, const DensityMatrix& r2,
                         double slack) {
  if (!(r1.region() == r2.region()))
    throw std::invalid_argument("region mismatch");
  const double s1 = von_neumann_entropy(r1);
  const double s2 = von_neumann_entropy(r2);
  const double lhs = std::abs(s1 - s2);

  Eigen::MatrixXcd diff = r1.matrix() - r2.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double t = ev.cwiseAbs().sum();
  if (t < 1e-14)
    return make_audit("fannes", lhs, lhs, slack, {{"trivial", true}});
  const double evmax = ev.cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > 1e-12 * evmax) ++rank;
  const double rhs = 0.5 * t * (1.0 + std::log(2.0 * rank / t));
  return make_audit("fannes", lhs, rhs, slack,
                    {{"trace_distance", t}, {"rank", rank}});
}

std::vector<BoundReport> f_trace_check(const Eigen::MatrixXcd& a,
                                       const Eigen::MatrixXcd& b,
                                       double slack) {
  const Eigen::VectorXd ea = psd_eigenvalues(a, "first operand");
  const Eigen::VectorXd eb = psd_eigenvalues(b, "second operand");
  const Eigen::VectorXd eab = psd_eigenvalues(a + b, "sum");
  auto trace_f = [](const Eigen::VectorXd& ev) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s += cap_f(ev[i]);
    return s;
  };
  const double fab = trace_f(eab);
  const double fa = trace_f(ea);
  const double fb = trace_f(eb);
  const double n = static_cast<double>(a.rows());
  const double trb = eb.sum();
  return {make_audit("f_trace_subadditivity", fab, fa + fb, slack),
          make_audit("f_trace_jensen", fab, fa + n * cap_f(trb / n), slack)};
}

BoundReport tail_mass_audit(const PureState& psi, const Region& a,
                            const Region& b, double slack) {
  if (!a.disjoint_with(b)) throw std::invalid_argument("regions overlap");
  const Region c = a.set_union(b).complement();
  const Tripartition tri{a, b, c};
  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const PhaseSplit split = phase_deficit(dec, tri);
  const double delta = tv_conditional(dec.probabilities, a, b, c).value;
  const std::int64_t nb =
      static_cast<std::int64_t>(config_count(b, psi.local_dim()));
  const double tau = spectral_tail(reduced_spectrum(psi, a), nb);
  return make_audit("tail_mass", tau, 2.0 * delta + 2.0 * split.objective, slack,
                    {{"delta", delta},
                     {"vartheta", split.objective},
                     {"tail_index", nb}});
}

double decay_sum_i1(const DecayModel& model, double from, double length_scale) {
  double s = 0.0;
  for (double k = std::max(0.0, from); k <= length_scale + 1e-12; k += 1.0)
    s += model.phi(k) * (1.0 + k);
  return s;
}

double decay_sum_i2(const DecayModel& model, double from, double length_scale) {
  double s = 0.0;
  for (double k = std::max(0.0, from); k <= length_scale + 1e-12; k += 1.0) {
    const double p = model.phi(k);
    if (p > 0.0) s += p * (1.0 - std::log(p));
  }
  return s;
}

AreaLawBound area_law_rhs(const DecayModel& model, const Region& a, int nu) {
  AreaLawBound out;
  out.regularity = regularity_check(a);
  if (!out.regularity.is_regular)
    throw std::invalid_argument("region is not regular");
  const double L = std::ceil(out.regularity.length_scale);
  out.i1 = decay_sum_i1(model, 0.0, L);
  out.i2 = decay_sum_i2(model, 0.0, L);
  out.rhs = out.regularity.C_d * out.regularity.boundary_size * std::log(nu) *
                (model.l0 + 2.0 * (1.0 + model.l0) * out.i1) +
            2.0 * out.i2;
  out.single_scale_reference =
      out.regularity.boundary_size *
      std::log(std::max(out.regularity.length_scale, 2.0));
  return out;
}

double entropy_diff_rhs(const DecayModel& model, const Region& a, int l, int nu) {
  if (static_cast<double>(l) < model.l0)
    throw std::invalid_argument("width below the decoupling distance l0");
  const RegularityReport reg = regularity_check(a);
  const double L = std::ceil(reg.length_scale);
  const Tripartition tri = buffer(a, l);
  const double k0 = l - model.l0;

  const double s = std::sqrt(2.0 * model.phi(k0));
  const double term1 =
      s > 0.0 ? s * (1.0 + tri.b.size() * std::log(nu) - std::log(s)) : 0.0;
  const double term2 = 2.0 * reg.C_d * reg.boundary_size * std::log(nu) *
                       (l + 1.0) * decay_sum_i1(model, k0, L);
  const double term3 = 2.0 * decay_sum_i2(model, k0, L);
  return term1 + term2 + term3;
}

BoundReport entropy_diff_audit(const PureState& psi, const Region& a, int l,
                               const DecayModel& model, double slack) {
  const Tripartition tri = buffer(a, l);
  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const PhaseSplit split = phase_deficit(dec, tri);
  const MarkovApproximation mk = markov_state(psi, tri, split);
  const double s_psi = entanglement_entropy(psi, a);
  const double s_apx = entanglement_entropy(mk.assembled, a);
  const double lhs = std::abs(s_psi - s_apx);
  const double rhs = entropy_diff_rhs(model, a, l, psi.local_dim());
  return make_audit("entropy_diff", lhs, rhs, slack,
                    {{"l", l},
                     {"l0", model.l0},
                     {"entropy", s_psi},
                     {"entropy_approx", s_apx}});
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   DecayKind kind) {
  if (series.size() < 3)
    throw std::invalid_argument("decay fit needs at least 3 points");
  for (const auto& [l, y] : series)
    if (y <= 0.0) throw std::invalid_argument("decay fit needs positive values");

  auto linear_fit = [](const std::vector<double>& x, const std::vector<double>& y,
                       double& slope, double& intercept) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
    intercept = (sy - slope * sx) / n;
  };

  DecayFit out;
  out.model.kind = kind;
  std::vector<double> ly;
  for (const auto& [l, y] : series) ly.push_back(std::log(y));

  if (kind == DecayKind::exponential) {
    std::vector<double> xs;
    for (const auto& [l, y] : series) xs.push_back(l);
    double slope, intercept;
    linear_fit(xs, ly, slope, intercept);
    const bool decaying = slope < -1e-12;
    out.model.xi = decaying ? -1.0 / slope
                            : std::numeric_limits<double>::infinity();
    out.model.l0 = decaying ? std::max(0.0, intercept * out.model.xi) : 0.0;
    double resid = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double fit = std::exp(intercept + slope * xs[i]);
      resid = std::max(resid, std::abs(fit - series[i].second) / series[i].second);
    }
    out.max_rel_residual = resid;
    out.certificate = decaying && resid < 0.25;
    return out;
  }

  // power: grid over xi, alpha and prefactor by linear least squares
  double best_resid = std::numeric_limits<double>::infinity();
  for (int g = 0; g < 80; ++g) {
    const double xi = 0.05 * std::pow(50.0 / 0.05, g / 79.0);
    std::vector<double> xs;
    for (const auto& [l, y] : series) xs.push_back(std::log(1.0 + l / xi));
    double slope, intercept;
    linear_fit(xs, ly, slope, intercept);
    double resid = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double fit = std::exp(intercept + slope * xs[i]);
      resid = std::max(resid, std::abs(fit - series[i].second) / series[i].second);
    }
    if (resid < best_resid) {
      best_resid = resid;
      out.model.xi = xi;
      out.model.alpha = -slope;
      out.model.l0 = 0.0;
    }
  }
  out.max_rel_residual = best_resid;
  out.certificate = out.model.alpha > 0.0 && best_resid < 0.25;
  return out;
}

DecouplingTable decoupling_verify(const PureState& psi, const Region& a,
                                  const std::vector<int>& widths) {
  if (widths.empty()) throw std::invalid_argument("no widths given");
  for (std::size_t i = 1; i < widths.size(); ++i)
    if (widths[i] <= widths[i - 1])
      throw std::invalid_argument("widths must be increasing");
  if (buffer(a, widths.back()).c.is_empty())
    throw std::invalid_argument("buffer exhausts complement");

  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const Eigen::VectorXd spectrum = reduced_spectrum(psi, a);
  const double s_psi = von_neumann_entropy(spectrum);

  DecouplingTable table;
  table.a = a;
  for (int l : widths) {
    const Tripartition tri = buffer(a, l);
    const PhaseSplit split = phase_deficit(dec, tri);
    const MarkovApproximation mk = markov_state(psi, tri, split);
    const OverlapReport ov = overlap_and_fidelity(psi, mk);
    DecouplingRow row;
    row.l = l;
    row.delta = tv_conditional(dec.probabilities, a, tri.b, tri.c).value;
    row.vartheta = split.objective;
    row.one_minus_overlap = 1.0 - std::abs(ov.overlap);
    row.tau = spectral_tail(
        spectrum,
        static_cast<std::int64_t>(config_count(tri.b, psi.local_dim())));
    row.entropy_diff = std::abs(s_psi - entanglement_entropy(mk.assembled, a));
    table.rows.push_back(row);
  }

  double worst = 0.0;
  std::vector<std::pair<double, double>> fit_series;
  for (const auto& r : table.rows) {
    const double y = r.delta + r.vartheta;
    worst = std::max(worst, y);
    if (y > 0.0) fit_series.emplace_back(r.l, y);
  }
  table.exact_markov = worst <= 1e-12;
  if (!table.exact_markov && fit_series.size() >= 3) {
    table.fit = decay_fit(fit_series, DecayKind::exponential);
    table.has_fit = true;
    // smallest l0 making phi(l - l0) >= measured at every width
    double l0 = table.fit.model.l0;
    if (std::isfinite(table.fit.model.xi))
      for (const auto& [l, y] : fit_series)
        l0 = std::max(l0, l + table.fit.model.xi * std::log(y));
    table.l0 = std::max(0.0, l0);
    table.fit.model.l0 = table.l0;
  }
  return table;
}

void write_decoupling_csv(std::ostream& os, const DecouplingTable& table) {
  os << "l,delta,vartheta,one_minus_overlap,tau,entropy_diff\n";
  char buf[160];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.l,
                  r.delta, r.vartheta, r.one_minus_overlap, r.tau,
                  r.entropy_diff);
    os << buf;
  }
}

}  // namespace entanglab
