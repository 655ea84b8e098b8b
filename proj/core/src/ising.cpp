#include "entanglab/ising.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "entanglab/errors.hpp"

namespace entanglab {

namespace {

constexpr int kMaxIsingSites = 24;
constexpr double kDegenerateGap = 1e-8;
constexpr double kNullEvent = 1e-300;

void require_qubits(const PureState& psi) {
  if (psi.local_dim() != 2)
    throw std::invalid_argument("Ising operations require local dimension 2");
}

int spin_bit(std::uint64_t code, int site) {
  return spin_of_digit(static_cast<int>((code >> site) & 1));
}

}  // namespace

IsingOperator::IsingOperator(Window window, Eigen::VectorXd diagonal,
                             double transverse_field)
    : window_(std::move(window)), diagonal_(std::move(diagonal)),
      transverse_field_(transverse_field) {}

void IsingOperator::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  const int n = window_.site_count();
  out = diagonal_.cwiseProduct(in);
  if (transverse_field_ == 0.0) return;
  const std::int64_t d = dim();
  for (std::int64_t c = 0; c < d; ++c) {
    double acc = 0.0;
    for (int u = 0; u < n; ++u) acc += in[c ^ (std::int64_t(1) << u)];
    out[c] -= transverse_field_ * acc;
  }
}

Eigen::MatrixXd IsingOperator::dense() const {
  if (dim() > 4096)
    throw CapacityError("dense Hamiltonian dimension " + std::to_string(dim()) +
                        " exceeds limit 4096");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
  const int n = window_.site_count();
  for (std::int64_t c = 0; c < dim(); ++c) {
    m(c, c) = diagonal_[c];
    for (int u = 0; u < n; ++u)
      m(c ^ (std::int64_t(1) << u), c) -= transverse_field_;
  }
  return m;
}

IsingOperator build_hamiltonian(const IsingSpec& spec) {
  const Window& w = spec.window;
  const int n = w.site_count();
  if (n > kMaxIsingSites)
    throw CapacityError("Ising window has " + std::to_string(n) +
                        " sites, limit is " + std::to_string(kMaxIsingSites));
  if (spec.transverse_field < 0.0)
    throw std::invalid_argument("transverse field must be >= 0");
  for (const auto& cp : spec.couplings) {
    if (cp.strength < 0.0)
      throw std::invalid_argument("couplings must be ferromagnetic (J >= 0)");
    if (static_cast<int>(cp.offset.size()) != w.dimension())
      throw std::invalid_argument("coupling offset arity does not match window");
    bool zero = true;
    for (int o : cp.offset) zero = zero && o == 0;
    if (zero) throw std::invalid_argument("coupling offset must be nonzero");
  }

  // bond list: u -> u+offset for every in-window translate
  std::vector<std::array<int, 2>> bonds;
  std::vector<double> bond_j;
  for (const auto& cp : spec.couplings) {
    for (int u = 0; u < n; ++u) {
      auto c = w.coords(u);
      for (int k = 0; k < w.dimension(); ++k) c[k] += cp.offset[k];
      if (w.contains(c)) {
        bonds.push_back({u, w.site(c)});
        bond_j.push_back(cp.strength);
      }
    }
  }

  Eigen::VectorXd diag(std::int64_t(1) << n);
  for (std::int64_t c = 0; c < diag.size(); ++c) {
    double e = 0.0;
    for (std::size_t b = 0; b < bonds.size(); ++b)
      e -= bond_j[b] * spin_bit(c, bonds[b][0]) * spin_bit(c, bonds[b][1]);
    if (spec.longitudinal_field != 0.0)
      for (int u = 0; u < n; ++u)
        e -= spec.longitudinal_field * spin_bit(c, u);
    diag[c] = e;
  }
  return IsingOperator(w, std::move(diag), spec.transverse_field);
}

namespace {

// Lanczos with full reorthogonalization; lowest Ritz pair of h restricted
// to the orthogonal complement of `deflate` (may be empty).
struct LanczosOut {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
  bool converged = false;
};

LanczosOut lanczos_lowest(const IsingOperator& h, const Eigen::VectorXd& start,
                          const std::vector<Eigen::VectorXd>& deflate,
                          double tol, int max_iter) {
  const std::int64_t d = h.dim();
  max_iter = static_cast<int>(std::min<std::int64_t>(max_iter, d));
  if (static_cast<double>(d) * (max_iter + 1) * 8.0 > 4e9)
    throw CapacityError("Lanczos basis of " + std::to_string(max_iter + 1) +
                        " vectors at dimension " + std::to_string(d) +
                        " exceeds the memory budget");
  std::vector<Eigen::VectorXd> basis;
  auto project_out = [&](Eigen::VectorXd& v) {
    for (const auto& x : deflate) v -= x.dot(v) * x;
    for (const auto& x : basis) v -= x.dot(v) * x;
  };

  Eigen::VectorXd v = start;
  project_out(v);
  if (v.norm() < 1e-14)
    throw std::runtime_error("Lanczos start vector lies in the deflated space");
  v /= v.norm();
  basis.push_back(v);

  std::vector<double> alpha, beta;  // beta[k] couples v_k and v_{k+1}
  Eigen::VectorXd w(d);
  LanczosOut out;
  for (int k = 0; k < max_iter; ++k) {
    h.apply(basis[k], w);
    alpha.push_back(basis[k].dot(w));
    project_out(w);
    project_out(w);  // second pass keeps orthogonality at 1e-14
    const double b = w.norm();

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    out.value = es.eigenvalues()[0];
    out.iterations = k + 1;
    const double resid_est = b * std::abs(s[m - 1]);
    if (resid_est < tol * 0.1 || b < 1e-14 || m == d) {
      out.vector = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < m; ++i) out.vector += s[i] * basis[i];
      out.vector /= out.vector.norm();
      out.converged = true;
      return out;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  // not converged: return the best Ritz pair anyway
  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::VectorXd s = es.eigenvectors().col(0);
  out.value = es.eigenvalues()[0];
  out.vector = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < m; ++i) out.vector += s[i] * basis[i];
  out.vector /= out.vector.norm();
  return out;
}

GroundStateResult diagonal_ground(const IsingOperator& h) {
  const auto& diag = h.diagonal();
  const double e0 = diag.minCoeff();
  double e1 = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> minima;
  for (std::int64_t c = 0; c < diag.size(); ++c) {
    if (diag[c] <= e0 + 1e-14) minima.push_back(c);
  }
  for (std::int64_t c = 0; c < diag.size(); ++c)
    if (diag[c] > e0 + 1e-14) e1 = std::min(e1, diag[c]);
  const double gap = minima.size() > 1 ? 0.0 : e1 - e0;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(diag.size());
  for (std::int64_t c : minima) amps[c] = 1.0 / std::sqrt(double(minima.size()));
  GroundStateResult r{e0, PureState(h.window(), 2, std::move(amps)),
                      gap, 0, 0.0, gap < kDegenerateGap};
  return r;
}

}  // namespace

GroundStateResult ground_state(const IsingOperator& h,
                               const GroundStateOptions& opts) {
  if (h.transverse_field() == 0.0) {
    if (!opts.accept_degenerate)
      throw std::invalid_argument(
          "b = 0 ground space is degenerate; request degenerate-accepting mode");
    return diagonal_ground(h);
  }

  const std::int64_t d = h.dim();
  Eigen::VectorXd start = Eigen::VectorXd::Ones(d);
  LanczosOut g = lanczos_lowest(h, start, {}, opts.tolerance, opts.max_iterations);

  Eigen::VectorXd hx(d);
  h.apply(g.vector, hx);
  const double residual = (hx - g.value * g.vector).norm();
  if (residual > opts.tolerance)
    throw std::runtime_error("ground state did not converge: residual " +
                             std::to_string(residual));

  // first excited level from a deflated second pass; start vector chosen
  // deterministically orthogonal to the ground vector
  double e1 = g.value;
  if (d > 1) {
    Eigen::VectorXd s2 = Eigen::VectorXd::Zero(d);
    s2[0] = 1.0;
    s2 -= g.vector[0] * g.vector;
    if (s2.norm() < 1e-10) {
      s2 = Eigen::VectorXd::Zero(d);
      s2[d - 1] = 1.0;
      s2 -= g.vector[d - 1] * g.vector;
    }
    LanczosOut x = lanczos_lowest(h, s2, {g.vector}, 1e-8, opts.max_iterations);
    e1 = x.value;
  }

  PureState state =
      fix_global_phase(PureState(h.window(), 2, g.vector.cast<std::complex<double>>()));
  GroundStateResult r{g.value, std::move(state), e1 - g.value,
                      g.iterations, residual, (e1 - g.value) < kDegenerateGap};
  if (r.degenerate && !opts.accept_degenerate)
    throw std::runtime_error("ground state is numerically degenerate (gap " +
                             std::to_string(r.gap) + ")");
  return r;
}

double correlator(const PureState& psi, int u, int v, Axis axis, bool truncated) {
  require_qubits(psi);
  const int n = psi.window().site_count();
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw std::invalid_argument("correlator site out of range");
  const auto& a = psi.amplitudes();
  double uv = 0.0, eu = 0.0, ev = 0.0;
  if (axis == Axis::z) {
    for (std::int64_t c = 0; c < a.size(); ++c) {
      const double p = std::norm(a[c]);
      const int su = spin_bit(c, u), sv = spin_bit(c, v);
      uv += p * su * sv;
      eu += p * su;
      ev += p * sv;
    }
  } else {
    const std::int64_t mu = std::int64_t(1) << u, mv = std::int64_t(1) << v;
    for (std::int64_t c = 0; c < a.size(); ++c) {
      uv += std::real(std::conj(a[c]) * a[c ^ mu ^ mv]);
      eu += std::real(std::conj(a[c]) * a[c ^ mu]);
      ev += std::real(std::conj(a[c]) * a[c ^ mv]);
    }
  }
  return truncated ? uv - eu * ev : uv;
}

double conditional_correlator(const PureState& psi, int u, int v,
                              const SpinConfiguration& given) {
  require_qubits(psi);
  const Region& d = given.region;
  if (d.contains(u) || d.contains(v))
    throw std::invalid_argument("conditioning region contains a target site");
  const auto& a = psi.amplitudes();
  const Region full = Region::full(psi.window());
  double m = 0.0, su = 0.0, sv = 0.0, suv = 0.0;
  for (std::int64_t c = 0; c < a.size(); ++c) {
    if (extract_code(full, d, 2, c) != given.code) continue;
    const double p = std::norm(a[c]);
    const int xu = spin_bit(c, u), xv = spin_bit(c, v);
    m += p;
    su += p * xu;
    sv += p * xv;
    suv += p * xu * xv;
  }
  if (m < kNullEvent) throw std::invalid_argument("conditioning on null event");
  return suv / m - (su / m) * (sv / m);
}

StoquasticReport stoquastic_check(const PureState& psi) {
  StoquasticReport rep;
  rep.min_real = std::numeric_limits<double>::infinity();
  for (std::int64_t c = 0; c < psi.dim(); ++c) {
    rep.min_real = std::min(rep.min_real, psi.amplitudes()[c].real());
    rep.max_abs_imag = std::max(rep.max_abs_imag,
                                std::abs(psi.amplitudes()[c].imag()));
  }
  rep.stoquastic = rep.min_real >= -1e-12 && rep.max_abs_imag <= 1e-12;
  return rep;
}

AuditReport dss_audit(const PureState& psi, int max_d, double slack) {
  require_qubits(psi);
  const int n = psi.window().site_count();
  if (n > 14)
    throw CapacityError("DSS exhaustive audit limited to 14 sites, got " +
                        std::to_string(n));
  const auto& a = psi.amplitudes();
  const std::int64_t dim = a.size();

  // unconditioned <s_u s_v> for all pairs
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t c = 0; c < dim; ++c) {
    const double p = std::norm(a[c]);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        raw(u, v) += p * spin_bit(c, u) * spin_bit(c, v);
  }

  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_lhs = 0.0, worst_rhs = 0.0;
  std::int64_t instances = 0;
  nlohmann::json worst_at;

  // enumerate conditioning sets D as site-index combinations
  std::vector<int> comb;
  auto scan_d = [&](const std::vector<int>& dsites) {
    const int k = static_cast<int>(dsites.size());
    const std::int64_t sectors = std::int64_t(1) << k;
    // per sector and pair accumulators
    const int pairs = n * n;
    std::vector<double> m(sectors, 0.0), su(sectors * n, 0.0),
        sp(sectors * pairs, 0.0);
    for (std::int64_t c = 0; c < dim; ++c) {
      std::int64_t sec = 0;
      for (int i = 0; i < k; ++i) sec |= ((c >> dsites[i]) & 1) << i;
      const double p = std::norm(a[c]);
      m[sec] += p;
      for (int u = 0; u < n; ++u)
        su[sec * n + u] += p * spin_bit(c, u);
      for (int u = 0; u < n; ++u) {
        const int xu = spin_bit(c, u);
        for (int v = u + 1; v < n; ++v)
          sp[sec * pairs + u * n + v] += p * xu * spin_bit(c, v);
      }
    }
    for (std::int64_t sec = 0; sec < sectors; ++sec) {
      if (m[sec] < kNullEvent) continue;
      for (int u = 0; u < n; ++u) {
        if (std::find(dsites.begin(), dsites.end(), u) != dsites.end()) continue;
        for (int v = u + 1; v < n; ++v) {
          if (std::find(dsites.begin(), dsites.end(), v) != dsites.end()) continue;
          const double cov = sp[sec * pairs + u * n + v] / m[sec] -
                             (su[sec * n + u] / m[sec]) * (su[sec * n + v] / m[sec]);
          ++instances;
          const double margin = raw(u, v) - cov;
          if (margin < worst_margin) {
            worst_margin = margin;
            worst_lhs = cov;
            worst_rhs = raw(u, v);
            worst_at = {{"u", u}, {"v", v}, {"d_sites", dsites}, {"sigma_d", sec}};
          }
        }
      }
    }
  };

  // scan_d is called once per distinct D (including D = empty)
  std::function<void(int, int)> enumerate = [&](int start, int depth) {
    if (depth > 0) scan_d(comb);
    if (static_cast<int>(comb.size()) == max_d) return;
    for (int s = start; s < n; ++s) {
      comb.push_back(s);
      enumerate(s + 1, depth + 1);
      comb.pop_back();
    }
  };
  scan_d({});
  enumerate(0, 0);

  return make_audit("dss", worst_lhs, worst_rhs, slack,
                    {{"instances", instances},
                     {"worst", worst_at},
                     {"max_conditioning_sites", max_d}});
}

}  // namespace entanglab
