#include "entanglab/gibbs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "entanglab/errors.hpp"

namespace entanglab {

namespace {

constexpr int kMaxGibbsSites = 24;

std::vector<std::array<int, 2>> bond_list(const Window& w,
                                          const std::vector<Coupling>& cps,
                                          std::vector<double>& strengths) {
  std::vector<std::array<int, 2>> bonds;
  for (const auto& cp : cps) {
    if (static_cast<int>(cp.offset.size()) != w.dimension())
      throw std::invalid_argument("coupling offset arity does not match window");
    bool zero = true;
    for (int o : cp.offset) zero = zero && o == 0;
    if (zero) throw std::invalid_argument("coupling offset must be nonzero");
    for (int u = 0; u < w.site_count(); ++u) {
      auto c = w.coords(u);
      for (int k = 0; k < w.dimension(); ++k) c[k] += cp.offset[k];
      if (w.contains(c)) {
        bonds.push_back({u, w.site(c)});
        strengths.push_back(cp.strength);
      }
    }
  }
  return bonds;
}

int spin(std::uint64_t code, int site) {
  return spin_of_digit(static_cast<int>((code >> site) & 1));
}

}  // namespace

ProbabilityTable gibbs_measure(const GibbsSpec& spec) {
  const Window& w = spec.window;
  const int n = w.site_count();
  if (n > kMaxGibbsSites)
    throw CapacityError("Gibbs window has " + std::to_string(n) +
                        " sites, limit is " + std::to_string(kMaxGibbsSites));
  std::vector<double> js;
  auto bonds = bond_list(w, spec.couplings, js);
  Eigen::VectorXd energy(std::int64_t(1) << n);
  for (std::int64_t c = 0; c < energy.size(); ++c) {
    double e = 0.0;
    for (std::size_t b = 0; b < bonds.size(); ++b)
      e += js[b] * spin(c, bonds[b][0]) * spin(c, bonds[b][1]);
    if (spec.field != 0.0)
      for (int u = 0; u < n; ++u) e += spec.field * spin(c, u);
    energy[c] = e;
  }
  const double emax = energy.maxCoeff();
  Eigen::VectorXd p = (energy.array() - emax).exp();
  p /= p.sum();
  return ProbabilityTable(Region::full(w), 2, std::move(p));
}

Eigen::VectorXd gibbs_phase(const GibbsSpec& spec) {
  const Window& w = spec.window;
  std::vector<double> js;
  auto bonds = bond_list(w, spec.phase_couplings, js);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(std::int64_t(1) << w.site_count());
  for (std::int64_t c = 0; c < theta.size(); ++c) {
    double t = 0.0;
    for (std::size_t b = 0; b < bonds.size(); ++b)
      t += js[b] * spin(c, bonds[b][0]) * spin(c, bonds[b][1]);
    // wrap into (-pi, pi]
    t = std::remainder(t, 2.0 * std::numbers::pi);
    if (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
    theta[c] = t;
  }
  return theta;
}

PureState gibbs_sqrt_state(const GibbsSpec& spec) {
  ProbabilityTable p = gibbs_measure(spec);
  Eigen::VectorXd theta = gibbs_phase(spec);
  Eigen::VectorXcd amps(p.probs().size());
  for (Eigen::Index c = 0; c < amps.size(); ++c)
    amps[c] = std::sqrt(p.probs()[c]) *
              std::exp(std::complex<double>(0.0, theta[c]));
  return PureState::normalized(spec.window, 2, std::move(amps));
}

}  // namespace entanglab
