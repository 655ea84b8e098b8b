#include "entanglab/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "entanglab/errors.hpp"

namespace entanglab {

namespace {

constexpr int kMaxStateSites = 24;
constexpr std::int64_t kMaxDensityDim = 4096;
constexpr double kZeroAmplitude = 1e-14;
constexpr double kNullEvent = 1e-300;

void check_local_dim(int nu) {
  if (nu < 2 || nu > 4)
    throw std::invalid_argument("local dimension must be in [2, 4]");
}

int position_in(const Region& parent, int site) {
  const auto& s = parent.sites();
  auto it = std::lower_bound(s.begin(), s.end(), site);
  if (it == s.end() || *it != site)
    throw std::invalid_argument("sub-region not contained in parent region");
  return static_cast<int>(it - s.begin());
}

}  // namespace

std::vector<std::uint64_t> embed_codes(const Region& parent, const Region& sub,
                                       int nu) {
  std::vector<std::uint64_t> strides(sub.size());
  for (int k = 0; k < sub.size(); ++k)
    strides[k] = ipow(nu, position_in(parent, sub.sites()[k]));
  std::vector<std::uint64_t> table(config_count(sub, nu));
  for (std::uint64_t j = 0; j < table.size(); ++j) {
    std::uint64_t code = 0, rest = j;
    for (int k = 0; k < sub.size(); ++k) {
      code += (rest % nu) * strides[k];
      rest /= nu;
    }
    table[j] = code;
  }
  return table;
}

std::uint64_t extract_code(const Region& parent, const Region& sub, int nu,
                           std::uint64_t parent_code) {
  std::uint64_t out = 0, stride = 1;
  for (int k = 0; k < sub.size(); ++k) {
    out += stride * digit_at(parent_code, position_in(parent, sub.sites()[k]), nu);
    stride *= nu;
  }
  return out;
}

std::vector<std::uint32_t> sub_index_array(const Region& parent,
                                           const Region& sub, int nu) {
  const auto es = embed_codes(parent, sub, nu);
  const auto er = embed_codes(parent, parent.set_minus(sub), nu);
  std::vector<std::uint32_t> idx(config_count(parent, nu));
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = 0; j < er.size(); ++j)
      idx[es[i] + er[j]] = static_cast<std::uint32_t>(i);
  return idx;
}

PureState::PureState(Window window, int local_dim, Eigen::VectorXcd amplitudes)
    : window_(std::move(window)), local_dim_(local_dim),
      amplitudes_(std::move(amplitudes)) {
  check_local_dim(local_dim_);
  if (window_.site_count() > kMaxStateSites)
    throw CapacityError("state window has " +
                        std::to_string(window_.site_count()) +
                        " sites, limit is " + std::to_string(kMaxStateSites));
  const auto expect = ipow(local_dim_, window_.site_count());
  if (static_cast<std::uint64_t>(amplitudes_.size()) != expect)
    throw std::invalid_argument("amplitude table size does not match window");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("state vector is not normalized");
}

PureState PureState::normalized(Window window, int local_dim,
                                Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (n <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return PureState(std::move(window), local_dim, amplitudes / n);
}

ProbabilityTable::ProbabilityTable(Region region, int local_dim,
                                   Eigen::VectorXd probs)
    : region_(std::move(region)), local_dim_(local_dim), probs_(std::move(probs)) {
  check_local_dim(local_dim_);
  if (static_cast<std::uint64_t>(probs_.size()) != config_count(region_, local_dim_))
    throw std::invalid_argument("probability table size does not match region");
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (probs_[i] < -1e-15)
      throw std::invalid_argument("probability table has a negative entry");
    if (probs_[i] < 0.0) probs_[i] = 0.0;
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("probability table does not sum to 1");
}

DensityMatrix::DensityMatrix(Region region, int local_dim, Eigen::MatrixXcd matrix)
    : region_(std::move(region)), local_dim_(local_dim), matrix_(std::move(matrix)) {
  check_local_dim(local_dim_);
  const auto expect = config_count(region_, local_dim_);
  if (expect > static_cast<std::uint64_t>(kMaxDensityDim))
    throw CapacityError("density matrix dimension " + std::to_string(expect) +
                        " exceeds limit " + std::to_string(kMaxDensityDim));
  if (static_cast<std::uint64_t>(matrix_.rows()) != expect ||
      static_cast<std::uint64_t>(matrix_.cols()) != expect)
    throw std::invalid_argument("density matrix size does not match region");
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(matrix_.trace().real() - 1.0) > 1e-10)
    throw std::invalid_argument("density matrix trace is not 1");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_,
                                                     Eigen::EigenvaluesOnly);
  spectrum_ = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < spectrum_.size(); ++i) {
    if (spectrum_[i] < -1e-10)
      throw std::invalid_argument("density matrix has eigenvalue " +
                                  std::to_string(spectrum_[i]) + " below -1e-10");
    if (spectrum_[i] < 0.0) spectrum_[i] = 0.0;
  }
}

int DensityMatrix::numerical_rank() const {
  if (spectrum_.size() == 0) return 0;
  const double thr = 1e-12 * spectrum_[0];
  int r = 0;
  for (Eigen::Index i = 0; i < spectrum_.size(); ++i)
    if (spectrum_[i] > thr) ++r;
  return r;
}

PureState PinchedEnsemble::member_state(std::size_t k,
                                        const PureState& parent) const {
  return PureState(parent.window(), parent.local_dim(), members.at(k));
}

PureState fix_global_phase(const PureState& psi) {
  const auto& a = psi.amplitudes();
  Eigen::Index best = 0;
  double mod = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > mod) { mod = std::abs(a[i]); best = i; }
  if (mod <= 0.0) throw std::invalid_argument("zero state");
  const std::complex<double> rot = std::conj(a[best]) / mod;
  return PureState(psi.window(), psi.local_dim(), a * rot);
}

ProbabilityTable measure(const PureState& psi) {
  Eigen::VectorXd p = psi.amplitudes().cwiseAbs2();
  // compensate fp drift so the table invariant holds exactly enough
  p /= p.sum();
  return ProbabilityTable(Region::full(psi.window()), psi.local_dim(), p);
}

AmplitudeDecomposition amplitude_decompose(const PureState& psi) {
  PureState fixed = fix_global_phase(psi);
  const auto& a = fixed.amplitudes();
  Eigen::VectorXd phases = Eigen::VectorXd::Zero(a.size());
  std::vector<char> defined(a.size(), 0);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) > kZeroAmplitude) {
      phases[i] = std::arg(a[i]);
      defined[i] = 1;
    }
  }
  Region full = Region::full(psi.window());
  return AmplitudeDecomposition{
      measure(fixed), PhaseTable{full, std::move(phases), std::move(defined)}};
}

ProbabilityTable marginal(const ProbabilityTable& p, const Region& sub) {
  const Region& r = p.region();
  if (!r.contains(sub))
    throw std::invalid_argument("marginal target is not a sub-region");
  if (sub == r) return p;
  const int nu = p.local_dim();
  const Region rest = r.set_minus(sub);
  const auto es = embed_codes(r, sub, nu);
  const auto er = embed_codes(r, rest, nu);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(es.size()));
  for (std::size_t i = 0; i < es.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < er.size(); ++j)
      acc += p[es[i] + er[j]];
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  out /= out.sum();
  return ProbabilityTable(sub, nu, std::move(out));
}

ProbabilityTable conditional(const ProbabilityTable& p, const Region& target,
                             const SpinConfiguration& given) {
  const Region& r = p.region();
  const int nu = p.local_dim();
  if (!r.contains(target) || !r.contains(given.region))
    throw std::invalid_argument("conditional regions not contained in table region");
  if (!target.disjoint_with(given.region))
    throw std::invalid_argument("conditional target overlaps conditioning region");
  if (given.region.is_empty()) return marginal(p, target);
  const Region rest = r.set_minus(target).set_minus(given.region);
  const auto et = embed_codes(r, target, nu);
  const auto eg = embed_codes(r, given.region, nu);
  const auto er = embed_codes(r, rest, nu);
  if (given.code >= eg.size())
    throw std::invalid_argument("conditioning configuration code out of range");
  const std::uint64_t base = eg[given.code];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(et.size()));
  double mass = 0.0;
  for (std::size_t i = 0; i < et.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < er.size(); ++j)
      acc += p[base + et[i] + er[j]];
    out[static_cast<Eigen::Index>(i)] = acc;
    mass += acc;
  }
  if (mass < kNullEvent)
    throw std::invalid_argument("conditioning on null event");
  out /= mass;
  return ProbabilityTable(target, nu, std::move(out));
}

DensityMatrix reduce(const PureState& psi, const Region& a) {
  const Region full = Region::full(psi.window());
  if (!full.contains(a))
    throw std::invalid_argument("reduction region outside window");
  const int nu = psi.local_dim();
  const std::uint64_t dim_a = config_count(a, nu);
  if (dim_a > static_cast<std::uint64_t>(kMaxDensityDim))
    throw CapacityError("reduced state dimension " + std::to_string(dim_a) +
                        " exceeds limit " + std::to_string(kMaxDensityDim));
  const Region env = full.set_minus(a);
  const auto ea = embed_codes(full, a, nu);
  const auto ee = embed_codes(full, env, nu);
  const Eigen::Index da = static_cast<Eigen::Index>(ea.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
  Eigen::VectorXcd v(da);
  for (std::size_t j = 0; j < ee.size(); ++j) {
    for (Eigen::Index i = 0; i < da; ++i)
      v[i] = psi.amplitudes()[static_cast<Eigen::Index>(ea[i] + ee[j])];
    rho.noalias() += v * v.adjoint();
  }
  rho = (rho + rho.adjoint().eval()) / 2.0;
  return DensityMatrix(a, nu, std::move(rho));
}

Eigen::VectorXd reduced_spectrum(const PureState& psi, const Region& a) {
  const Region full = Region::full(psi.window());
  const Region env = full.set_minus(a);
  // nonzero spectra of the two sides coincide; diagonalize the smaller one
  const Region& side = (a.size() <= env.size()) ? a : env;
  return reduce(psi, side).spectrum();
}

double entanglement_entropy(const PureState& psi, const Region& a) {
  return von_neumann_entropy(reduced_spectrum(psi, a));
}

double von_neumann_entropy(const Eigen::VectorXd& spectrum) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    if (spectrum[i] > 0.0) s -= spectrum[i] * std::log(spectrum[i]);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.spectrum());
}

double renyi_entropy(const DensityMatrix& rho, double alpha) {
  if (alpha <= 0.0 || alpha == 1.0)
    throw std::invalid_argument("Renyi order must be positive and != 1");
  double t = 0.0;
  for (Eigen::Index i = 0; i < rho.spectrum().size(); ++i)
    if (rho.spectrum()[i] > 0.0) t += std::pow(rho.spectrum()[i], alpha);
  return std::log(t) / (1.0 - alpha);
}

double spectral_tail(const Eigen::VectorXd& spectrum, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("tail index must be >= 0");
  double t = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(n); i < spectrum.size(); ++i)
    t += spectrum[i];
  return std::max(0.0, t);
}

double spectral_tail(const DensityMatrix& rho, std::int64_t n) {
  return spectral_tail(rho.spectrum(), n);
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (!(r1.region() == r2.region()))
    throw std::invalid_argument("region mismatch");
  Eigen::MatrixXcd diff = r1.matrix() - r2.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

PinchedEnsemble pinch(const PureState& psi, const Region& b) {
  const Region full = Region::full(psi.window());
  if (!full.contains(b))
    throw std::invalid_argument("pinch region outside window");
  const int nu = psi.local_dim();
  const std::uint64_t sectors = config_count(b, nu);
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.dim());
  if (sectors * dim > (1ull << 26))
    throw CapacityError("pinch ensemble would hold " +
                        std::to_string(sectors * dim) +
                        " amplitudes, limit is 2^26");
  // per-config sector index
  std::vector<std::uint32_t> sector_of(dim);
  {
    const Region rest = full.set_minus(b);
    const auto eb = embed_codes(full, b, nu);
    const auto er = embed_codes(full, rest, nu);
    for (std::uint64_t ib = 0; ib < eb.size(); ++ib)
      for (std::uint64_t jr = 0; jr < er.size(); ++jr)
        sector_of[eb[ib] + er[jr]] = static_cast<std::uint32_t>(ib);
  }
  std::vector<double> w(sectors, 0.0);
  for (std::uint64_t c = 0; c < dim; ++c)
    w[sector_of[c]] += std::norm(psi.amplitudes()[static_cast<Eigen::Index>(c)]);

  PinchedEnsemble ens;
  ens.buffer = b;
  for (std::uint64_t ib = 0; ib < sectors; ++ib) {
    if (w[ib] < kNullEvent) continue;
    Eigen::VectorXcd member = Eigen::VectorXcd::Zero(psi.dim());
    for (std::uint64_t c = 0; c < dim; ++c)
      if (sector_of[c] == ib)
        member[static_cast<Eigen::Index>(c)] =
            psi.amplitudes()[static_cast<Eigen::Index>(c)];
    member /= member.norm();
    ens.codes.push_back(ib);
    ens.weights.push_back(w[ib]);
    ens.members.push_back(std::move(member));
  }
  return ens;
}

}  // namespace entanglab
