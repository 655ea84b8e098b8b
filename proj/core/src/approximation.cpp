#include "entanglab/approximation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entanglab {

namespace {

constexpr double kNullEvent = 1e-300;

Region merged_a(const PhaseSplit& s) {
  Region r = Region::empty(s.c.window());
  for (const auto& x : s.component_a) r = r.set_union(x);
  return r;
}

Region merged_b(const PhaseSplit& s) {
  Region r = Region::empty(s.c.window());
  for (const auto& x : s.component_b) r = r.set_union(x);
  return r;
}

}  // namespace

MarkovApproximation markov_state(const PureState& psi, const Tripartition& tri,
                                 const PhaseSplit& split) {
  if (!(merged_a(split) == tri.a) || !(merged_b(split) == tri.b) ||
      !(split.c == tri.c))
    throw std::invalid_argument("tripartition mismatch");

  const int nu = psi.local_dim();
  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const ProbabilityTable& p = dec.probabilities;
  const Region& full = p.region();

  const ProbabilityTable jab = marginal(p, tri.a.set_union(tri.b));
  const ProbabilityTable jcb = marginal(p, tri.c.set_union(tri.b));
  const ProbabilityTable jb =
      tri.b.is_empty()
          ? ProbabilityTable(Region::empty(full.window()), nu,
                             Eigen::VectorXd::Ones(1))
          : marginal(p, tri.b);

  const std::uint64_t da = config_count(tri.a, nu);
  const std::uint64_t db = config_count(tri.b, nu);
  const std::uint64_t dc = config_count(tri.c, nu);

  const auto ia = sub_index_array(full, tri.a, nu);
  const auto ib = sub_index_array(full, tri.b, nu);
  const auto ic = sub_index_array(full, tri.c, nu);
  // positions of a and c codes inside the (a ∪ b) and (c ∪ b) marginals
  const auto ea_ab = embed_codes(jab.region(), tri.a, nu);
  const auto eb_ab = embed_codes(jab.region(), tri.b, nu);
  const auto ec_cb = embed_codes(jcb.region(), tri.c, nu);
  const auto eb_cb = embed_codes(jcb.region(), tri.b, nu);

  // per-component alpha lookup per full configuration
  std::vector<std::vector<std::uint32_t>> iaj, ibj;
  for (std::size_t j = 0; j < split.component_a.size(); ++j) {
    iaj.push_back(sub_index_array(full, split.component_a[j], nu));
    ibj.push_back(sub_index_array(full, split.component_b[j], nu));
  }

  MarkovApproximation out{tri,
                          {},
                          {},
                          {},
                          {},
                          split,
                          PureState(psi.window(), nu,
                                    Eigen::VectorXcd::Unit(psi.dim(), 0)),
                          0.0};

  // sector data
  std::vector<std::int64_t> sector_of(db, -1);
  for (std::uint64_t s = 0; s < db; ++s) {
    const double w = jb[s];
    if (w < kNullEvent) continue;
    sector_of[s] = static_cast<std::int64_t>(out.sector_codes.size());
    out.sector_codes.push_back(s);
    out.weights.push_back(w);
    Eigen::VectorXcd fa = Eigen::VectorXcd::Zero(da);
    Eigen::VectorXcd fc = Eigen::VectorXcd::Zero(dc);
    out.phi_a.push_back(std::move(fa));
    out.phi_c.push_back(std::move(fc));
  }

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(psi.dim());
  for (std::int64_t cfg = 0; cfg < psi.dim(); ++cfg) {
    const std::uint64_t sb = ib[cfg];
    const std::int64_t k = sector_of[sb];
    if (k < 0) continue;
    const double pb = out.weights[static_cast<std::size_t>(k)];
    const double pa_cond = jab[ea_ab[ia[cfg]] + eb_ab[sb]] / pb;
    const double pc_cond = jcb[ec_cb[ic[cfg]] + eb_cb[sb]] / pb;
    double phase = split.gamma[ic[cfg] + dc * sb];
    for (std::size_t j = 0; j < iaj.size(); ++j) {
      const std::size_t daj = config_count(split.component_a[j], nu);
      phase += split.alpha[j][iaj[j][cfg] + daj * ibj[j][cfg]];
    }
    amps[cfg] = std::sqrt(pb * pa_cond * pc_cond) *
                std::exp(std::complex<double>(0.0, phase));
  }
  const double norm = amps.norm();
  if (norm <= 0.0) throw std::invalid_argument("empty support");
  out.renormalization = std::abs(1.0 - norm);
  amps /= norm;

  // conditional factors phi_A(sigma_B), phi_C(sigma_B)
  for (std::size_t k = 0; k < out.sector_codes.size(); ++k) {
    const std::uint64_t sb = out.sector_codes[k];
    const double pb = out.weights[k];
    for (std::uint64_t a = 0; a < da; ++a)
      out.phi_a[k][a] = std::sqrt(jab[ea_ab[a] + eb_ab[sb]] / pb);
    for (std::uint64_t c = 0; c < dc; ++c)
      out.phi_c[k][c] =
          std::sqrt(jcb[ec_cb[c] + eb_cb[sb]] / pb) *
          std::exp(std::complex<double>(0.0, split.gamma[c + dc * sb]));
  }
  // fold the alpha phases into phi_A
  {
    std::vector<std::vector<std::uint32_t>> iaj_a, ibj_b;  // relative to A / B
    for (std::size_t j = 0; j < split.component_a.size(); ++j)
      iaj_a.push_back(sub_index_array(tri.a, split.component_a[j], nu));
    for (std::size_t j = 0; j < split.component_b.size(); ++j)
      ibj_b.push_back(sub_index_array(tri.b, split.component_b[j], nu));
    for (std::size_t k = 0; k < out.sector_codes.size(); ++k) {
      const std::uint64_t sb = out.sector_codes[k];
      for (std::uint64_t a = 0; a < da; ++a) {
        double phase = 0.0;
        for (std::size_t j = 0; j < iaj_a.size(); ++j) {
          const std::size_t daj = config_count(split.component_a[j], nu);
          phase += split.alpha[j][iaj_a[j][a] + daj * ibj_b[j][sb]];
        }
        out.phi_a[k][a] *= std::exp(std::complex<double>(0.0, phase));
      }
    }
  }

  out.assembled = PureState(psi.window(), nu, std::move(amps));
  return out;
}

ReducedApproximation reduced_state_approximation(const PureState& psi,
                                                 const Region& a,
                                                 const Region& b) {
  if (!a.disjoint_with(b)) throw std::invalid_argument("regions overlap");
  const int nu = psi.local_dim();
  const PinchedEnsemble ens = pinch(psi, b);

  const std::uint64_t da = config_count(a, nu);
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(da, da);
  ReducedApproximation out{
      a, b, ens.codes, ens.weights, {}, {},
      DensityMatrix(a, nu,
                    Eigen::MatrixXcd::Identity(da, da) / double(da)),
      0.0, 0.0};
  for (std::size_t k = 0; k < ens.members.size(); ++k) {
    const DensityMatrix rho_k = reduce(ens.member_state(k, psi), a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_k.matrix());
    const Eigen::Index top = es.eigenvalues().size() - 1;
    const double lambda = es.eigenvalues()[top];
    out.leading_values.push_back(lambda);
    out.leading_vectors.push_back(es.eigenvectors().col(top));
    mix += ens.weights[k] * es.eigenvectors().col(top) *
           es.eigenvectors().col(top).adjoint();
    out.bound += 2.0 * ens.weights[k] * (1.0 - lambda);
  }
  mix = (mix + mix.adjoint().eval()) / 2.0;
  out.approx = DensityMatrix(a, nu, std::move(mix));
  out.distance = trace_distance(reduce(psi, a), out.approx);
  return out;
}

OverlapReport overlap_and_fidelity(const PureState& psi,
                                   const MarkovApproximation& approx) {
  if (!(psi.window() == approx.assembled.window()))
    throw std::invalid_argument("window mismatch");
  const PureState fixed = fix_global_phase(psi);
  OverlapReport rep;
  rep.overlap = fixed.amplitudes().dot(approx.assembled.amplitudes());
  rep.trace_distance = trace_distance(reduce(psi, approx.tri.a),
                                      reduce(approx.assembled, approx.tri.a));
  rep.bound = 2.0 * std::sqrt(std::max(0.0, 2.0 * (1.0 - rep.overlap.real())));
  return rep;
}

AuditReport fidelity_bound_audit(const PureState& psi, const Tripartition& tri,
                                 double slack) {
  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const PhaseSplit split = phase_deficit(dec, tri);
  const MarkovApproximation mk = markov_state(psi, tri, split);
  const OverlapReport ov = overlap_and_fidelity(psi, mk);
  const double delta =
      tv_conditional(dec.probabilities, tri.a, tri.b, tri.c).value;

  const double lhs = std::pow(0.5 * ov.trace_distance, 2);
  const double mid = 2.0 * std::abs(1.0 - ov.overlap);
  const double rhs = 2.0 * delta + 2.0 * split.objective;

  AuditReport rep;
  rep.inequality = "fidelity_bound";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = std::min(mid - lhs, rhs - mid);
  rep.pass = lhs <= mid + slack && mid <= rhs + slack;
  rep.meta = {{"mid", mid},
              {"delta", delta},
              {"vartheta", split.objective},
              {"overlap_re", ov.overlap.real()},
              {"overlap_im", ov.overlap.imag()},
              {"ineq1_margin", mid - lhs},
              {"ineq2_margin", rhs - mid}};
  return rep;
}

double mutual_information(const PureState& psi, const Region& a1,
                          const Region& a2) {
  if (!a1.disjoint_with(a2)) throw std::invalid_argument("regions overlap");
  return entanglement_entropy(psi, a1) + entanglement_entropy(psi, a2) -
         entanglement_entropy(psi, a1.set_union(a2));
}

AuditReport pinsker_audit(const PureState& psi, const Region& a1,
                          const Region& a2, const Eigen::MatrixXcd& o1,
                          const Eigen::MatrixXcd& o2, double slack) {
  if (!a1.disjoint_with(a2)) throw std::invalid_argument("regions overlap");
  const int nu = psi.local_dim();
  const auto check_obs = [nu](const Eigen::MatrixXcd& o, const Region& r) {
    if (static_cast<std::uint64_t>(o.rows()) != config_count(r, nu) ||
        o.rows() != o.cols())
      throw std::invalid_argument("observable support mismatch");
    if ((o - o.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("observable is not Hermitian");
  };
  check_obs(o1, a1);
  check_obs(o2, a2);

  const Region u = a1.set_union(a2);
  const DensityMatrix rho_u = reduce(psi, u);
  const auto e1 = embed_codes(u, a1, nu);
  const auto e2 = embed_codes(u, a2, nu);
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(rho_u.dim(), rho_u.dim());
  for (std::size_t i1 = 0; i1 < e1.size(); ++i1)
    for (std::size_t j1 = 0; j1 < e1.size(); ++j1)
      for (std::size_t i2 = 0; i2 < e2.size(); ++i2)
        for (std::size_t j2 = 0; j2 < e2.size(); ++j2)
          k(e1[i1] + e2[i2], e1[j1] + e2[j2]) = o1(i1, j1) * o2(i2, j2);

  const double joint = (rho_u.matrix() * k).trace().real();
  const double m1 = (reduce(psi, a1).matrix() * o1).trace().real();
  const double m2 = (reduce(psi, a2).matrix() * o2).trace().real();

  auto op_norm = [](const Eigen::MatrixXcd& o) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(o, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  const double info = std::max(0.0, mutual_information(psi, a1, a2));
  const double lhs = std::abs(joint - m1 * m2);
  const double rhs = op_norm(o1) * op_norm(o2) * std::sqrt(2.0 * info);
  return make_audit("pinsker", lhs, rhs, slack,
                    {{"mutual_information", info},
                     {"joint", joint},
                     {"m1", m1},
                     {"m2", m2}});
}

std::vector<AuditReport> markov_rank_audits(const MarkovApproximation& approx) {
  const int nu = approx.assembled.local_dim();
  const Eigen::VectorXd spec = reduced_spectrum(approx.assembled, approx.tri.a);
  int rank = 0;
  const double thr = spec.size() ? 1e-12 * spec[0] : 0.0;
  for (Eigen::Index i = 0; i < spec.size(); ++i)
    if (spec[i] > thr) ++rank;
  const double dim_b = std::pow(double(nu), approx.tri.b.size());
  const double entropy = von_neumann_entropy(spec);
  return {make_audit("markov_rank", double(rank), dim_b, 0.0),
          make_audit("markov_schmidt", entropy,
                     approx.tri.b.size() * std::log(double(nu)), 1e-10)};
}

}  // namespace entanglab
