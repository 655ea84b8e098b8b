#include "entanglab/decorrelation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "entanglab/errors.hpp"

namespace entanglab {

namespace {

constexpr double kNullEvent = 1e-300;

void check_disjoint_in(const ProbabilityTable& p,
                       std::initializer_list<const Region*> regions) {
  const Region& r = p.region();
  for (auto* x : regions)
    if (!r.contains(*x))
      throw std::invalid_argument("region not contained in the table's region");
  for (auto it = regions.begin(); it != regions.end(); ++it)
    for (auto jt = std::next(it); jt != regions.end(); ++jt)
      if (!(*it)->disjoint_with(**jt))
        throw std::invalid_argument("regions overlap");
}

// flat joint table over (b, a, c): index (ib*dA + ia)*dC + ic
struct Joint3 {
  std::size_t da = 1, db = 1, dc = 1;
  std::vector<double> w;
  double at(std::size_t ib, std::size_t ia, std::size_t ic) const {
    return w[(ib * da + ia) * dc + ic];
  }
};

Joint3 joint3(const ProbabilityTable& p, const Region& a, const Region& b,
              const Region& c) {
  const int nu = p.local_dim();
  const Region u = a.set_union(b).set_union(c);
  const ProbabilityTable pu = marginal(p, u);
  const auto ea = embed_codes(u, a, nu);
  const auto eb = embed_codes(u, b, nu);
  const auto ec = embed_codes(u, c, nu);
  Joint3 j;
  j.da = ea.size();
  j.db = eb.size();
  j.dc = ec.size();
  j.w.assign(j.da * j.db * j.dc, 0.0);
  for (std::size_t ib = 0; ib < j.db; ++ib)
    for (std::size_t ia = 0; ia < j.da; ++ia)
      for (std::size_t ic = 0; ic < j.dc; ++ic)
        j.w[(ib * j.da + ia) * j.dc + ic] = pu[eb[ib] + ea[ia] + ec[ic]];
  return j;
}

// TV of a (possibly unnormalized) joint against the product of its own
// marginals, after normalizing by the total mass
double tv_of_joint(const std::vector<double>& j, std::size_t da, std::size_t dc,
                   double mass) {
  std::vector<double> pa(da, 0.0), pc(dc, 0.0);
  for (std::size_t ia = 0; ia < da; ++ia)
    for (std::size_t ic = 0; ic < dc; ++ic) {
      pa[ia] += j[ia * dc + ic];
      pc[ic] += j[ia * dc + ic];
    }
  double acc = 0.0;
  for (std::size_t ia = 0; ia < da; ++ia)
    for (std::size_t ic = 0; ic < dc; ++ic)
      acc += std::abs(j[ia * dc + ic] / mass - (pa[ia] / mass) * (pc[ic] / mass));
  return 0.5 * acc;
}

}  // namespace

TvReport tv(const ProbabilityTable& p, const Region& a, const Region& c) {
  check_disjoint_in(p, {&a, &c});
  Joint3 j = joint3(p, a, Region::empty(a.window()), c);
  TvReport rep;
  rep.a = a;
  rep.b = Region::empty(a.window());
  rep.c = c;
  rep.value = tv_of_joint(j.w, j.da, j.dc, 1.0);
  return rep;
}

TvReport tv_conditional(const ProbabilityTable& p, const Region& a,
                        const Region& b, const Region& c) {
  check_disjoint_in(p, {&a, &b, &c});
  if (b.is_empty()) {
    TvReport rep = tv(p, a, c);
    rep.parts = {rep.value};
    return rep;
  }
  Joint3 j = joint3(p, a, b, c);
  TvReport rep;
  rep.a = a;
  rep.b = b;
  rep.c = c;
  rep.parts.assign(j.db, 0.0);
  std::vector<double> slice(j.da * j.dc);
  for (std::size_t ib = 0; ib < j.db; ++ib) {
    double mass = 0.0;
    for (std::size_t ia = 0; ia < j.da; ++ia)
      for (std::size_t ic = 0; ic < j.dc; ++ic) {
        slice[ia * j.dc + ic] = j.at(ib, ia, ic);
        mass += slice[ia * j.dc + ic];
      }
    if (mass < kNullEvent) continue;
    rep.parts[ib] = mass * tv_of_joint(slice, j.da, j.dc, mass);
    rep.value += rep.parts[ib];
  }
  return rep;
}

double single_flip_tv(const ProbabilityTable& p, const Region& a,
                      const Region& b, int u) {
  const Region ru(p.region().window(), {u});
  check_disjoint_in(p, {&a, &b, &ru});
  // joint over (b, u, a): reuse joint3 with "a" slot = site u, "c" slot = a
  Joint3 j = joint3(p, ru, b, a);
  const std::size_t dv = j.da;  // nu values of the flipped variable
  double total = 0.0;
  for (std::size_t ib = 0; ib < j.db; ++ib) {
    double pb = 0.0;
    std::vector<double> pu(dv, 0.0);
    for (std::size_t s = 0; s < dv; ++s)
      for (std::size_t ia = 0; ia < j.dc; ++ia) {
        pu[s] += j.at(ib, s, ia);
        pb += j.at(ib, s, ia);
      }
    if (pb < kNullEvent) continue;
    double inner = 0.0;
    for (std::size_t s = 0; s < dv; ++s) {
      if (pu[s] < kNullEvent) continue;
      for (std::size_t t = 0; t < dv; ++t) {
        if (t == s || pu[t] < kNullEvent) continue;
        double dist = 0.0;
        for (std::size_t ia = 0; ia < j.dc; ++ia)
          dist += std::abs(j.at(ib, s, ia) / pu[s] - j.at(ib, t, ia) / pu[t]);
        inner += (pu[s] / pb) * (pu[t] / pb) * 0.5 * dist;
      }
    }
    total += pb * inner;
  }
  return total;
}

AuditReport ds_flip_audit(const ProbabilityTable& p, const Region& a,
                          const Region& b, int u, double slack) {
  const Region ru(p.region().window(), {u});
  const double lhs = tv_conditional(p, a, b, ru).value;
  const double rhs = single_flip_tv(p, a, b, u);
  return make_audit("ds_flip", lhs, rhs, slack, {{"u", u}});
}

// ---------------------------------------------------------------------------
// phase deficit
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kMaxPhaseDim = 1ull << 20;

struct PhaseProblem {
  std::uint64_t dim = 0;
  std::vector<double> weight;               // p on the defined support
  std::vector<double> theta;
  std::vector<std::vector<std::uint32_t>> ia, ib;  // per component
  std::vector<std::uint32_t> ic, ibu;
  std::vector<std::size_t> da, db;
  std::size_t dc = 1, dbu = 1;
};

PhaseProblem build_problem(const AmplitudeDecomposition& dec,
                           const std::vector<std::pair<Region, Region>>& comps,
                           const Region& c) {
  const ProbabilityTable& p = dec.probabilities;
  const Region& full = p.region();
  const int nu = p.local_dim();
  if (comps.empty() || comps.size() > 4)
    throw std::invalid_argument("phase deficit supports 1 to 4 components");
  Region all = c;
  std::vector<const Region*> check{&c};
  for (const auto& [aj, bj] : comps) {
    check.push_back(&aj);
    check.push_back(&bj);
    all = all.set_union(aj).set_union(bj);
  }
  for (auto it = check.begin(); it != check.end(); ++it)
    for (auto jt = std::next(it); jt != check.end(); ++jt)
      if (!(*it)->disjoint_with(**jt))
        throw std::invalid_argument("regions overlap");
  if (!(all == full))
    throw std::invalid_argument("tripartition does not tile the window");
  if (config_count(full, nu) > kMaxPhaseDim)
    throw CapacityError("phase deficit table of " +
                        std::to_string(config_count(full, nu)) +
                        " configurations exceeds limit 2^20");

  PhaseProblem pr;
  pr.dim = config_count(full, nu);
  pr.weight.resize(pr.dim);
  pr.theta.resize(pr.dim);
  double support = 0.0;
  for (std::uint64_t cc = 0; cc < pr.dim; ++cc) {
    // configurations below the phase-defined threshold carry < 1e-28 weight
    // and are dropped from the sums
    const bool ok = dec.phases.defined[cc];
    pr.weight[cc] = ok ? p[cc] : 0.0;
    pr.theta[cc] = ok ? dec.phases.phases[static_cast<Eigen::Index>(cc)] : 0.0;
    support += pr.weight[cc];
  }
  if (support <= 0.0) throw std::invalid_argument("empty support");

  Region bu = Region::empty(full.window());
  for (const auto& [aj, bj] : comps) {
    pr.ia.push_back(sub_index_array(full, aj, nu));
    pr.ib.push_back(sub_index_array(full, bj, nu));
    pr.da.push_back(config_count(aj, nu));
    pr.db.push_back(config_count(bj, nu));
    bu = bu.set_union(bj);
  }
  pr.ic = sub_index_array(full, c, nu);
  pr.ibu = sub_index_array(full, bu, nu);
  pr.dc = config_count(c, nu);
  pr.dbu = config_count(bu, nu);
  return pr;
}

}  // namespace

PhaseSplit phase_deficit_multi(
    const AmplitudeDecomposition& dec,
    const std::vector<std::pair<Region, Region>>& components, const Region& c,
    const PhaseSplitOptions& opts) {
  PhaseProblem pr = build_problem(dec, components, c);
  const std::size_t n = components.size();

  PhaseSplit out;
  out.c = c;
  for (const auto& [aj, bj] : components) {
    out.component_a.push_back(aj);
    out.component_b.push_back(bj);
  }
  out.alpha.resize(n);
  for (std::size_t jj = 0; jj < n; ++jj)
    out.alpha[jj].assign(pr.da[jj] * pr.db[jj], 0.0);
  out.gamma.assign(pr.dc * pr.dbu, 0.0);

  // epsilon-splitting initialization, epsilon = all-(+1) (code 0):
  // alpha_j(sA,sB) = theta(sA,sB,eps) - theta(eps_A,sB,eps),
  // gamma(sC,sB)  = theta(eps_A,sB,sC)
  {
    const ProbabilityTable& p = dec.probabilities;
    const Region& full = p.region();
    const int nu = p.local_dim();
    auto theta_at = [&](std::uint64_t code) {
      return dec.phases.defined[code]
                 ? dec.phases.phases[static_cast<Eigen::Index>(code)]
                 : 0.0;
    };
    for (std::size_t jj = 0; jj < n; ++jj) {
      const auto ea = embed_codes(full, components[jj].first, nu);
      const auto eb = embed_codes(full, components[jj].second, nu);
      for (std::size_t iB = 0; iB < pr.db[jj]; ++iB)
        for (std::size_t iA = 0; iA < pr.da[jj]; ++iA)
          out.alpha[jj][iA + pr.da[jj] * iB] =
              theta_at(ea[iA] + eb[iB]) - theta_at(eb[iB]);
    }
    Region bu = Region::empty(full.window());
    for (const auto& [aj, bj] : components) bu = bu.set_union(bj);
    const auto ec = embed_codes(full, c, nu);
    const auto ebu = embed_codes(full, bu, nu);
    for (std::size_t iB = 0; iB < pr.dbu; ++iB)
      for (std::size_t iC = 0; iC < pr.dc; ++iC)
        out.gamma[iC + pr.dc * iB] = theta_at(ec[iC] + ebu[iB]);
  }

  auto split_phase = [&](std::uint64_t cc) {
    double ph = out.gamma[pr.ic[cc] + pr.dc * pr.ibu[cc]];
    for (std::size_t jj = 0; jj < n; ++jj)
      ph += out.alpha[jj][pr.ia[jj][cc] + pr.da[jj] * pr.ib[jj][cc]];
    return ph;
  };
  auto objective = [&]() {
    double g = 0.0;
    for (std::uint64_t cc = 0; cc < pr.dim; ++cc)
      if (pr.weight[cc] > 0.0)
        g += pr.weight[cc] * 2.0 * (1.0 - std::cos(pr.theta[cc] - split_phase(cc)));
    return std::sqrt(std::max(0.0, g));
  };

  double prev = objective();
  std::vector<std::complex<double>> z;
  int round = 0;
  for (round = 1; round <= opts.max_rounds; ++round) {
    for (std::size_t jj = 0; jj < n; ++jj) {
      z.assign(pr.da[jj] * pr.db[jj], {0.0, 0.0});
      for (std::uint64_t cc = 0; cc < pr.dim; ++cc) {
        if (pr.weight[cc] <= 0.0) continue;
        const std::size_t k = pr.ia[jj][cc] + pr.da[jj] * pr.ib[jj][cc];
        const double rest = split_phase(cc) - out.alpha[jj][k];
        z[k] += pr.weight[cc] *
                std::exp(std::complex<double>(0.0, pr.theta[cc] - rest));
      }
      for (std::size_t k = 0; k < z.size(); ++k)
        if (std::abs(z[k]) > 0.0) out.alpha[jj][k] = std::arg(z[k]);
    }
    z.assign(pr.dc * pr.dbu, {0.0, 0.0});
    for (std::uint64_t cc = 0; cc < pr.dim; ++cc) {
      if (pr.weight[cc] <= 0.0) continue;
      const std::size_t k = pr.ic[cc] + pr.dc * pr.ibu[cc];
      const double rest = split_phase(cc) - out.gamma[k];
      z[k] += pr.weight[cc] *
              std::exp(std::complex<double>(0.0, pr.theta[cc] - rest));
    }
    for (std::size_t k = 0; k < z.size(); ++k)
      if (std::abs(z[k]) > 0.0) out.gamma[k] = std::arg(z[k]);

    const double cur = objective();
    if (prev - cur < opts.tolerance) {
      prev = cur;
      out.converged = true;
      break;
    }
    prev = cur;
  }
  out.objective = prev;
  out.iterations = std::min(round, opts.max_rounds);
  return out;
}

PhaseSplit phase_deficit(const AmplitudeDecomposition& dec,
                         const Tripartition& tri, const PhaseSplitOptions& opts) {
  return phase_deficit_multi(dec, {{tri.a, tri.b}}, tri.c, opts);
}

PhaseSplit phase_deficit(const PureState& psi, const Tripartition& tri,
                         const PhaseSplitOptions& opts) {
  return phase_deficit(amplitude_decompose(psi), tri, opts);
}

double phase_objective(const AmplitudeDecomposition& dec, const PhaseSplit& split) {
  std::vector<std::pair<Region, Region>> comps;
  for (std::size_t j = 0; j < split.component_a.size(); ++j)
    comps.emplace_back(split.component_a[j], split.component_b[j]);
  PhaseProblem pr = build_problem(dec, comps, split.c);
  double g = 0.0;
  for (std::uint64_t cc = 0; cc < pr.dim; ++cc) {
    if (pr.weight[cc] <= 0.0) continue;
    double ph = split.gamma[pr.ic[cc] + pr.dc * pr.ibu[cc]];
    for (std::size_t jj = 0; jj < comps.size(); ++jj)
      ph += split.alpha[jj][pr.ia[jj][cc] + pr.da[jj] * pr.ib[jj][cc]];
    g += pr.weight[cc] * 2.0 * (1.0 - std::cos(pr.theta[cc] - ph));
  }
  return std::sqrt(std::max(0.0, g));
}

// ---------------------------------------------------------------------------
// influence kernel and FKG bounds
// ---------------------------------------------------------------------------

namespace {

void require_binary(const ProbabilityTable& p) {
  if (p.local_dim() != 2)
    throw std::invalid_argument("spin covariances require local dimension 2");
}

// max conditional covariance of (u, v) over configurations of one D
double max_cov_given(const ProbabilityTable& p, const std::vector<int>& dpos,
                     int upos, int vpos) {
  const std::size_t sectors = std::size_t(1) << dpos.size();
  std::vector<double> m(sectors, 0.0), su(sectors, 0.0), sv(sectors, 0.0),
      suv(sectors, 0.0);
  const auto& probs = p.probs();
  for (Eigen::Index cc = 0; cc < probs.size(); ++cc) {
    std::size_t sec = 0;
    for (std::size_t i = 0; i < dpos.size(); ++i)
      sec |= ((static_cast<std::uint64_t>(cc) >> dpos[i]) & 1) << i;
    const double w = probs[cc];
    const int xu = spin_of_digit(static_cast<int>((cc >> upos) & 1));
    const int xv = spin_of_digit(static_cast<int>((cc >> vpos) & 1));
    m[sec] += w;
    su[sec] += w * xu;
    sv[sec] += w * xv;
    suv[sec] += w * xu * xv;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t sec = 0; sec < sectors; ++sec) {
    if (m[sec] < kNullEvent) continue;
    best = std::max(best, suv[sec] / m[sec] -
                              (su[sec] / m[sec]) * (sv[sec] / m[sec]));
  }
  return best;
}

int position_of(const Region& r, int site) {
  const auto& s = r.sites();
  auto it = std::lower_bound(s.begin(), s.end(), site);
  if (it == s.end() || *it != site)
    throw std::invalid_argument("site not in the table's region");
  return static_cast<int>(it - s.begin());
}

}  // namespace

KernelResult influence_kernel(const ProbabilityTable& p, const Region& b,
                              int u, int v, KernelMode mode) {
  require_binary(p);
  const Region& r = p.region();
  if (!r.contains(b))
    throw std::invalid_argument("buffer not contained in the table's region");
  if (b.contains(u) || b.contains(v) || u == v)
    throw std::invalid_argument("kernel sites must be distinct and outside b");
  const int upos = position_of(r, u), vpos = position_of(r, v);
  std::vector<int> bpos;
  for (int s : b.sites()) bpos.push_back(position_of(r, s));

  KernelResult out;
  out.mode = mode;
  out.value = -std::numeric_limits<double>::infinity();
  if (mode == KernelMode::exact) {
    std::vector<int> freep;
    for (int s : r.sites())
      if (s != u && s != v && !b.contains(s)) freep.push_back(position_of(r, s));
    if (freep.size() > 12)
      throw CapacityError("exact influence kernel over " +
                          std::to_string(freep.size()) +
                          " free sites exceeds limit 12");
    const std::size_t subsets = std::size_t(1) << freep.size();
    std::vector<int> dpos;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      dpos = bpos;
      for (std::size_t i = 0; i < freep.size(); ++i)
        if (mask & (std::size_t(1) << i)) dpos.push_back(freep[i]);
      out.value = std::max(out.value, max_cov_given(p, dpos, upos, vpos));
      ++out.sets_scanned;
    }
  } else {
    out.lower_bound = true;
    const Window& w = r.window();
    std::vector<int> prev;
    int rmax = 0;
    for (int s : r.sites()) rmax = std::max(rmax, w.distance(u, s));
    for (int rad = 0; rad <= rmax; ++rad) {
      std::vector<int> dpos = bpos;
      for (int s : r.sites()) {
        if (s == u || s == v || b.contains(s)) continue;
        if (w.distance(u, s) <= rad) dpos.push_back(position_of(r, s));
      }
      std::sort(dpos.begin(), dpos.end());
      if (dpos == prev) continue;
      prev = dpos;
      out.value = std::max(out.value, max_cov_given(p, dpos, upos, vpos));
      ++out.sets_scanned;
    }
  }
  return out;
}

FkgBound fkg_rhs(const ProbabilityTable& p, const Region& a, const Region& b,
                 int u) {
  require_binary(p);
  const Region ru(p.region().window(), {u});
  check_disjoint_in(p, {&a, &b, &ru});
  Joint3 j = joint3(p, a, b, ru);  // (b, a, u)
  double corr = 0.0;
  for (std::size_t ib = 0; ib < j.db; ++ib) {
    double pb = 0.0;
    for (std::size_t ia = 0; ia < j.da; ++ia)
      for (std::size_t iu = 0; iu < j.dc; ++iu) pb += j.at(ib, ia, iu);
    if (pb < kNullEvent) continue;
    for (int k = 0; k < a.size(); ++k) {
      double sa = 0.0, su = 0.0, sau = 0.0;
      for (std::size_t ia = 0; ia < j.da; ++ia) {
        const int xa = spin_of_digit(static_cast<int>((ia >> k) & 1));
        for (std::size_t iu = 0; iu < j.dc; ++iu) {
          const int xu = spin_of_digit(static_cast<int>(iu & 1));
          const double w = j.at(ib, ia, iu);
          sa += w * xa;
          su += w * xu;
          sau += w * xa * xu;
        }
      }
      corr += sau - sa * su / pb;  // pb * cov
    }
  }
  FkgBound out;
  out.correlation_sum = corr;
  out.value = 0.5 * corr;
  out.paper_value = 0.25 * corr;
  return out;
}

AuditReport fkg_point_audit(const ProbabilityTable& p, const Region& a,
                            const Region& b, int u, double slack) {
  const Region ru(p.region().window(), {u});
  const double lhs = tv_conditional(p, a, b, ru).value;
  const FkgBound bound = fkg_rhs(p, a, b, u);
  return make_audit("key_lemma", lhs, bound.value, slack,
                    {{"kappa", 0.5},
                     {"u", u},
                     {"paper_rhs", bound.paper_value},
                     {"paper_pass", lhs <= bound.paper_value + slack}});
}

AuditReport fkg_domain_audit(const ProbabilityTable& p, const Region& a,
                             const Region& b, const Region& c, KernelMode mode,
                             double slack) {
  check_disjoint_in(p, {&a, &b, &c});
  const double lhs = tv_conditional(p, a, b, c).value;
  double ksum = 0.0;
  bool lower = false;
  for (int u : a.sites())
    for (int v : c.sites()) {
      KernelResult k = influence_kernel(p, b, u, v, mode);
      ksum += k.value;
      lower = lower || k.lower_bound;
    }
  return make_audit("delta_est_kernel", lhs, 0.5 * ksum, slack,
                    {{"kappa", 0.5},
                     {"paper_rhs", 0.25 * ksum},
                     {"paper_pass", lhs <= 0.25 * ksum + slack},
                     {"kernel_lower_bound", lower}});
}

std::vector<AuditReport> tv_algebra_audit(const ProbabilityTable& p,
                                          const Region& a, const Region& b,
                                          const Region& c, const Region& d,
                                          double slack) {
  check_disjoint_in(p, {&a, &b, &c, &d});
  std::vector<AuditReport> out;

  const double tv_ac = tv(p, a, c).value;
  const double tv_ca = tv(p, c, a).value;
  out.push_back(make_audit("tv_symmetry", std::abs(tv_ac - tv_ca), 0.0, slack,
                           {{"tv_ac", tv_ac}, {"tv_ca", tv_ca}}));

  const Region cd = c.set_union(d);
  const double tv_acd = tv(p, a, cd).value;
  out.push_back(make_audit("tv_monotonicity", tv_ac, tv_acd, slack));

  out.push_back(make_audit("tv_subcocycle", tv_acd,
                           tv_ac + tv_conditional(p, a, c, d).value, slack));

  // telescoping over single-site increments of c ∪ d starting from b
  {
    const double lhs = tv_conditional(p, a, b, cd).value;
    double rhs = 0.0;
    Region run = b;
    for (int site : cd.sites()) {
      const Region step(p.region().window(), {site});
      rhs += tv_conditional(p, a, run, step).value;
      run = run.set_union(step);
    }
    out.push_back(make_audit("tv_telescoping", lhs, rhs, slack));
  }

  // four-term bound for TV(a∪b | c∪d), in the provable chain form;
  // the originally stated right side is reported in the meta
  {
    const double lhs = tv(p, a.set_union(b), cd).value;
    const Region bd = b.set_union(d);
    const double rhs = tv(p, b, d).value + tv_conditional(p, d, b, a).value +
                       tv_conditional(p, c, d, b).value +
                       tv_conditional(p, a, bd, c).value;
    const double stated = tv_ac + tv_conditional(p, a, b, c).value +
                          tv_conditional(p, a, d, c).value +
                          tv_conditional(p, a, bd, c).value;
    out.push_back(make_audit("tv_four_term", lhs, rhs, slack,
                             {{"stated_rhs", stated},
                              {"stated_pass", lhs <= stated + slack}}));
  }
  return out;
}

}  // namespace entanglab
