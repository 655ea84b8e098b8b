#include "experiments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "entanglab/approximation.hpp"
#include "entanglab/bounds.hpp"
#include "entanglab/decorrelation.hpp"
#include "entanglab/errors.hpp"
#include "entanglab/qpsv.hpp"
#include "entanglab/version.hpp"

namespace entanglab::cli {

namespace {

using nlohmann::json;

std::string out_path(const RunContext& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

json meta_of(const RunContext& ctx) {
  return json{{"version", kVersion},
              {"config_hash", ctx.cfg.config_hash},
              {"seed", ctx.cfg.seed},
              {"threads", ctx.threads}};
}

void write_json(const RunContext& ctx, const std::string& name, json j) {
  j["meta"] = meta_of(ctx);
  std::ofstream os(out_path(ctx, name));
  os << j.dump(2) << "\n";
}

std::string csv_meta(const RunContext& ctx) {
  return "# version=" + std::string(kVersion) +
         " config_hash=" + ctx.cfg.config_hash +
         " seed=" + std::to_string(ctx.cfg.seed) + "\n";
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Model state: Ising ground state or Gibbs square-root state, or a
/// pre-computed QPSV state when the config names one.
PureState build_state(const ExperimentConfig& cfg) {
  if (cfg.state_file) return load_qpsv(*cfg.state_file);
  if (cfg.model_kind == ModelKind::gibbs) return gibbs_sqrt_state(cfg.gibbs);
  GroundStateResult g = ground_state(build_hamiltonian(cfg.ising));
  return g.state;
}

Region named_region(const ExperimentConfig& cfg, const std::string& name) {
  auto it = cfg.regions.find(name);
  if (it == cfg.regions.end())
    throw ConfigError("config field 'regions." + name +
                      "': required by this subcommand");
  return it->second;
}

json fit_json(const DecouplingTable& t) {
  json j{{"exact_markov", t.exact_markov}, {"has_fit", t.has_fit}};
  if (t.has_fit) {
    j["kind"] = t.fit.model.kind == DecayKind::exponential ? "exponential"
                                                           : "power";
    j["xi"] = t.fit.model.xi;
    j["l0"] = t.l0;
    j["max_rel_residual"] = t.fit.max_rel_residual;
    j["certificate"] = t.fit.certificate;
  }
  return j;
}

}  // namespace

int run_ground(const RunContext& ctx) {
  if (ctx.cfg.model_kind != ModelKind::ising)
    throw ConfigError("config field 'model.type': ground requires an ising model");
  GroundStateResult g = ground_state(build_hamiltonian(ctx.cfg.ising));
  save_qpsv(out_path(ctx, "ground.qpsv"), g.state);
  StoquasticReport stoq = stoquastic_check(g.state);
  write_json(ctx, "ground.json",
             json{{"energy", g.energy},
                  {"gap", g.gap},
                  {"iterations", g.iterations},
                  {"residual", g.residual},
                  {"degenerate", g.degenerate},
                  {"stoquastic", stoq.stoquastic},
                  {"state_file", "ground.qpsv"}});
  return 0;
}

int run_entropy_scan(const RunContext& ctx) {
  PureState psi = build_state(ctx.cfg);
  const Window& w = psi.window();
  std::ofstream os(out_path(ctx, "entropy_scan.csv"));
  os << csv_meta(ctx) << "size,entropy\n";
  // end blocks: slabs [0, k) along the first dimension
  const int kmax = std::max(1, w.dims()[0] / 2);
  for (int k = 1; k <= kmax; ++k) {
    std::vector<int> hi(w.dims().size());
    hi[0] = k - 1;
    for (std::size_t d = 1; d < w.dims().size(); ++d) hi[d] = w.dims()[d] - 1;
    Region a = Region::box(w, std::vector<int>(w.dims().size(), 0), hi);
    os << a.size() << "," << fmt(entanglement_entropy(psi, a)) << "\n";
  }
  return 0;
}

int run_buffer_scan(const RunContext& ctx) {
  PureState psi = build_state(ctx.cfg);
  if (ctx.cfg.widths.empty())
    throw ConfigError("config field 'widths': required by buffer-scan");
  Region a = named_region(ctx.cfg, "a");
  DecouplingTable t = decoupling_verify(psi, a, ctx.cfg.widths);
  std::ofstream os(out_path(ctx, "buffer_scan.csv"));
  os << csv_meta(ctx);
  write_decoupling_csv(os, t);
  write_json(ctx, "buffer_scan.json", fit_json(t));
  return 0;
}

int run_mutual_info(const RunContext& ctx) {
  PureState psi = build_state(ctx.cfg);
  const Window& w = psi.window();
  if (w.dimension() != 1)
    throw ConfigError("config field 'model.dims': mutual-info expects a chain");
  const int n = w.site_count();
  const int block = ctx.cfg.block_size;
  std::vector<int> seps = ctx.cfg.separations;
  if (seps.empty())
    for (int s = 1; 2 * block + s <= n; ++s) seps.push_back(s);

  std::vector<std::pair<double, double>> series;
  std::ofstream os(out_path(ctx, "mutual_info.csv"));
  os << csv_meta(ctx) << "separation,mutual_information\n";
  for (int s : seps) {
    if (2 * block + s > n)
      throw ConfigError("config field 'separations': block pair exceeds window");
    Region a1 = Region::box(w, {0}, {block - 1});
    Region a2 = Region::box(w, {block + s}, {2 * block + s - 1});
    const double mi = mutual_information(psi, a1, a2);
    os << s << "," << fmt(mi) << "\n";
    if (mi > 1e-13) series.emplace_back(s, mi);
  }
  json j;
  if (series.size() >= 3) {
    DecayFit fit = decay_fit(series, DecayKind::exponential);
    j = json{{"has_fit", true},
             {"xi", fit.model.xi},
             {"max_rel_residual", fit.max_rel_residual},
             {"certificate", fit.certificate}};
  } else {
    j = json{{"has_fit", false}};
  }
  write_json(ctx, "mutual_info.json", j);
  return 0;
}

int run_audit(const RunContext& ctx) {
  PureState psi = build_state(ctx.cfg);
  const Window& w = psi.window();
  Region a = named_region(ctx.cfg, "a");
  Region b = named_region(ctx.cfg, "b");
  Region c = ctx.cfg.regions.count("c") ? ctx.cfg.regions.at("c")
                                        : a.set_union(b).complement();
  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const ProbabilityTable& p = dec.probabilities;

  std::vector<AuditReport> reports;
  reports.push_back(fidelity_bound_audit(psi, Tripartition{a, b, c}));
  reports.push_back(tail_mass_audit(psi, a, b));
  {
    PhaseSplit split = phase_deficit(dec, Tripartition{a, b, c});
    MarkovApproximation mk = markov_state(psi, Tripartition{a, b, c}, split);
    for (AuditReport& r : markov_rank_audits(mk)) reports.push_back(std::move(r));
  }
  // tv algebra over (a, b, c1, c2) with the complement split in half
  {
    Region d = ctx.cfg.regions.count("d") ? ctx.cfg.regions.at("d") : Region();
    Region cc = c;
    if (d.is_empty()) {
      std::vector<int> half(c.sites().begin(),
                            c.sites().begin() + c.size() / 2);
      std::vector<int> rest(c.sites().begin() + c.size() / 2, c.sites().end());
      cc = Region(w, half);
      d = Region(w, rest);
    }
    for (AuditReport& r : tv_algebra_audit(p, a, b, cc, d))
      reports.push_back(std::move(r));
  }
  // point bounds at a probe site
  {
    const int u = ctx.cfg.regions.count("u")
                      ? ctx.cfg.regions.at("u").sites().at(0)
                      : c.sites().back();
    reports.push_back(ds_flip_audit(p, a, b, u));
    if (psi.local_dim() == 2) {
      reports.push_back(fkg_point_audit(p, a, b, u));
      const int free = w.site_count() - b.size() - a.size() - c.size();
      const KernelMode mode = (w.site_count() - b.size() - 2) <= 12
                                  ? KernelMode::exact
                                  : KernelMode::restricted;
      (void)free;
      reports.push_back(fkg_domain_audit(p, a, b, c, mode));

      Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
      sz(0, 0) = 1.0;
      sz(1, 1) = -1.0;
      Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
      sx(0, 1) = 1.0;
      sx(1, 0) = 1.0;
      Region a1(w, {a.sites().front()}), a2(w, {u});
      reports.push_back(pinsker_audit(psi, a1, a2, sz, sz));
      reports.push_back(pinsker_audit(psi, a1, a2, sx, sx));
      if (w.site_count() <= 10) reports.push_back(dss_audit(psi, 2));
    }
  }

  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.pass;
  write_json(ctx, "audit.json",
             json{{"reports", to_json(reports)}, {"all_pass", all_pass}});
  for (const auto& r : reports)
    std::printf("%-22s %s  lhs=%.*g rhs=%.*g\n", r.inequality.c_str(),
                r.pass ? "pass" : "FAIL", 12, r.lhs, 12, r.rhs);
  return all_pass ? 0 : 4;
}

namespace {

// self-contained cross-checks against definition-level recomputations
json oracle_reduce_check(const PureState& psi, const Region& a) {
  const int nu = psi.local_dim();
  const Region full = Region::full(psi.window());
  const auto ea = embed_codes(full, a, nu);
  const auto ee = embed_codes(full, full.set_minus(a), nu);
  const DensityMatrix rho = reduce(psi, a);
  double worst = 0.0;
  // tr(rho E_ij) must equal <psi| E_ij ⊗ 1 |psi> for every matrix unit
  for (std::size_t i = 0; i < ea.size(); ++i)
    for (std::size_t j = 0; j < ea.size(); ++j) {
      std::complex<double> direct = 0.0;
      for (std::size_t e = 0; e < ee.size(); ++e)
        direct += std::conj(psi.amplitudes()[ea[j] + ee[e]]) *
                  psi.amplitudes()[ea[i] + ee[e]];
      worst = std::max(worst, std::abs(rho.matrix()(i, j) - direct));
    }
  return json{{"check", "reduce_test_operators"}, {"max_error", worst},
              {"pass", worst < 1e-12}};
}

json oracle_tv_check(const ProbabilityTable& p, const Region& a,
                     const Region& c) {
  const int nu = p.local_dim();
  const Region u = a.set_union(c);
  const ProbabilityTable pu = marginal(p, u);
  const auto ea = embed_codes(u, a, nu);
  const auto ec = embed_codes(u, c, nu);
  // positive-part form, recomputed from scratch
  std::vector<double> pa(ea.size(), 0.0), pc(ec.size(), 0.0);
  for (std::size_t i = 0; i < ea.size(); ++i)
    for (std::size_t j = 0; j < ec.size(); ++j) {
      pa[i] += pu[ea[i] + ec[j]];
      pc[j] += pu[ea[i] + ec[j]];
    }
  double pos = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i)
    for (std::size_t j = 0; j < ec.size(); ++j) {
      const double diff = pu[ea[i] + ec[j]] - pa[i] * pc[j];
      if (diff > 0.0) pos += diff;
    }
  const double got = tv(p, a, c).value;
  return json{{"check", "tv_positive_part"},
              {"max_error", std::abs(got - pos)},
              {"pass", std::abs(got - pos) < 1e-12}};
}

json oracle_pinch_check(const PureState& psi, const Region& a, const Region& b) {
  PinchedEnsemble ens = pinch(psi, b);
  Eigen::MatrixXcd mix =
      Eigen::MatrixXcd::Zero(reduce(psi, a).dim(), reduce(psi, a).dim());
  for (std::size_t k = 0; k < ens.members.size(); ++k)
    mix += ens.weights[k] * reduce(ens.member_state(k, psi), a).matrix();
  const double worst = (mix - reduce(psi, a).matrix()).cwiseAbs().maxCoeff();
  return json{{"check", "pinch_mixture"}, {"max_error", worst},
              {"pass", worst < 1e-12}};
}

json oracle_decompose_check(const PureState& psi) {
  const AmplitudeDecomposition dec = amplitude_decompose(psi);
  const PureState fixed = fix_global_phase(psi);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if (!dec.phases.defined[i]) continue;
    const std::complex<double> rebuilt =
        std::sqrt(dec.probabilities[i]) *
        std::exp(std::complex<double>(0.0, dec.phases.phases[i]));
    worst = std::max(worst, std::abs(rebuilt - fixed.amplitudes()[i]));
  }
  return json{{"check", "decompose_round_trip"}, {"max_error", worst},
              {"pass", worst < 1e-12}};
}

}  // namespace

int run_oracle(const RunContext& ctx) {
  if (ctx.cfg.window().site_count() > 8)
    throw CapacityError("oracle cross-checks are limited to 8 sites, window has " +
                        std::to_string(ctx.cfg.window().site_count()));
  PureState psi = build_state(ctx.cfg);
  const Window& w = psi.window();
  std::mt19937_64 rng(ctx.cfg.seed);

  // deterministic probe regions from the seed
  std::vector<int> sites(w.site_count());
  for (int i = 0; i < w.site_count(); ++i) sites[i] = i;
  std::shuffle(sites.begin(), sites.end(), rng);
  Region a(w, {sites[0], sites[1]});
  Region b(w, {sites[2]});
  Region c(w, {sites[3]});

  const ProbabilityTable p = measure(psi);
  json checks = json::array();
  checks.push_back(oracle_reduce_check(psi, a));
  checks.push_back(oracle_tv_check(p, a, c));
  checks.push_back(oracle_pinch_check(psi, a, b));
  checks.push_back(oracle_decompose_check(psi));

  bool all_pass = true;
  for (const auto& ch : checks) all_pass = all_pass && ch.at("pass").get<bool>();
  write_json(ctx, "oracle.json",
             json{{"checks", checks}, {"all_pass", all_pass}});
  for (const auto& ch : checks)
    std::printf("%-24s %s  max_error=%.3g\n",
                ch.at("check").get<std::string>().c_str(),
                ch.at("pass").get<bool>() ? "pass" : "FAIL",
                ch.at("max_error").get<double>());
  return all_pass ? 0 : 4;
}

}  // namespace entanglab::cli
