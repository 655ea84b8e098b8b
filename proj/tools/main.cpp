#include <CLI11.hpp>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include "entanglab/errors.hpp"
#include "entanglab/version.hpp"
#include "experiments.hpp"

using namespace entanglab;
using namespace entanglab::cli;

int main(int argc, char** argv) {
  CLI::App app{"entanglab: buffer-conditioned state approximations and "
               "inequality audits for finite spin lattices"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  std::uint64_t seed_override = 0;
  bool have_seed = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (recorded in outputs)");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t s) {
          seed_override = s;
          have_seed = true;
        },
        "override the config seed");
  };

  CLI::App* ground = app.add_subcommand("ground", "solve and persist a ground state");
  CLI::App* escan = app.add_subcommand("entropy-scan", "block entanglement entropies");
  CLI::App* bscan = app.add_subcommand("buffer-scan", "decoupling table over buffer widths");
  CLI::App* minfo = app.add_subcommand("mutual-info", "mutual information vs separation");
  CLI::App* audit = app.add_subcommand("audit", "full inequality audit suite");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross-checks (<= 8 sites)");
  for (CLI::App* sub : {ground, escan, bscan, minfo, audit, oracle})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    RunContext ctx;
    ctx.cfg = load_config(config_path);
    if (have_seed) ctx.cfg.seed = seed_override;
    ctx.out_dir = out_dir;
    if (threads <= 0) {
      const char* env = std::getenv("ENTANGLAB_THREADS");
      threads = env ? std::atoi(env) : 1;
    }
    if (threads < 1) throw ConfigError("--threads must be >= 1");
    ctx.threads = threads;

    if (*ground) return run_ground(ctx);
    if (*escan) return run_entropy_scan(ctx);
    if (*bscan) return run_buffer_scan(ctx);
    if (*minfo) return run_mutual_info(ctx);
    if (*audit) return run_audit(ctx);
    if (*oracle) return run_oracle(ctx);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
