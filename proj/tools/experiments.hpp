#pragma once

#include <string>

#include "config.hpp"

namespace entanglab::cli {

struct RunContext {
  ExperimentConfig cfg;
  std::string out_dir = ".";
  int threads = 1;
};

// Each runner writes its output files and returns a process exit code
// (0 ok, 4 if an audited inequality failed).
int run_ground(const RunContext& ctx);
int run_entropy_scan(const RunContext& ctx);
int run_buffer_scan(const RunContext& ctx);
int run_mutual_info(const RunContext& ctx);
int run_audit(const RunContext& ctx);
int run_oracle(const RunContext& ctx);

}  // namespace entanglab::cli
