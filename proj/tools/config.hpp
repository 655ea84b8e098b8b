#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entanglab/gibbs.hpp"
#include "entanglab/ising.hpp"
#include "entanglab/lattice.hpp"

namespace entanglab::cli {

enum class ModelKind { ising, gibbs };

/// Parsed experiment configuration. Region names are free-form; the
/// subcommands document which names they consume.
struct ExperimentConfig {
  ModelKind model_kind = ModelKind::ising;
  IsingSpec ising;
  GibbsSpec gibbs;
  std::map<std::string, Region> regions;
  std::vector<int> widths;
  std::vector<int> separations;
  int block_size = 2;
  std::uint64_t seed = 1;
  std::optional<std::string> state_file;
  std::string config_hash;  // FNV-1a of the raw config bytes

  const Window& window() const {
    return model_kind == ModelKind::ising ? ising.window : gibbs.window;
  }
};

/// Parse a config file; throws ConfigError naming the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& raw);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace entanglab::cli
