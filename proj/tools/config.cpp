#include "config.hpp"

#include <fstream>
#include <sstream>

#include "entanglab/errors.hpp"

namespace entanglab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

const json& need(const json& j, const std::string& field,
                 const std::string& scope) {
  auto it = j.find(field);
  if (it == j.end()) bad(scope + field, "missing");
  return *it;
}

std::vector<int> int_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "expected a nonempty array");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) bad(field, "expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<Coupling> couplings_of(const json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array");
  std::vector<Coupling> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string scope = field + "[" + std::to_string(i) + "].";
    const json& c = j[i];
    Coupling cp;
    cp.offset = int_list(need(c, "offset", scope), scope + "offset");
    const json& strength = need(c, "J", scope);
    if (!strength.is_number()) bad(scope + "J", "expected a number");
    cp.strength = strength.get<double>();
    out.push_back(std::move(cp));
  }
  return out;
}

Region region_of(const json& j, const Window& w, const std::string& field) {
  try {
    if (j.contains("sites"))
      return Region(w, int_list(j.at("sites"), field + ".sites"));
    if (j.contains("lo") && j.contains("hi"))
      return Region::box(w, int_list(j.at("lo"), field + ".lo"),
                         int_list(j.at("hi"), field + ".hi"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bad(field, e.what());
  }
  bad(field, "expected {\"lo\":[..],\"hi\":[..]} or {\"sites\":[..]}");
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

ExperimentConfig parse_config(const json& j, const std::string& raw) {
  ExperimentConfig cfg;
  cfg.config_hash = fnv1a_hex(raw);

  const json& model = need(j, "model", "");
  const std::string kind =
      model.contains("type") ? model.at("type").get<std::string>() : "ising";
  Window window({1});
  try {
    window = Window(int_list(need(model, "dims", "model."), "model.dims"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bad("model.dims", e.what());
  }

  if (kind == "ising") {
    cfg.model_kind = ModelKind::ising;
    cfg.ising.window = window;
    cfg.ising.couplings =
        couplings_of(need(model, "couplings", "model."), "model.couplings");
    cfg.ising.transverse_field =
        need(model, "b", "model.").get<double>();
    cfg.ising.longitudinal_field = model.value("hz", 0.0);
  } else if (kind == "gibbs") {
    cfg.model_kind = ModelKind::gibbs;
    cfg.gibbs.window = window;
    cfg.gibbs.couplings =
        couplings_of(need(model, "couplings", "model."), "model.couplings");
    cfg.gibbs.field = model.value("hz", 0.0);
    if (model.contains("phase_couplings"))
      cfg.gibbs.phase_couplings =
          couplings_of(model.at("phase_couplings"), "model.phase_couplings");
  } else {
    bad("model.type", "expected \"ising\" or \"gibbs\"");
  }

  if (j.contains("regions")) {
    if (!j.at("regions").is_object()) bad("regions", "expected an object");
    for (const auto& [name, spec] : j.at("regions").items())
      cfg.regions.emplace(name,
                          region_of(spec, window, "regions." + name));
  }
  if (j.contains("widths")) cfg.widths = int_list(j.at("widths"), "widths");
  if (j.contains("separations"))
    cfg.separations = int_list(j.at("separations"), "separations");
  if (j.contains("block_size")) {
    if (!j.at("block_size").is_number_integer() ||
        j.at("block_size").get<int>() < 1)
      bad("block_size", "expected a positive integer");
    cfg.block_size = j.at("block_size").get<int>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("state_file"))
    cfg.state_file = j.at("state_file").get<std::string>();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string raw = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j, raw);
}

}  // namespace entanglab::cli
