#pragma once

#include <string>

#include <json.hpp>

namespace entanglab {

/// Named inequality instance: lhs <= rhs + slack, margin = rhs - lhs.
/// `meta` carries instance provenance (regions, constants, counters).
struct AuditReport {
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  nlohmann::json meta;
};

AuditReport make_audit(std::string inequality, double lhs, double rhs,
                       double slack, nlohmann::json meta = {});

nlohmann::json to_json(const AuditReport& r);
nlohmann::json to_json(const std::vector<AuditReport>& rs);

}  // namespace entanglab
