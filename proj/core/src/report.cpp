#include "entanglab/report.hpp"

namespace entanglab {

AuditReport make_audit(std::string inequality, double lhs, double rhs,
                       double slack, nlohmann::json meta) {
  AuditReport r;
  r.inequality = std::move(inequality);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = lhs <= rhs + slack;
  r.meta = std::move(meta);
  return r;
}

nlohmann::json to_json(const AuditReport& r) {
  nlohmann::json j{{"inequality", r.inequality},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"margin", r.margin},
                   {"pass", r.pass}};
  for (auto it = r.meta.begin(); it != r.meta.end(); ++it) j[it.key()] = it.value();
  return j;
}

nlohmann::json to_json(const std::vector<AuditReport>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

}  // namespace entanglab
