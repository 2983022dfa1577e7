// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/report.hpp"

namespace rrc::dsl {

nlohmann::json to_json(const Report& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : r.extra)
    j[k] = v;
  j["holds"] = r.holds ? nlohmann::json(*r.holds) : nlohmann::json(nullptr);
  j["truncated"] = r.truncated;
  auto& ws = j["witnesses"] = nlohmann::json::array();
  for (const auto& w : r.witnesses)
    ws.push_back({{"init", w.init}, {"path", w.path}, {"actions", w.actions}});
  if (r.tree)
    j["tree"] = *r.tree;
  if (r.cost)
    j["cost"] = *r.cost;
  if (r.prob)
    j["prob"] = *r.prob;
  return j;
}

std::string emit_report(const Report& r) { return to_json(r).dump(2) + "\n"; }

} // namespace rrc::dsl
