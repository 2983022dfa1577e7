// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rrc::dsl {

struct WitnessEntry {
  std::string init;
  std::vector<std::string> path;
  /// One action text per step; `path.size() - 1` entries.
  std::vector<std::string> actions;
};

/// Explanation payload. Serialized with sorted keys:
/// {holds, witnesses: [{init, path, actions}], tree?, cost?, prob?, truncated}.
/// `holds` is null when the verdict was withheld.
struct Report {
  std::optional<bool> holds;
  std::vector<WitnessEntry> witnesses;
  std::optional<std::string> tree;
  std::optional<std::string> cost;
  std::optional<std::string> prob;
  bool truncated = false;
  /// Additional command-specific fields (verdict, query, ...).
  std::map<std::string, nlohmann::json> extra;
};

nlohmann::json to_json(const Report& r);

/// Pretty-printed JSON with a trailing newline.
std::string emit_report(const Report& r);

} // namespace rrc::dsl
