// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rrc::cli {

/// Process exit statuses shared by all subcommands.
enum Exit : int {
  kSecure = 0,    ///< property holds / attack exists for `attack` / tree valid
  kAttack = 1,    ///< attack found / no attack for `attack` / tree invalid
  kUsage = 2,     ///< usage, I/O, parse or semantic error
  kWithheld = 3,  ///< exploration truncated, verdict withheld
};

enum class Format { Text, Json, Dot };

struct RunConfig {
  std::string model_path;
  /// Query text, or a path to a `.q` file.
  std::string query;
  std::string tree_path;
  std::size_t bound = 10000;
  Format format = Format::Text;
  std::optional<std::string> out_path;
  std::optional<std::string> attr_path;
  std::vector<std::string> patches;
  std::size_t max_iter = 10;
};

/// Explore the model and check the query. EF-shaped queries name an attack
/// goal: reaching it is an attack (exit 1, with witnesses). Any other query
/// is a property: exit 0 when it holds, 1 when it fails (AG queries come
/// with counterexample witnesses). Exit 3 when exploration was truncated.
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Synthesize an attack tree reaching the target predicate. Exit 0 when an
/// attack exists (tree written to --out if given), 1 when none does.
int cmd_attack(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Exit 0 iff the tree is valid on the explored model.
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Evaluate cost/probability of the tree and report the cheapest path.
int cmd_quantify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Refinement-risk loop: check, explain the attack, apply the next patch,
/// repeat until secure, out of patches, or out of iterations.
int cmd_rr(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rrc::cli
