// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rrcheck/attack_tree.hpp"
#include "rrcheck/ctl.hpp"
#include "rrcheck/dsl/attribution_text.hpp"
#include "rrcheck/dsl/dot.hpp"
#include "rrcheck/dsl/model_text.hpp"
#include "rrcheck/dsl/query_text.hpp"
#include "rrcheck/dsl/report.hpp"
#include "rrcheck/dsl/tree_text.hpp"
#include "rrcheck/infra_model.hpp"
#include "rrcheck/quant.hpp"

namespace rrc::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text))
    throw Error("cannot write " + path);
}

// Runs `fn` and prefixes positioned errors with the file they came from.
template <typename Fn>
auto from_file(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const dsl::SourceError& e) {
    throw Error(path + ":" + e.what());
  }
}

std::string query_text(const std::string& arg) {
  namespace fs = std::filesystem;
  if (arg.ends_with(".q") && fs::is_regular_file(arg))
    return read_file(arg);
  return arg;
}

ctl::Formula load_query(const std::string& arg) {
  std::string text = query_text(arg);
  try {
    return dsl::parse_query(text);
  } catch (const dsl::SourceError& e) {
    throw Error("query:" + std::string(e.what()));
  }
}

infra::InfraModel load_model(const std::string& path) {
  std::string text = read_file(path);
  return from_file(path, [&] { return dsl::parse_model(text); });
}

struct Loaded {
  infra::InfraModel model;
  infra::Exploration x;
  dsl::StateNaming naming;

  const KripkeStructure& k() const { return x.kripke; }
  ctl::AtomResolver resolver() const { return infra::atom_resolver(model, x.table); }
};

Loaded load(infra::InfraModel model, std::size_t bound) {
  infra::Exploration x = infra::explore(model, bound);
  dsl::StateNaming naming = dsl::StateNaming::for_model(model, x);
  return Loaded{std::move(model), std::move(x), std::move(naming)};
}

enum class Verdict { Secure, Attack, Withheld };

const char* verdict_text(Verdict v) {
  switch (v) {
  case Verdict::Secure:
    return "secure";
  case Verdict::Attack:
    return "attack";
  case Verdict::Withheld:
    return "withheld";
  }
  return "?";
}

int exit_for(Verdict v) {
  switch (v) {
  case Verdict::Secure:
    return kSecure;
  case Verdict::Attack:
    return kAttack;
  case Verdict::Withheld:
    return kWithheld;
  }
  return kUsage;
}

struct Analysis {
  Verdict verdict = Verdict::Withheld;
  std::optional<bool> holds;
  /// States whose reachability constitutes the attack, when the query shape
  /// identifies one (EF goal, or the violations of an AG property).
  std::optional<StateSet> attack_target;
  std::map<StateId, std::optional<Path>> witnesses;
};

Analysis analyze(const Loaded& l, const ctl::Formula& f) {
  Analysis a;
  if (l.x.truncated)
    return a;
  auto resolver = l.resolver();
  ctl::CheckResult r = ctl::models(l.k(), f, resolver);
  a.holds = r.holds;
  if (f.op() == ctl::Op::EF) {
    a.verdict = r.holds ? Verdict::Attack : Verdict::Secure;
    a.attack_target = ctl::sat(l.k(), f.lhs(), resolver);
    if (r.holds)
      a.witnesses = r.witnesses;
    return a;
  }
  a.verdict = r.holds ? Verdict::Secure : Verdict::Attack;
  if (!r.holds && f.op() == ctl::Op::AG) {
    a.attack_target = set_difference(l.k().reach(), ctl::sat(l.k(), f.lhs(), resolver));
    for (auto& [init, path] : ctl::ef_witness(l.k(), *a.attack_target))
      if (!r.sat_set.contains(init))
        a.witnesses.emplace(init, std::move(path));
  }
  return a;
}

std::vector<dsl::WitnessEntry> witness_entries(const Loaded& l,
                                               const std::map<StateId, std::optional<Path>>& ws) {
  std::vector<dsl::WitnessEntry> out;
  for (const auto& [init, path] : ws) {
    if (!path)
      continue;
    dsl::WitnessEntry e{l.naming.display(init), {}, {}};
    for (std::size_t i = 0; i < path->size(); ++i) {
      e.path.push_back(l.naming.display((*path)[i]));
      if (i + 1 < path->size())
        e.actions.push_back(l.x.edge_labels.at({(*path)[i], (*path)[i + 1]}).front().text());
    }
    out.push_back(std::move(e));
  }
  return out;
}

dsl::EdgeLabels edge_texts(const Loaded& l) {
  dsl::EdgeLabels out;
  for (const auto& [edge, acts] : l.x.edge_labels)
    for (const auto& a : acts)
      out[edge].push_back(a.text());
  return out;
}

std::string kripke_dot(const Loaded& l) {
  return dsl::emit_dot(l.k(), [&](StateId s) { return l.naming.display(s); }, edge_texts(l));
}

void text_witnesses(std::ostream& os, const std::vector<dsl::WitnessEntry>& ws,
                    const std::string& indent) {
  for (const auto& w : ws) {
    os << indent << "witness (" << w.actions.size() << " steps):\n";
    for (std::size_t i = 0; i < w.path.size(); ++i) {
      os << indent << "  " << w.path[i] << '\n';
      if (i < w.actions.size())
        os << indent << "    -- " << w.actions[i] << " -->\n";
    }
  }
}

std::string states_text(const Loaded& l) {
  return std::to_string(l.x.table.size()) + (l.x.truncated ? " (truncated)" : "");
}

// Writes `text` to --out when given, else to `out`.
void deliver(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path)
    write_file(*cfg.out_path, text);
  else
    out << text;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

std::string path_text(const AttackPath& p, const dsl::StateNaming& naming) {
  if (p.empty())
    return "(no steps)";
  std::string out;
  for (const auto& step : p)
    out += (out.empty() ? "" : " ; ") + std::string("N") + dsl::emit_signature(step, naming);
  return out;
}

} // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ctl::Formula f = load_query(cfg.query);
    Loaded l = load(load_model(cfg.model_path), cfg.bound);
    Analysis a = analyze(l, f);
    auto witnesses = witness_entries(l, a.witnesses);

    std::ostringstream os;
    if (cfg.format == Format::Json) {
      dsl::Report r;
      r.holds = a.holds;
      r.witnesses = witnesses;
      r.truncated = l.x.truncated;
      r.extra["verdict"] = verdict_text(a.verdict);
      r.extra["query"] = dsl::emit_query(f);
      r.extra["states"] = l.x.table.size();
      os << dsl::emit_report(r);
    } else if (cfg.format == Format::Dot) {
      os << kripke_dot(l);
    } else {
      os << "query: " << dsl::emit_query(f) << '\n';
      os << "states: " << states_text(l) << '\n';
      if (a.verdict == Verdict::Withheld)
        os << "verdict: withheld (exploration truncated at " << cfg.bound << " states)\n";
      else
        os << "holds: " << (*a.holds ? "true" : "false") << '\n'
           << "verdict: " << verdict_text(a.verdict) << '\n';
      text_witnesses(os, witnesses, "");
    }
    deliver(cfg, out, os.str());
    return exit_for(a.verdict);
  });
}

int cmd_attack(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ctl::Formula target_formula = load_query(cfg.query);
    Loaded l = load(load_model(cfg.model_path), cfg.bound);
    if (l.x.truncated) {
      err << "exploration truncated at " << cfg.bound << " states; verdict withheld\n";
      return static_cast<int>(kWithheld);
    }
    StateSet target = ctl::sat(l.k(), target_formula, l.resolver());
    std::optional<AttackTree> tree = synthesize(l.k(), target);

    dsl::Report r;
    r.holds = tree.has_value();
    r.extra["target"] = dsl::emit_query(target_formula);
    r.extra["states"] = l.x.table.size();
    std::vector<std::string> paths;
    if (tree) {
      r.tree = dsl::emit_tree(*tree, l.naming);
      r.witnesses = witness_entries(l, ctl::ef_witness(l.k(), target));
      for (const auto& p : attack_paths(*tree))
        paths.push_back(path_text(p, l.naming));
      r.extra["attack_paths"] = paths;
      if (cfg.out_path)
        write_file(*cfg.out_path, *r.tree + "\n");
    }

    if (cfg.format == Format::Json) {
      out << dsl::emit_report(r);
    } else if (cfg.format == Format::Dot) {
      if (tree)
        out << dsl::emit_dot(*tree, l.naming);
    } else {
      out << "target: " << dsl::emit_query(target_formula) << '\n';
      out << "states: " << states_text(l) << '\n';
      if (!tree) {
        out << "no attack\n";
      } else {
        out << "attack tree: " << *r.tree << '\n';
        out << "attack paths:\n";
        for (std::size_t i = 0; i < paths.size(); ++i)
          out << "  " << i + 1 << ". " << paths[i] << '\n';
        text_witnesses(out, r.witnesses, "");
      }
    }
    return static_cast<int>(tree ? kSecure : kAttack);
  });
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded l = load(load_model(cfg.model_path), cfg.bound);
    if (l.x.truncated) {
      err << "exploration truncated at " << cfg.bound << " states; verdict withheld\n";
      return static_cast<int>(kWithheld);
    }
    std::string text = read_file(cfg.tree_path);
    AttackTree tree = from_file(cfg.tree_path, [&] { return dsl::parse_tree(text, l.naming); });
    bool valid = is_valid(l.k().ts(), tree);

    std::ostringstream os;
    if (cfg.format == Format::Json) {
      dsl::Report r;
      r.holds = valid;
      r.tree = dsl::emit_tree(tree, l.naming);
      r.extra["verdict"] = valid ? "valid" : "invalid";
      os << dsl::emit_report(r);
    } else if (cfg.format == Format::Dot) {
      os << dsl::emit_dot(tree, l.naming);
    } else {
      os << (valid ? "valid" : "invalid") << '\n';
    }
    deliver(cfg, out, os.str());
    return static_cast<int>(valid ? kSecure : kAttack);
  });
}

int cmd_quantify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!cfg.attr_path)
      throw Error("quantify needs --attr");
    Loaded l = load(load_model(cfg.model_path), cfg.bound);
    std::string tree_text = read_file(cfg.tree_path);
    AttackTree tree = from_file(cfg.tree_path, [&] { return dsl::parse_tree(tree_text, l.naming); });
    std::string attr_text = read_file(*cfg.attr_path);
    auto attr = from_file(*cfg.attr_path,
                          [&] { return dsl::parse_attribution(attr_text, l.naming); });

    quant::Evaluation e;
    std::optional<quant::CheapestAttack> cheapest;
    try {
      e = quant::evaluate(tree, attr.attribution, attr.laws);
      if (!attack_paths(tree).empty())
        cheapest = quant::cheapest_attack_path(tree, attr.attribution);
    } catch (const quant::MissingAttribution& m) {
      throw Error("missing " + m.kind() + " for leaf N" + dsl::emit_signature(m.leaf(), l.naming));
    }

    std::ostringstream os;
    if (cfg.format == Format::Json) {
      dsl::Report r;
      r.holds = is_valid(l.k().ts(), tree);
      r.truncated = l.x.truncated;
      r.tree = dsl::emit_tree(tree, l.naming);
      r.cost = e.cost.text();
      r.prob = to_decimal_string(e.prob);
      if (cheapest)
        r.extra["cheapest"] = json{{"path", path_text(cheapest->path, l.naming)},
                                   {"total", to_decimal_string(cheapest->total)}};
      os << dsl::emit_report(r);
    } else if (cfg.format == Format::Dot) {
      os << dsl::emit_dot(tree, l.naming);
    } else {
      os << "cost: " << e.cost.text() << '\n';
      os << "prob: " << to_decimal_string(e.prob) << '\n';
      if (cheapest)
        os << "cheapest: " << path_text(cheapest->path, l.naming) << " (total "
           << to_decimal_string(cheapest->total) << ")\n";
      else
        os << "cheapest: none (tree has no attack scenario)\n";
    }
    deliver(cfg, out, os.str());
    return static_cast<int>(kSecure);
  });
}

namespace {

struct RrRecord {
  std::size_t iteration = 0;
  std::string status;
  std::string query;
  std::size_t states = 0;
  bool truncated = false;
  std::vector<dsl::WitnessEntry> witnesses;
  std::optional<std::string> tree;
  std::optional<std::string> patch;
};

json record_json(const RrRecord& rec) {
  dsl::Report r;
  r.witnesses = rec.witnesses;
  r.tree = rec.tree;
  r.truncated = rec.truncated;
  r.extra["iteration"] = rec.iteration;
  r.extra["status"] = rec.status;
  r.extra["query"] = rec.query;
  r.extra["states"] = rec.states;
  r.extra["patch"] = rec.patch ? json(*rec.patch) : json(nullptr);
  json j = dsl::to_json(r);
  j.erase("holds");
  return j;
}

void record_text(std::ostream& os, const RrRecord& rec) {
  os << "iteration " << rec.iteration << ": " << rec.status << '\n';
  os << "  query: " << rec.query << '\n';
  os << "  states: " << rec.states << (rec.truncated ? " (truncated)" : "") << '\n';
  text_witnesses(os, rec.witnesses, "  ");
  if (rec.tree)
    os << "  attack tree: " << *rec.tree << '\n';
  if (rec.patch)
    os << "  applied patch: " << *rec.patch << '\n';
}

} // namespace

int cmd_rr(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.max_iter < 1)
      throw Error("--max-iter must be at least 1");
    ctl::Formula f = load_query(cfg.query);
    infra::InfraModel model = load_model(cfg.model_path);
    std::vector<RrRecord> history;
    std::string result;
    int code = kUsage;
    std::size_t next_patch = 0;

    for (std::size_t iteration = 1;; ++iteration) {
      Loaded l = load(model, cfg.bound);
      Analysis a = analyze(l, f);
      RrRecord rec;
      rec.iteration = iteration;
      rec.query = dsl::emit_query(f);
      rec.states = l.x.table.size();
      rec.truncated = l.x.truncated;

      if (a.verdict == Verdict::Withheld) {
        rec.status = result = "bound exceeded";
        code = kWithheld;
      } else if (a.verdict == Verdict::Secure) {
        rec.status = result = "secure";
        code = kSecure;
      } else {
        rec.witnesses = witness_entries(l, a.witnesses);
        if (a.attack_target)
          if (auto tree = synthesize(l.k(), *a.attack_target))
            rec.tree = dsl::emit_tree(*tree, l.naming);
        if (next_patch < cfg.patches.size() && iteration < cfg.max_iter) {
          rec.status = "attack";
          const std::string& path = cfg.patches[next_patch++];
          std::string text = read_file(path);
          model = from_file(path, [&] { return dsl::apply_patch(model, text); });
          rec.patch = std::filesystem::path(path).filename().string();
        } else {
          rec.status = result =
              next_patch < cfg.patches.size() ? "max iterations" : "attack remains";
          code = kAttack;
        }
      }
      history.push_back(std::move(rec));
      if (!result.empty())
        break;
    }

    std::ostringstream os;
    if (cfg.format == Format::Json) {
      json j;
      j["iterations"] = json::array();
      for (const auto& rec : history)
        j["iterations"].push_back(record_json(rec));
      j["result"] = result;
      os << j.dump(2) << '\n';
    } else {
      for (const auto& rec : history)
        record_text(os, rec);
      os << "result: " << result << " after " << history.size()
         << (history.size() == 1 ? " iteration" : " iterations") << '\n';
    }
    deliver(cfg, out, os.str());
    return code;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit-state attack analysis for infrastructure models", "rrcheck"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "text";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--bound", cfg.bound, "State bound for exploration")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--out", cfg.out_path, "Output file");
    sub->add_option("model", cfg.model_path, "Model file (.infra)")->required();
  };

  auto* check = app.add_subcommand("check", "Check a CTL query on a model");
  common(check);
  check->add_option("query", cfg.query, "Query text or .q file")->required();

  auto* attack = app.add_subcommand("attack", "Synthesize an attack tree for a target predicate");
  common(attack);
  attack->add_option("target", cfg.query, "Target predicate")->required();

  auto* validate = app.add_subcommand("validate", "Check validity of an attack tree");
  common(validate);
  validate->add_option("tree", cfg.tree_path, "Attack tree file (.atk)")->required();

  auto* quantify = app.add_subcommand("quantify", "Evaluate cost and probability of a tree");
  common(quantify);
  quantify->add_option("tree", cfg.tree_path, "Attack tree file (.atk)")->required();
  quantify->add_option("--attr", cfg.attr_path, "Attribution file (.attr)")->required();

  auto* rr = app.add_subcommand("rr", "Run the refinement-risk loop");
  common(rr);
  rr->add_option("query", cfg.query, "Query text or .q file")->required();
  rr->add_option("--patches", cfg.patches, "Patch files, applied in order")->delimiter(',');
  rr->add_option("--max-iter", cfg.max_iter, "Maximum number of iterations")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty())
    reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSecure;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  cfg.format = format == "json" ? Format::Json : format == "dot" ? Format::Dot : Format::Text;
  if (check->parsed())
    return cmd_check(cfg, out, err);
  if (attack->parsed())
    return cmd_attack(cfg, out, err);
  if (validate->parsed())
    return cmd_validate(cfg, out, err);
  if (quantify->parsed())
    return cmd_quantify(cfg, out, err);
  return cmd_rr(cfg, out, err);
}

} // namespace rrc::cli
