// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "rrcheck/attack_tree.hpp"
#include "rrcheck/rational.hpp"
#include "rrcheck/state_space.hpp"

namespace rrc::quant {

/// Non-negative attacker cost, or +infinity (what an empty or-tree costs).
class Cost {
public:
  Cost() = default;
  Cost(Rational value) : value_(std::move(value)) {} // NOLINT(google-explicit-constructor)
  static Cost infinity() { return Cost(std::nullopt); }

  bool is_infinite() const { return !value_.has_value(); }
  const Rational& value() const;
  std::string text() const;

  friend Cost operator+(const Cost& a, const Cost& b);
  friend bool operator==(const Cost&, const Cost&) = default;
  friend bool operator<(const Cost& a, const Cost& b);

private:
  explicit Cost(std::nullopt_t) : value_(std::nullopt) {}
  std::optional<Rational> value_ = Rational(0);
};

enum class AndCostLaw { Sum, Max };
enum class OrCostLaw { Min };
enum class AndProbLaw { Product, Min };
enum class OrProbLaw { Max, NoisyOr };

/// Combination laws for the bottom-up fold. Identities: and-cost 0,
/// or-cost +inf, and-prob 1, or-prob 0.
struct AttrLaws {
  AndCostLaw and_cost = AndCostLaw::Sum;
  OrCostLaw or_cost = OrCostLaw::Min;
  AndProbLaw and_prob = AndProbLaw::Product;
  OrProbLaw or_prob = OrProbLaw::Max;
};

/// Raised when a base step has no cost/probability entry and no default.
class MissingAttribution : public Error {
public:
  MissingAttribution(std::string what_kind, AttackSignature leaf);
  const std::string& kind() const { return kind_; }
  const AttackSignature& leaf() const { return leaf_; }

private:
  std::string kind_;
  AttackSignature leaf_;
};

/// Per-base-step cost and success probability.
class Attribution {
public:
  void set_cost(const AttackSignature& step, Rational cost);
  void set_prob(const AttackSignature& step, Rational prob);
  void set_default_cost(Rational cost);
  void set_default_prob(Rational prob);

  Rational cost_of(const AttackSignature& step) const;
  Rational prob_of(const AttackSignature& step) const;

  const std::map<AttackSignature, Rational>& costs() const { return cost_; }
  const std::map<AttackSignature, Rational>& probs() const { return prob_; }
  const std::optional<Rational>& default_cost() const { return default_cost_; }
  const std::optional<Rational>& default_prob() const { return default_prob_; }

  friend bool operator==(const Attribution&, const Attribution&) = default;

private:
  std::map<AttackSignature, Rational> cost_;
  std::map<AttackSignature, Rational> prob_;
  std::optional<Rational> default_cost_;
  std::optional<Rational> default_prob_;
};

struct Evaluation {
  Cost cost;
  Rational prob;
};

Evaluation evaluate(const AttackTree& tree, const Attribution& attr,
                    const AttrLaws& laws = {});

struct CheapestAttack {
  AttackPath path;
  Rational total;
};

/// The attack_paths entry with the smallest summed cost; the first one wins
/// ties. Throws when the tree has no scenario at all.
CheapestAttack cheapest_attack_path(const AttackTree& tree, const Attribution& attr);

struct WeightedTransition {
  StateId from;
  StateId to;
  Rational weight;
};

/// Checks weights are in [0,1] and every edge exists in `ts`.
void validate_weights(const TransitionSystem& ts, std::span<const WeightedTransition> weights);

/// Product of the edge weights along `path`; 1 for a single state.
Rational path_probability(std::span<const WeightedTransition> weights, const Path& path);

/// Shortest distance from each reachable state into `target`; nullopt when
/// the target cannot be reached.
std::map<StateId, std::optional<std::size_t>> goal_distance(const KripkeStructure& k,
                                                            const StateSet& target);

} // namespace rrc::quant
