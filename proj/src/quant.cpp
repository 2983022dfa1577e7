// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/quant.hpp"

#include <algorithm>
#include <deque>

namespace rrc::quant {

const Rational& Cost::value() const {
  if (!value_)
    throw Error("infinite cost has no finite value");
  return *value_;
}

std::string Cost::text() const { return value_ ? to_decimal_string(*value_) : "inf"; }

Cost operator+(const Cost& a, const Cost& b) {
  if (a.is_infinite() || b.is_infinite())
    return Cost::infinity();
  return Cost(*a.value_ + *b.value_);
}

bool operator<(const Cost& a, const Cost& b) {
  if (a.is_infinite())
    return false;
  if (b.is_infinite())
    return true;
  return *a.value_ < *b.value_;
}

MissingAttribution::MissingAttribution(std::string what_kind, AttackSignature leaf)
    : Error("missing " + what_kind + " for base step " + describe(leaf)),
      kind_(std::move(what_kind)), leaf_(std::move(leaf)) {}

void Attribution::set_cost(const AttackSignature& step, Rational cost) {
  if (cost < 0)
    throw Error("negative cost for " + describe(step));
  cost_[step] = std::move(cost);
}

void Attribution::set_prob(const AttackSignature& step, Rational prob) {
  if (prob < 0 || prob > 1)
    throw Error("probability outside [0,1] for " + describe(step));
  prob_[step] = std::move(prob);
}

void Attribution::set_default_cost(Rational cost) {
  if (cost < 0)
    throw Error("negative default cost");
  default_cost_ = std::move(cost);
}

void Attribution::set_default_prob(Rational prob) {
  if (prob < 0 || prob > 1)
    throw Error("default probability outside [0,1]");
  default_prob_ = std::move(prob);
}

Rational Attribution::cost_of(const AttackSignature& step) const {
  if (auto it = cost_.find(step); it != cost_.end())
    return it->second;
  if (default_cost_)
    return *default_cost_;
  throw MissingAttribution("cost", step);
}

Rational Attribution::prob_of(const AttackSignature& step) const {
  if (auto it = prob_.find(step); it != prob_.end())
    return it->second;
  if (default_prob_)
    return *default_prob_;
  throw MissingAttribution("prob", step);
}

namespace {

struct Folder {
  const Attribution& attr;
  const AttrLaws& laws;

  Evaluation operator()(const AttackTree& t) const {
    if (t.kind() == NodeKind::Base)
      return {attr.cost_of(t.sig()), attr.prob_of(t.sig())};

    bool is_and = t.kind() == NodeKind::And;
    Evaluation acc = is_and ? Evaluation{Rational(0), Rational(1)}
                            : Evaluation{Cost::infinity(), Rational(0)};
    for (const auto& c : t.children()) {
      Evaluation e = (*this)(c);
      if (is_and) {
        acc.cost = laws.and_cost == AndCostLaw::Sum ? acc.cost + e.cost
                                                    : std::max(acc.cost, e.cost);
        acc.prob = laws.and_prob == AndProbLaw::Product ? Rational(acc.prob * e.prob)
                                                        : std::min(acc.prob, e.prob);
      } else {
        acc.cost = std::min(acc.cost, e.cost);
        acc.prob = laws.or_prob == OrProbLaw::Max
                       ? std::max(acc.prob, e.prob)
                       : Rational(1 - (1 - acc.prob) * (1 - e.prob));
      }
    }
    return acc;
  }
};

} // namespace

Evaluation evaluate(const AttackTree& tree, const Attribution& attr, const AttrLaws& laws) {
  return Folder{attr, laws}(tree);
}

CheapestAttack cheapest_attack_path(const AttackTree& tree, const Attribution& attr) {
  std::optional<CheapestAttack> best;
  for (auto& path : attack_paths(tree)) {
    Rational total = 0;
    for (const auto& step : path)
      total += attr.cost_of(step);
    if (!best || total < best->total)
      best = CheapestAttack{std::move(path), std::move(total)};
  }
  if (!best)
    throw Error("attack tree has no attack scenario");
  return *best;
}

void validate_weights(const TransitionSystem& ts, std::span<const WeightedTransition> weights) {
  for (const auto& w : weights) {
    if (w.weight < 0 || w.weight > 1)
      throw Error("transition weight outside [0,1]");
    if (!ts.contains(w.from) || !ts.contains(w.to) || !ts.has_edge(w.from, w.to))
      throw Error("weighted transition #" + std::to_string(w.from.index) + " -> #" +
                  std::to_string(w.to.index) + " is not an edge");
  }
}

Rational path_probability(std::span<const WeightedTransition> weights, const Path& path) {
  std::map<std::pair<StateId, StateId>, Rational> table;
  for (const auto& w : weights)
    table[{w.from, w.to}] = w.weight;
  Rational p = 1;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto it = table.find({path[i], path[i + 1]});
    if (it == table.end())
      throw Error("no weight for edge #" + std::to_string(path[i].index) + " -> #" +
                  std::to_string(path[i + 1].index));
    p *= it->second;
  }
  return p;
}

std::map<StateId, std::optional<std::size_t>> goal_distance(const KripkeStructure& k,
                                                            const StateSet& target) {
  const auto& ts = k.ts();
  ts.require(target);
  std::vector<std::optional<std::size_t>> dist(ts.size());
  std::deque<StateId> frontier;
  for (StateId t : target) {
    if (!k.reach().contains(t))
      continue;
    dist[t.index] = 0;
    frontier.push_back(t);
  }
  while (!frontier.empty()) {
    StateId x = frontier.front();
    frontier.pop_front();
    for (StateId p : ts.in(x)) {
      if (!k.reach().contains(p) || dist[p.index])
        continue;
      dist[p.index] = *dist[x.index] + 1;
      frontier.push_back(p);
    }
  }
  std::map<StateId, std::optional<std::size_t>> out;
  for (StateId s : k.reach())
    out.emplace(s, dist[s.index]);
  return out;
}

} // namespace rrc::quant
