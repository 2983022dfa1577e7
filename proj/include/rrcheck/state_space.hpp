// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rrcheck/error.hpp"

namespace rrc {

/// Dense index of an interned state.
struct StateId {
  std::uint32_t index = 0;

  friend auto operator<=>(const StateId&, const StateId&) = default;
};

/// Sorted, duplicate-free set of states. Iteration is in ascending index
/// order, which is what every deterministic tie-break in the library relies
/// on.
class StateSet {
public:
  using const_iterator = std::vector<StateId>::const_iterator;

  StateSet() = default;
  StateSet(std::initializer_list<StateId> ids);
  explicit StateSet(std::vector<StateId> ids);

  bool contains(StateId id) const;
  void insert(StateId id);
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  std::span<const StateId> members() const { return members_; }

  bool is_subset_of(const StateSet& other) const;
  /// True iff the two sets share at least one state.
  bool intersects(const StateSet& other) const;

  friend bool operator==(const StateSet&, const StateSet&) = default;
  friend auto operator<=>(const StateSet& a, const StateSet& b) {
    return a.members_ <=> b.members_;
  }

private:
  std::vector<StateId> members_;
};

StateSet set_union(const StateSet& a, const StateSet& b);
StateSet set_intersection(const StateSet& a, const StateSet& b);
StateSet set_difference(const StateSet& a, const StateSet& b);

/// A non-empty sequence of states, consecutive entries joined by an edge.
/// A single state is the zero-step path.
using Path = std::vector<StateId>;

/// Finite transition system over interned opaque keys. The relation is
/// unlabeled; states may carry a set of proposition names.
class TransitionSystem {
public:
  TransitionSystem() = default;

  /// Interns `keys` in order (first appearance = index 0) and adds `edges`.
  /// Throws on duplicate keys or on an edge endpoint that is not a key.
  static TransitionSystem build(
      std::span<const std::string> keys,
      std::span<const std::pair<std::string, std::string>> edges);

  /// Builds from already-interned ids. Every endpoint must be < keys.size().
  TransitionSystem(std::vector<std::string> keys,
                   std::span<const std::pair<StateId, StateId>> edges);

  std::size_t size() const { return keys_.size(); }
  bool contains(StateId id) const { return id.index < keys_.size(); }
  StateSet states() const;

  const std::string& key(StateId id) const;
  std::optional<StateId> find(std::string_view key) const;

  /// Sorted successor list.
  std::span<const StateId> out(StateId id) const;
  /// Sorted predecessor list.
  std::span<const StateId> in(StateId id) const;
  bool has_edge(StateId from, StateId to) const;
  std::size_t edge_count() const { return edge_count_; }
  std::vector<std::pair<StateId, StateId>> edges() const;

  /// Attaches proposition `name` to `id`. Declared propositions are the ones
  /// atoms may refer to, even when no state carries them.
  void add_label(StateId id, const std::string& name);
  void declare_label(const std::string& name);
  bool has_label_name(const std::string& name) const;
  const std::set<std::string>& labels(StateId id) const;
  StateSet states_labelled(const std::string& name) const;

  /// Throws rrc::Error unless `id` is a state of this system.
  void require(StateId id) const;
  void require(const StateSet& set) const;

private:
  std::vector<std::string> keys_;
  std::map<std::string, StateId, std::less<>> index_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<StateId>> pred_;
  std::vector<std::set<std::string>> labels_;
  std::set<std::string> label_names_;
  std::size_t edge_count_ = 0;
};

/// A transition system together with its initial states and the reachable
/// closure of those states. Evaluation only ever looks at `reach()`.
class KripkeStructure {
public:
  KripkeStructure(TransitionSystem ts, StateSet init, StateSet reach)
      : ts_(std::move(ts)), init_(std::move(init)), reach_(std::move(reach)) {}

  const TransitionSystem& ts() const { return ts_; }
  const StateSet& init() const { return init_; }
  const StateSet& reach() const { return reach_; }

private:
  TransitionSystem ts_;
  StateSet init_;
  StateSet reach_;
};

StateSet successors(const TransitionSystem& ts, StateId x);
StateSet predecessors(const TransitionSystem& ts, const StateSet& xs);

/// Least superset of `init` closed under the step relation.
StateSet reachable(const TransitionSystem& ts, const StateSet& init);

KripkeStructure make_kripke(TransitionSystem ts, StateSet init);

/// Minimum-length path from `from` into `target`, or nullopt. Breadth-first;
/// successors are expanded in ascending index order and the first discovery
/// wins, so the result is unique.
std::optional<Path> shortest_path(const TransitionSystem& ts, StateId from,
                                  const StateSet& target);

} // namespace rrc
