// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rrcheck/ctl.hpp"
#include "rrcheck/state_space.hpp"

namespace rrc::infra {

enum class LocationKind { Physical, Virtual };

struct Location {
  std::string id;
  LocationKind kind = LocationKind::Physical;
  /// Data items present initially.
  std::set<std::string> data;

  friend bool operator==(const Location&, const Location&) = default;
};

struct Actor {
  std::string id;
  std::set<std::string> credentials;
  std::optional<std::string> role;
  /// Insider state. A tipped actor may satisfy policy conditions as any of
  /// its impersonation targets (roles or actor identities).
  bool tipped = false;
  std::vector<std::string> impersonates;

  friend bool operator==(const Actor&, const Actor&) = default;
};

/// Policy condition over the acting actor.
class Condition {
public:
  enum class Kind { True, HasCredential, HasRole, IsIdentity, AtLocation, Not, And, Or };

  static Condition always() { return Condition(Kind::True, {}, {}); }
  static Condition has_credential(std::string c) { return Condition(Kind::HasCredential, std::move(c), {}); }
  static Condition has_role(std::string r) { return Condition(Kind::HasRole, std::move(r), {}); }
  static Condition is_identity(std::string a) { return Condition(Kind::IsIdentity, std::move(a), {}); }
  static Condition at_location(std::string l) { return Condition(Kind::AtLocation, std::move(l), {}); }
  static Condition negation(Condition c) { return Condition(Kind::Not, {}, {std::move(c)}); }
  static Condition both(Condition a, Condition b) { return Condition(Kind::And, {}, {std::move(a), std::move(b)}); }
  static Condition either(Condition a, Condition b) { return Condition(Kind::Or, {}, {std::move(a), std::move(b)}); }

  Kind kind() const { return kind_; }
  const std::string& arg() const { return arg_; }
  const std::vector<Condition>& operands() const { return operands_; }

  friend bool operator==(const Condition&, const Condition&) = default;

private:
  Condition(Kind kind, std::string arg, std::vector<Condition> operands)
      : kind_(kind), arg_(std::move(arg)), operands_(std::move(operands)) {}

  Kind kind_;
  std::string arg_;
  std::vector<Condition> operands_;
};

enum class ActionKind { Move, Get, Put };

const char* to_string(ActionKind kind);

struct PolicyRule {
  std::string location;
  Condition condition = Condition::always();
  /// Sorted in enum order.
  std::vector<ActionKind> allowed;

  friend bool operator==(const PolicyRule&, const PolicyRule&) = default;
};

/// On every move of `actor`, reassign `actor.key` from `pool`: the first
/// pool value not recorded for the actor at another observed location and
/// not held by another actor under the same key. Keeps the current value if
/// no pool value qualifies.
struct RefreshHook {
  std::string actor;
  std::string key;
  std::vector<std::string> pool;

  friend bool operator==(const RefreshHook&, const RefreshHook&) = default;
};

/// Location `location` records the value of `key` for every actor present
/// there (on arrival, and initially). One record per actor and key; a later
/// arrival overwrites it.
struct Observer {
  std::string location;
  std::string key;

  friend bool operator==(const Observer&, const Observer&) = default;
};

/// Primitive state predicates usable as CTL atoms.
struct StatePredicate {
  enum class Kind { True, ActorAt, ActorHas, LocationHolds, KvEquals, Linkable };
  Kind kind = Kind::True;
  std::vector<std::string> args;

  /// Canonical text, e.g. `actor-at(alice, office)`.
  std::string text() const;
  friend bool operator==(const StatePredicate&, const StatePredicate&) = default;
};

struct NamedPredicate {
  std::string name;
  StatePredicate predicate;

  friend bool operator==(const NamedPredicate&, const NamedPredicate&) = default;
};

struct InitialKv {
  std::string actor;
  std::string key;
  std::string value;

  friend bool operator==(const InitialKv&, const InitialKv&) = default;
};

/// Declarative infrastructure model. All vectors keep declaration order.
struct InfraModel {
  std::vector<std::string> credentials;
  std::vector<Location> locations;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<Actor> actors;
  std::vector<PolicyRule> policies;
  std::vector<RefreshHook> hooks;
  std::vector<Observer> observers;
  /// Initial position per actor (actor id -> location id).
  std::map<std::string, std::string> init_position;
  std::vector<InitialKv> init_kv;
  std::vector<NamedPredicate> predicates;

  std::optional<std::size_t> actor_index(const std::string& id) const;
  std::optional<std::size_t> location_index(const std::string& id) const;
  bool has_credential(const std::string& c) const;
  bool has_role(const std::string& r) const;
  bool has_edge(const std::string& from, const std::string& to) const;
  const NamedPredicate* predicate(const std::string& name) const;

  std::size_t actor_at(const std::string& id) const;
  std::size_t location_at(const std::string& id) const;

  friend bool operator==(const InfraModel&, const InfraModel&) = default;
};

/// Throws rrc::Error when the model references undeclared names, has
/// duplicate ids, or lacks an initial position for some actor.
void check_model(const InfraModel& m);

/// Mutable infrastructure state. Vectors are indexed by actor or location
/// declaration index; all containers are ordered, so equal states compare
/// equal member-wise.
struct InfraState {
  std::vector<std::uint32_t> position;
  std::vector<std::set<std::string>> holdings;
  std::vector<std::set<std::string>> loc_data;
  std::vector<std::map<std::string, std::string>> kv;
  /// Per location: (actor index, key) -> last recorded value.
  std::vector<std::map<std::pair<std::uint32_t, std::string>, std::string>> observed;

  friend auto operator<=>(const InfraState&, const InfraState&) = default;
  friend bool operator==(const InfraState&, const InfraState&) = default;
};

InfraState initial_state(const InfraModel& m);

/// Canonical human-readable key, injective on states of one model.
std::string state_key(const InfraModel& m, const InfraState& s);

struct ActionInstance {
  ActionKind kind = ActionKind::Move;
  std::string actor;
  std::string source;
  std::string target;
  std::optional<std::string> item;

  /// `move(alice, lobby, office)` / `get(alice, office, doc)`.
  std::string text() const;
  friend bool operator==(const ActionInstance&, const ActionInstance&) = default;
};

/// Whether the policy at `location` lets `actor` perform `kind` in `s`.
bool enables(const InfraModel& m, const InfraState& s, const std::string& actor,
             const std::string& location, ActionKind kind);

/// Applies `act`; throws rrc::Error naming the failed premise.
InfraState apply_action(const InfraModel& m, const InfraState& s, const ActionInstance& act);

/// Enabled actions: actors in declaration order, then move/get/put, then
/// targets (locations in declaration order, items in sorted order).
std::vector<ActionInstance> enumerate_actions(const InfraModel& m, const InfraState& s);

struct Exploration {
  KripkeStructure kripke;
  /// table[i] is the state interned as StateId{i}.
  std::vector<InfraState> table;
  /// Every action producing an edge, in enumeration order.
  std::map<std::pair<StateId, StateId>, std::vector<ActionInstance>> edge_labels;
  /// True when the state count would have exceeded the bound.
  bool truncated = false;
};

/// Breadth-first closure of the action semantics from the initial state,
/// holding at most `bound` states.
Exploration explore(const InfraModel& m, std::size_t bound);

bool holds_in(const InfraModel& m, const InfraState& s, const StatePredicate& p);

StateSet predicate_states(const InfraModel& m, const std::vector<InfraState>& table,
                          const StatePredicate& p);

/// Turns a CTL atom into a predicate: either a declared named predicate or
/// a primitive (`actor-at`, `actor-has`, `location-holds`, `kv-equals`,
/// `linkable`). Throws on unknown names, wrong arity or undeclared arguments.
StatePredicate resolve_atom(const InfraModel& m, const ctl::NamedAtom& atom);

/// AtomResolver over an exploration table.
ctl::AtomResolver atom_resolver(const InfraModel& m, const std::vector<InfraState>& table);

} // namespace rrc::infra
