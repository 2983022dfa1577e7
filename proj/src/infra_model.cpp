// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/infra_model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace rrc::infra {

const char* to_string(ActionKind kind) {
  switch (kind) {
  case ActionKind::Move:
    return "move";
  case ActionKind::Get:
    return "get";
  case ActionKind::Put:
    return "put";
  }
  return "?";
}

std::string StatePredicate::text() const {
  const char* name = "true";
  switch (kind) {
  case Kind::True:
    return "true";
  case Kind::ActorAt:
    name = "actor-at";
    break;
  case Kind::ActorHas:
    name = "actor-has";
    break;
  case Kind::LocationHolds:
    name = "location-holds";
    break;
  case Kind::KvEquals:
    name = "kv-equals";
    break;
  case Kind::Linkable:
    name = "linkable";
    break;
  }
  return ctl::NamedAtom{name, args}.text();
}

std::string ActionInstance::text() const {
  std::string out = std::string(to_string(kind)) + "(" + actor + ", ";
  if (kind == ActionKind::Move)
    return out + source + ", " + target + ")";
  return out + target + ", " + item.value_or("?") + ")";
}

// InfraModel lookups

std::optional<std::size_t> InfraModel::actor_index(const std::string& id) const {
  for (std::size_t i = 0; i < actors.size(); ++i)
    if (actors[i].id == id)
      return i;
  return std::nullopt;
}

std::optional<std::size_t> InfraModel::location_index(const std::string& id) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].id == id)
      return i;
  return std::nullopt;
}

std::size_t InfraModel::actor_at(const std::string& id) const {
  auto i = actor_index(id);
  if (!i)
    throw Error("undeclared actor " + id);
  return *i;
}

std::size_t InfraModel::location_at(const std::string& id) const {
  auto i = location_index(id);
  if (!i)
    throw Error("undeclared location " + id);
  return *i;
}

bool InfraModel::has_credential(const std::string& c) const {
  return std::find(credentials.begin(), credentials.end(), c) != credentials.end();
}

bool InfraModel::has_role(const std::string& r) const {
  return std::any_of(actors.begin(), actors.end(),
                     [&](const Actor& a) { return a.role == r; });
}

bool InfraModel::has_edge(const std::string& from, const std::string& to) const {
  return std::find(edges.begin(), edges.end(), std::pair{from, to}) != edges.end();
}

const NamedPredicate* InfraModel::predicate(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name)
      return &p;
  return nullptr;
}

namespace {

bool is_item(const InfraModel& m, const std::string& item) {
  if (m.has_credential(item))
    return true;
  return std::any_of(m.locations.begin(), m.locations.end(),
                     [&](const Location& l) { return l.data.contains(item); });
}

void check_condition(const InfraModel& m, const Condition& c, bool negated) {
  switch (c.kind()) {
  case Condition::Kind::True:
    return;
  case Condition::Kind::HasCredential:
    if (!m.has_credential(c.arg()))
      throw Error("undeclared credential " + c.arg());
    if (negated)
      throw Error("credential test has(" + c.arg() + ") may not appear under not");
    return;
  case Condition::Kind::HasRole:
    if (!m.has_role(c.arg()))
      throw Error("undeclared role " + c.arg());
    return;
  case Condition::Kind::IsIdentity:
    m.actor_at(c.arg());
    return;
  case Condition::Kind::AtLocation:
    m.location_at(c.arg());
    return;
  case Condition::Kind::Not:
    check_condition(m, c.operands()[0], !negated);
    return;
  case Condition::Kind::And:
  case Condition::Kind::Or:
    for (const auto& op : c.operands())
      check_condition(m, op, negated);
    return;
  }
}

void check_predicate(const InfraModel& m, const StatePredicate& p) {
  using K = StatePredicate::Kind;
  auto arity = [&](std::size_t n) {
    if (p.args.size() != n)
      throw Error("predicate " + p.text() + " expects " + std::to_string(n) + " argument(s)");
  };
  switch (p.kind) {
  case K::True:
    arity(0);
    return;
  case K::ActorAt:
    arity(2);
    m.actor_at(p.args[0]);
    m.location_at(p.args[1]);
    return;
  case K::ActorHas:
    arity(2);
    m.actor_at(p.args[0]);
    if (!is_item(m, p.args[1]))
      throw Error("undeclared item " + p.args[1]);
    return;
  case K::LocationHolds:
    arity(2);
    m.location_at(p.args[0]);
    if (!is_item(m, p.args[1]))
      throw Error("undeclared item " + p.args[1]);
    return;
  case K::KvEquals:
    arity(3);
    m.actor_at(p.args[0]);
    return;
  case K::Linkable:
    arity(1);
    m.actor_at(p.args[0]);
    return;
  }
}

} // namespace

void check_model(const InfraModel& m) {
  std::set<std::string> seen;
  for (const auto& c : m.credentials)
    if (!seen.insert(c).second)
      throw Error("duplicate credential " + c);
  seen.clear();
  for (const auto& l : m.locations)
    if (!seen.insert(l.id).second)
      throw Error("duplicate location " + l.id);
  seen.clear();
  for (const auto& a : m.actors) {
    if (!seen.insert(a.id).second)
      throw Error("duplicate actor " + a.id);
    for (const auto& c : a.credentials)
      if (!m.has_credential(c))
        throw Error("undeclared credential " + c);
  }
  for (const auto& a : m.actors)
    for (const auto& target : a.impersonates)
      if (!m.has_role(target) && !m.actor_index(target))
        throw Error("impersonation target " + target + " is neither a role nor an actor");
  for (const auto& [from, to] : m.edges) {
    m.location_at(from);
    m.location_at(to);
  }
  for (const auto& rule : m.policies) {
    m.location_at(rule.location);
    check_condition(m, rule.condition, false);
  }
  for (const auto& h : m.hooks) {
    m.actor_at(h.actor);
    if (h.pool.empty())
      throw Error("refresh hook for " + h.actor + "." + h.key + " has an empty pool");
  }
  for (const auto& o : m.observers)
    m.location_at(o.location);
  for (const auto& a : m.actors)
    if (!m.init_position.contains(a.id))
      throw Error("actor " + a.id + " has no initial position");
  for (const auto& [actor, loc] : m.init_position) {
    m.actor_at(actor);
    m.location_at(loc);
  }
  for (const auto& kv : m.init_kv)
    m.actor_at(kv.actor);
  seen.clear();
  for (const auto& p : m.predicates) {
    if (!seen.insert(p.name).second)
      throw Error("duplicate predicate " + p.name);
    check_predicate(m, p.predicate);
  }
}

// States

namespace {

void record_observations(const InfraModel& m, InfraState& s, std::uint32_t actor) {
  std::uint32_t here = s.position[actor];
  for (const auto& o : m.observers) {
    if (m.location_at(o.location) != here)
      continue;
    auto it = s.kv[actor].find(o.key);
    if (it != s.kv[actor].end())
      s.observed[here][{actor, o.key}] = it->second;
  }
}

} // namespace

InfraState initial_state(const InfraModel& m) {
  check_model(m);
  InfraState s;
  s.position.resize(m.actors.size());
  s.holdings.resize(m.actors.size());
  s.kv.resize(m.actors.size());
  s.loc_data.resize(m.locations.size());
  s.observed.resize(m.locations.size());
  for (std::size_t a = 0; a < m.actors.size(); ++a) {
    s.position[a] = static_cast<std::uint32_t>(m.location_at(m.init_position.at(m.actors[a].id)));
    s.holdings[a] = m.actors[a].credentials;
  }
  for (std::size_t l = 0; l < m.locations.size(); ++l)
    s.loc_data[l] = m.locations[l].data;
  for (const auto& kv : m.init_kv)
    s.kv[m.actor_at(kv.actor)][kv.key] = kv.value;
  for (std::size_t a = 0; a < m.actors.size(); ++a)
    record_observations(m, s, static_cast<std::uint32_t>(a));
  return s;
}

std::string state_key(const InfraModel& m, const InfraState& s) {
  std::ostringstream os;
  auto set_text = [](const std::set<std::string>& items) {
    std::string out = "{";
    for (const auto& i : items)
      out += (out.size() > 1 ? "," : "") + i;
    return out + "}";
  };
  for (std::size_t a = 0; a < m.actors.size(); ++a)
    os << (a ? ", " : "") << m.actors[a].id << '@' << m.locations[s.position[a]].id;
  for (std::size_t a = 0; a < m.actors.size(); ++a)
    if (!s.holdings[a].empty())
      os << ", " << m.actors[a].id << " has" << set_text(s.holdings[a]);
  for (std::size_t l = 0; l < m.locations.size(); ++l)
    if (!s.loc_data[l].empty())
      os << ", " << m.locations[l].id << " holds" << set_text(s.loc_data[l]);
  for (std::size_t a = 0; a < m.actors.size(); ++a)
    for (const auto& [k, v] : s.kv[a])
      os << ", " << m.actors[a].id << '.' << k << '=' << v;
  for (std::size_t l = 0; l < m.locations.size(); ++l) {
    if (s.observed[l].empty())
      continue;
    std::set<std::string> records;
    for (const auto& [who, v] : s.observed[l])
      records.insert(m.actors[who.first].id + "." + who.second + "=" + v);
    os << ", " << m.locations[l].id << " saw" << set_text(records);
  }
  return os.str();
}

// Policies

namespace {

struct Subject {
  std::string identity;
  std::optional<std::string> role;
};

bool eval_condition(const InfraModel& m, const Condition& c, const Subject& who,
                    const std::set<std::string>& holdings, std::uint32_t here) {
  switch (c.kind()) {
  case Condition::Kind::True:
    return true;
  case Condition::Kind::HasCredential:
    return holdings.contains(c.arg());
  case Condition::Kind::HasRole:
    return who.role == c.arg();
  case Condition::Kind::IsIdentity:
    return who.identity == c.arg();
  case Condition::Kind::AtLocation:
    return m.locations[here].id == c.arg();
  case Condition::Kind::Not:
    return !eval_condition(m, c.operands()[0], who, holdings, here);
  case Condition::Kind::And:
    return eval_condition(m, c.operands()[0], who, holdings, here) &&
           eval_condition(m, c.operands()[1], who, holdings, here);
  case Condition::Kind::Or:
    return eval_condition(m, c.operands()[0], who, holdings, here) ||
           eval_condition(m, c.operands()[1], who, holdings, here);
  }
  return false;
}

// The actor's own view first; a tipped actor adds one view per target.
std::vector<Subject> subjects(const InfraModel& m, const Actor& a) {
  std::vector<Subject> out{{a.id, a.role}};
  if (!a.tipped)
    return out;
  for (const auto& target : a.impersonates) {
    if (auto other = m.actor_index(target))
      out.push_back({m.actors[*other].id, m.actors[*other].role});
    else
      out.push_back({a.id, target});
  }
  return out;
}

} // namespace

bool enables(const InfraModel& m, const InfraState& s, const std::string& actor,
             const std::string& location, ActionKind kind) {
  std::size_t a = m.actor_at(actor);
  m.location_at(location);
  auto views = subjects(m, m.actors[a]);
  for (const auto& rule : m.policies) {
    if (rule.location != location ||
        std::find(rule.allowed.begin(), rule.allowed.end(), kind) == rule.allowed.end())
      continue;
    for (const auto& who : views)
      if (eval_condition(m, rule.condition, who, s.holdings[a], s.position[a]))
        return true;
  }
  return false;
}

InfraState apply_action(const InfraModel& m, const InfraState& s, const ActionInstance& act) {
  auto a = static_cast<std::uint32_t>(m.actor_at(act.actor));
  auto src = static_cast<std::uint32_t>(m.location_at(act.source));
  auto dst = static_cast<std::uint32_t>(m.location_at(act.target));
  if (s.position[a] != src)
    throw Error(act.text() + ": actor " + act.actor + " is not at " + act.source);
  if (!enables(m, s, act.actor, act.target, act.kind))
    throw Error(act.text() + ": policy at " + act.target + " does not enable " +
                to_string(act.kind) + " for " + act.actor);

  InfraState next = s;
  switch (act.kind) {
  case ActionKind::Move:
    if (!m.has_edge(act.source, act.target))
      throw Error(act.text() + ": no edge " + act.source + " -> " + act.target);
    next.position[a] = dst;
    for (const auto& hook : m.hooks) {
      if (hook.actor != act.actor)
        continue;
      std::set<std::string> used;
      for (std::size_t l = 0; l < next.observed.size(); ++l) {
        if (l == dst)
          continue;
        if (auto it = next.observed[l].find({a, hook.key}); it != next.observed[l].end())
          used.insert(it->second);
      }
      for (std::size_t b = 0; b < next.kv.size(); ++b) {
        if (b == a)
          continue;
        if (auto it = next.kv[b].find(hook.key); it != next.kv[b].end())
          used.insert(it->second);
      }
      for (const auto& v : hook.pool) {
        if (!used.contains(v)) {
          next.kv[a][hook.key] = v;
          break;
        }
      }
    }
    record_observations(m, next, a);
    break;
  case ActionKind::Get:
    if (src != dst)
      throw Error(act.text() + ": get must happen at the actor's location");
    if (!act.item || !s.loc_data[dst].contains(*act.item))
      throw Error(act.text() + ": item " + act.item.value_or("?") + " is not at " + act.target);
    next.holdings[a].insert(*act.item);
    break;
  case ActionKind::Put:
    if (src != dst)
      throw Error(act.text() + ": put must happen at the actor's location");
    if (!act.item || !s.holdings[a].contains(*act.item))
      throw Error(act.text() + ": actor " + act.actor + " does not hold " + act.item.value_or("?"));
    next.loc_data[dst].insert(*act.item);
    break;
  }
  return next;
}

std::vector<ActionInstance> enumerate_actions(const InfraModel& m, const InfraState& s) {
  std::vector<ActionInstance> out;
  for (std::size_t a = 0; a < m.actors.size(); ++a) {
    const std::string& who = m.actors[a].id;
    const std::string& here = m.locations[s.position[a]].id;
    for (const auto& loc : m.locations)
      if (m.has_edge(here, loc.id) && enables(m, s, who, loc.id, ActionKind::Move))
        out.push_back({ActionKind::Move, who, here, loc.id, std::nullopt});
    if (enables(m, s, who, here, ActionKind::Get))
      for (const auto& item : s.loc_data[s.position[a]])
        if (!s.holdings[a].contains(item))
          out.push_back({ActionKind::Get, who, here, here, item});
    if (enables(m, s, who, here, ActionKind::Put))
      for (const auto& item : s.holdings[a])
        if (!s.loc_data[s.position[a]].contains(item))
          out.push_back({ActionKind::Put, who, here, here, item});
  }
  return out;
}

Exploration explore(const InfraModel& m, std::size_t bound) {
  if (bound < 1)
    throw Error("exploration bound must be at least 1");
  std::vector<InfraState> table{initial_state(m)};
  std::map<InfraState, StateId> index{{table.front(), StateId{0}}};
  std::vector<std::pair<StateId, StateId>> edges;
  std::map<std::pair<StateId, StateId>, std::vector<ActionInstance>> labels;
  bool truncated = false;

  for (std::size_t cursor = 0; cursor < table.size() && !truncated; ++cursor) {
    StateId from{static_cast<std::uint32_t>(cursor)};
    InfraState current = table[cursor];
    for (const auto& act : enumerate_actions(m, current)) {
      InfraState next = apply_action(m, current, act);
      auto it = index.find(next);
      if (it == index.end()) {
        if (table.size() >= bound) {
          truncated = true;
          break;
        }
        StateId id{static_cast<std::uint32_t>(table.size())};
        it = index.emplace(next, id).first;
        table.push_back(std::move(next));
      }
      auto& acts = labels[{from, it->second}];
      if (acts.empty())
        edges.emplace_back(from, it->second);
      acts.push_back(act);
    }
  }

  std::vector<std::string> keys;
  keys.reserve(table.size());
  for (const auto& s : table)
    keys.push_back(state_key(m, s));
  TransitionSystem ts(std::move(keys), edges);
  KripkeStructure kripke = make_kripke(std::move(ts), StateSet{StateId{0}});
  return Exploration{std::move(kripke), std::move(table), std::move(labels), truncated};
}

// Predicates

bool holds_in(const InfraModel& m, const InfraState& s, const StatePredicate& p) {
  using K = StatePredicate::Kind;
  switch (p.kind) {
  case K::True:
    return true;
  case K::ActorAt:
    return s.position[m.actor_at(p.args[0])] == m.location_at(p.args[1]);
  case K::ActorHas:
    return s.holdings[m.actor_at(p.args[0])].contains(p.args[1]);
  case K::LocationHolds:
    return s.loc_data[m.location_at(p.args[0])].contains(p.args[1]);
  case K::KvEquals: {
    const auto& kv = s.kv[m.actor_at(p.args[0])];
    auto it = kv.find(p.args[1]);
    return it != kv.end() && it->second == p.args[2];
  }
  case K::Linkable: {
    auto a = static_cast<std::uint32_t>(m.actor_at(p.args[0]));
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& records : s.observed)
      for (const auto& [who, value] : records)
        if (who.first == a && !seen.insert({who.second, value}).second)
          return true;
    return false;
  }
  }
  return false;
}

StateSet predicate_states(const InfraModel& m, const std::vector<InfraState>& table,
                          const StatePredicate& p) {
  check_predicate(m, p);
  std::vector<StateId> ids;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (holds_in(m, table[i], p))
      ids.push_back(StateId{static_cast<std::uint32_t>(i)});
  return StateSet(std::move(ids));
}

StatePredicate resolve_atom(const InfraModel& m, const ctl::NamedAtom& atom) {
  using K = StatePredicate::Kind;
  if (atom.args.empty()) {
    if (const auto* named = m.predicate(atom.name))
      return named->predicate;
  }
  static const std::map<std::string, K> primitives{
      {"true", K::True},           {"actor-at", K::ActorAt},
      {"actor-has", K::ActorHas},  {"location-holds", K::LocationHolds},
      {"kv-equals", K::KvEquals},  {"linkable", K::Linkable},
  };
  auto it = primitives.find(atom.name);
  if (it == primitives.end())
    throw Error("unknown predicate " + atom.text());
  StatePredicate p{it->second, atom.args};
  check_predicate(m, p);
  return p;
}

ctl::AtomResolver atom_resolver(const InfraModel& m, const std::vector<InfraState>& table) {
  return [&m, &table](const ctl::NamedAtom& atom) {
    return predicate_states(m, table, resolve_atom(m, atom));
  };
}

} // namespace rrc::infra
