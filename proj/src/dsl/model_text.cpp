// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/model_text.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "rrcheck/dsl/lexer.hpp"

namespace rrc::dsl {

using namespace rrc::infra;

namespace {

class ModelReader {
public:
  ModelReader(std::string_view text, InfraModel base, bool patch)
      : in_(lex(text), false), m_(std::move(base)), patch_(patch) {}

  InfraModel run() {
    while (!in_.at_end()) {
      if (in_.peek().kind == TokenKind::Newline) {
        in_.next();
        continue;
      }
      line();
    }
    finish();
    return std::move(m_);
  }

private:
  void line() {
    Token kw = in_.expect_ident("a declaration keyword");
    const std::string& k = kw.text;
    if (k == "format")
      format();
    else if (k == "credential")
      credential();
    else if (k == "location")
      location();
    else if (k == "edge")
      edge();
    else if (k == "actor")
      actor();
    else if (k == "tipped")
      tipped();
    else if (k == "policy")
      policy();
    else if (k == "hook")
      hook();
    else if (k == "observe")
      observe();
    else if (k == "init")
      init();
    else if (k == "pred")
      pred();
    else if (k == "remove" && patch_)
      remove();
    else
      throw ParseError(kw.span, "a declaration keyword", describe(kw));
    in_.expect_line_end();
  }

  [[noreturn]] static void reject(const Token& at, const std::string& message) {
    throw SemanticError(at.span, message);
  }

  std::vector<Token> name_set() {
    std::vector<Token> out;
    in_.expect_punct("{");
    if (!in_.is_punct("}")) {
      do
        out.push_back(in_.expect_ident("a name"));
      while (in_.accept_punct(","));
    }
    in_.expect_punct("}");
    return out;
  }

  Token location_ref() {
    Token t = in_.expect_ident("a location");
    if (!m_.location_index(t.text))
      reject(t, "undeclared location " + t.text);
    return t;
  }

  Token actor_ref() {
    Token t = in_.expect_ident("an actor");
    if (!m_.actor_index(t.text))
      reject(t, "undeclared actor " + t.text);
    return t;
  }

  void format() {
    Token v = in_.peek();
    if (v.kind != TokenKind::Number || v.text != "1")
      in_.fail("format version 1");
    in_.next();
  }

  void credential() {
    Token id = in_.expect_ident("a credential name");
    if (m_.has_credential(id.text)) {
      if (!patch_)
        reject(id, "duplicate credential " + id.text);
      return;
    }
    m_.credentials.push_back(id.text);
  }

  void location() {
    Token id = in_.expect_ident("a location name");
    Token kind = in_.expect_ident("'physical' or 'virtual'");
    Location loc{id.text, LocationKind::Physical, {}};
    if (kind.text == "virtual")
      loc.kind = LocationKind::Virtual;
    else if (kind.text != "physical")
      throw ParseError(kind.span, "'physical' or 'virtual'", describe(kind));
    if (in_.accept_keyword("data"))
      for (const auto& t : name_set())
        loc.data.insert(t.text);
    if (auto i = m_.location_index(id.text)) {
      if (!patch_)
        reject(id, "duplicate location " + id.text);
      m_.locations[*i] = std::move(loc);
      return;
    }
    m_.locations.push_back(std::move(loc));
  }

  void edge() {
    Token from = location_ref();
    Token to = location_ref();
    if (m_.has_edge(from.text, to.text)) {
      if (!patch_)
        reject(from, "duplicate edge " + from.text + " " + to.text);
      return;
    }
    m_.edges.emplace_back(from.text, to.text);
  }

  void actor() {
    Token id = in_.expect_ident("an actor name");
    Actor a{id.text, {}, std::nullopt, false, {}};
    bool creds_seen = false;
    bool role_seen = false;
    while (!in_.at_line_end()) {
      Token clause = in_.expect_ident("'creds' or 'role'");
      if (clause.text == "creds" && !creds_seen) {
        creds_seen = true;
        for (const auto& c : name_set()) {
          if (!m_.has_credential(c.text))
            reject(c, "undeclared credential " + c.text);
          a.credentials.insert(c.text);
        }
      } else if (clause.text == "role" && !role_seen) {
        role_seen = true;
        auto roles = name_set();
        if (roles.size() != 1)
          reject(clause, "an actor has exactly one role");
        a.role = roles.front().text;
      } else {
        throw ParseError(clause.span, "'creds' or 'role'", describe(clause));
      }
    }
    if (auto i = m_.actor_index(id.text)) {
      if (!patch_)
        reject(id, "duplicate actor " + id.text);
      m_.actors[*i].credentials = std::move(a.credentials);
      m_.actors[*i].role = std::move(a.role);
      return;
    }
    actor_spans_.emplace(id.text, id.span);
    m_.actors.push_back(std::move(a));
  }

  void tipped() {
    Token who = actor_ref();
    in_.expect_keyword("impersonates");
    std::vector<std::string> targets;
    for (const auto& t : name_set()) {
      if (!m_.has_role(t.text) && !m_.actor_index(t.text))
        reject(t, "impersonation target " + t.text + " is neither a role nor an actor");
      targets.push_back(t.text);
    }
    Actor& a = m_.actors[*m_.actor_index(who.text)];
    if (a.tipped && !patch_)
      reject(who, "actor " + who.text + " is already tipped");
    a.tipped = true;
    a.impersonates = std::move(targets);
  }

  Condition condition(bool negated) {
    Condition lhs = conjunction(negated);
    while (in_.accept_keyword("or"))
      lhs = Condition::either(std::move(lhs), conjunction(negated));
    return lhs;
  }

  Condition conjunction(bool negated) {
    Condition lhs = condition_atom(negated);
    while (in_.accept_keyword("and"))
      lhs = Condition::both(std::move(lhs), condition_atom(negated));
    return lhs;
  }

  Condition condition_atom(bool negated) {
    if (in_.accept_keyword("not"))
      return Condition::negation(condition_atom(!negated));
    if (in_.accept_punct("(")) {
      Condition c = condition(negated);
      in_.expect_punct(")");
      return c;
    }
    Token head = in_.expect_ident("a condition");
    if (head.text == "true")
      return Condition::always();
    if (head.text != "has" && head.text != "role" && head.text != "is" && head.text != "at")
      throw ParseError(head.span, "a condition", describe(head));
    in_.expect_punct("(");
    Token arg = in_.expect_ident("a name");
    in_.expect_punct(")");
    if (head.text == "has") {
      if (!m_.has_credential(arg.text))
        reject(arg, "undeclared credential " + arg.text);
      if (negated)
        reject(head, "credential test has(" + arg.text + ") may not appear under not");
      return Condition::has_credential(arg.text);
    }
    if (head.text == "role") {
      if (!m_.has_role(arg.text))
        reject(arg, "undeclared role " + arg.text);
      return Condition::has_role(arg.text);
    }
    if (head.text == "is") {
      if (!m_.actor_index(arg.text))
        reject(arg, "undeclared actor " + arg.text);
      return Condition::is_identity(arg.text);
    }
    if (!m_.location_index(arg.text))
      reject(arg, "undeclared location " + arg.text);
    return Condition::at_location(arg.text);
  }

  void policy() {
    Token loc = location_ref();
    in_.expect_punct(":");
    PolicyRule rule{loc.text, condition(false), {}};
    in_.expect_punct("->");
    for (const auto& t : name_set()) {
      ActionKind k;
      if (t.text == "move")
        k = ActionKind::Move;
      else if (t.text == "get")
        k = ActionKind::Get;
      else if (t.text == "put")
        k = ActionKind::Put;
      else
        throw ParseError(t.span, "'move', 'get' or 'put'", describe(t));
      rule.allowed.push_back(k);
    }
    std::sort(rule.allowed.begin(), rule.allowed.end());
    rule.allowed.erase(std::unique(rule.allowed.begin(), rule.allowed.end()), rule.allowed.end());
    m_.policies.push_back(std::move(rule));
  }

  void hook() {
    in_.expect_keyword("on-move");
    Token who = actor_ref();
    in_.expect_keyword("refresh");
    Token key = in_.expect_ident("a key name");
    in_.expect_keyword("pool");
    Token pool_start = in_.peek();
    RefreshHook h{who.text, key.text, {}};
    for (const auto& t : name_set()) {
      if (std::find(h.pool.begin(), h.pool.end(), t.text) != h.pool.end())
        reject(t, "duplicate pool value " + t.text);
      h.pool.push_back(t.text);
    }
    if (h.pool.empty())
      reject(pool_start, "refresh pool must not be empty");
    auto it = std::find_if(m_.hooks.begin(), m_.hooks.end(), [&](const RefreshHook& x) {
      return x.actor == h.actor && x.key == h.key;
    });
    if (it != m_.hooks.end()) {
      if (!patch_)
        reject(who, "duplicate hook for " + who.text + "." + key.text);
      *it = std::move(h);
      return;
    }
    m_.hooks.push_back(std::move(h));
  }

  void observe() {
    Token loc = location_ref();
    Token key = in_.expect_ident("a key name");
    Observer o{loc.text, key.text};
    if (std::find(m_.observers.begin(), m_.observers.end(), o) != m_.observers.end()) {
      if (!patch_)
        reject(loc, "duplicate observer " + loc.text + " " + key.text);
      return;
    }
    m_.observers.push_back(std::move(o));
  }

  void init() {
    Token who = actor_ref();
    if (in_.accept_punct("@")) {
      Token loc = location_ref();
      if (m_.init_position.contains(who.text) && !patch_)
        reject(who, "duplicate initial position for " + who.text);
      m_.init_position[who.text] = loc.text;
      return;
    }
    if (!in_.accept_punct("."))
      in_.fail("'@' or '.'");
    Token key = in_.expect_ident("a key name");
    in_.expect_punct("=");
    Token value = in_.expect_ident("a value");
    auto it = std::find_if(m_.init_kv.begin(), m_.init_kv.end(), [&](const InitialKv& kv) {
      return kv.actor == who.text && kv.key == key.text;
    });
    if (it != m_.init_kv.end()) {
      if (!patch_)
        reject(key, "duplicate initial value for " + who.text + "." + key.text);
      it->value = value.text;
      return;
    }
    m_.init_kv.push_back({who.text, key.text, value.text});
  }

  void pred() {
    Token name = in_.expect_ident("a predicate name");
    in_.expect_punct("=");
    Token head = in_.expect_ident("a predicate");
    ctl::NamedAtom atom{head.text, {}};
    if (in_.accept_punct("(")) {
      do
        atom.args.push_back(in_.expect_ident("an argument").text);
      while (in_.accept_punct(","));
      in_.expect_punct(")");
    }
    StatePredicate p;
    try {
      p = resolve_atom(m_, atom);
    } catch (const SourceError&) {
      throw;
    } catch (const Error& e) {
      reject(head, e.what());
    }
    auto it = std::find_if(m_.predicates.begin(), m_.predicates.end(),
                           [&](const NamedPredicate& x) { return x.name == name.text; });
    if (it != m_.predicates.end()) {
      if (!patch_)
        reject(name, "duplicate predicate " + name.text);
      it->predicate = std::move(p);
      return;
    }
    m_.predicates.push_back({name.text, std::move(p)});
  }

  void remove() {
    Token what = in_.expect_ident("'edge', 'policy', 'hook', 'tipped' or 'observe'");
    if (what.text == "edge") {
      Token from = location_ref();
      Token to = location_ref();
      auto it = std::find(m_.edges.begin(), m_.edges.end(), std::pair{from.text, to.text});
      if (it == m_.edges.end())
        reject(from, "no edge " + from.text + " " + to.text + " to remove");
      m_.edges.erase(it);
    } else if (what.text == "policy") {
      Token loc = location_ref();
      auto n = std::erase_if(m_.policies, [&](const PolicyRule& r) { return r.location == loc.text; });
      if (n == 0)
        reject(loc, "no policy at " + loc.text + " to remove");
    } else if (what.text == "hook") {
      Token who = actor_ref();
      Token key = in_.expect_ident("a key name");
      auto n = std::erase_if(m_.hooks, [&](const RefreshHook& h) {
        return h.actor == who.text && h.key == key.text;
      });
      if (n == 0)
        reject(who, "no hook for " + who.text + "." + key.text + " to remove");
    } else if (what.text == "tipped") {
      Token who = actor_ref();
      Actor& a = m_.actors[*m_.actor_index(who.text)];
      if (!a.tipped)
        reject(who, "actor " + who.text + " is not tipped");
      a.tipped = false;
      a.impersonates.clear();
    } else if (what.text == "observe") {
      Token loc = location_ref();
      Token key = in_.expect_ident("a key name");
      auto it = std::find(m_.observers.begin(), m_.observers.end(), Observer{loc.text, key.text});
      if (it == m_.observers.end())
        reject(loc, "no observer " + loc.text + " " + key.text + " to remove");
      m_.observers.erase(it);
    } else {
      throw ParseError(what.span, "'edge', 'policy', 'hook', 'tipped' or 'observe'", describe(what));
    }
  }

  void finish() {
    if (!patch_) {
      for (const auto& a : m_.actors)
        if (!m_.init_position.contains(a.id))
          throw SemanticError(actor_spans_.at(a.id), "actor " + a.id + " has no initial position");
    }
    try {
      check_model(m_);
    } catch (const Error& e) {
      throw SemanticError(in_.peek().span, e.what());
    }
  }

  TokenStream in_;
  InfraModel m_;
  bool patch_;
  std::map<std::string, SourceSpan> actor_spans_;
};

std::string braces(const auto& names) {
  std::string out = "{";
  bool first = true;
  for (const auto& n : names) {
    out += (first ? "" : ",") + std::string(n);
    first = false;
  }
  return out + "}";
}

bool is_binary(const Condition& c) {
  return c.kind() == Condition::Kind::And || c.kind() == Condition::Kind::Or;
}

std::string emit_condition_at(const Condition& c, bool nested) {
  using K = Condition::Kind;
  switch (c.kind()) {
  case K::True:
    return "true";
  case K::HasCredential:
    return "has(" + c.arg() + ")";
  case K::HasRole:
    return "role(" + c.arg() + ")";
  case K::IsIdentity:
    return "is(" + c.arg() + ")";
  case K::AtLocation:
    return "at(" + c.arg() + ")";
  case K::Not:
    return "not " + emit_condition_at(c.operands()[0], true);
  case K::And:
  case K::Or: {
    std::string op = c.kind() == K::And ? " and " : " or ";
    std::string text = emit_condition_at(c.operands()[0], is_binary(c.operands()[0])) + op +
                       emit_condition_at(c.operands()[1], is_binary(c.operands()[1]));
    return nested ? "(" + text + ")" : text;
  }
  }
  return "true";
}

} // namespace

InfraModel parse_model(std::string_view text) {
  return ModelReader(text, InfraModel{}, false).run();
}

InfraModel apply_patch(const InfraModel& base, std::string_view patch) {
  return ModelReader(patch, base, true).run();
}

std::string emit_condition(const Condition& c) { return emit_condition_at(c, false); }

std::string emit_model(const InfraModel& m) {
  std::ostringstream os;
  os << "format 1\n";
  for (const auto& c : m.credentials)
    os << "credential " << c << '\n';
  for (const auto& l : m.locations) {
    os << "location " << l.id << (l.kind == LocationKind::Physical ? " physical" : " virtual");
    if (!l.data.empty())
      os << " data" << braces(l.data);
    os << '\n';
  }
  for (const auto& [from, to] : m.edges)
    os << "edge " << from << ' ' << to << '\n';
  for (const auto& a : m.actors) {
    os << "actor " << a.id;
    if (!a.credentials.empty())
      os << " creds" << braces(a.credentials);
    if (a.role)
      os << " role{" << *a.role << '}';
    os << '\n';
  }
  for (const auto& a : m.actors)
    if (a.tipped)
      os << "tipped " << a.id << " impersonates" << braces(a.impersonates) << '\n';
  for (const auto& p : m.policies) {
    std::vector<std::string> kinds;
    for (ActionKind k : p.allowed)
      kinds.emplace_back(to_string(k));
    os << "policy " << p.location << ": " << emit_condition(p.condition) << " -> "
       << braces(kinds) << '\n';
  }
  for (const auto& h : m.hooks)
    os << "hook on-move " << h.actor << " refresh " << h.key << " pool" << braces(h.pool) << '\n';
  for (const auto& o : m.observers)
    os << "observe " << o.location << ' ' << o.key << '\n';
  for (const auto& a : m.actors)
    if (auto it = m.init_position.find(a.id); it != m.init_position.end())
      os << "init " << a.id << '@' << it->second << '\n';
  for (const auto& kv : m.init_kv)
    os << "init " << kv.actor << '.' << kv.key << " = " << kv.value << '\n';
  for (const auto& p : m.predicates)
    os << "pred " << p.name << " = " << p.predicate.text() << '\n';
  return os.str();
}

} // namespace rrc::dsl
