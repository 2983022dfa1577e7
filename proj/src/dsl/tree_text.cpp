// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/tree_text.hpp"

namespace rrc::dsl {

StateNaming StateNaming::from_keys(const TransitionSystem& ts) {
  StateNaming n;
  for (StateId id : ts.states()) {
    n.names_.emplace(ts.key(id), StateSet{id});
    n.display_.push_back(ts.key(id));
  }
  return n;
}

StateNaming StateNaming::for_model(const infra::InfraModel& m, const infra::Exploration& x) {
  StateNaming n;
  const auto& ts = x.kripke.ts();
  for (StateId id : ts.states()) {
    n.names_.emplace(ts.key(id), StateSet{id});
    n.display_.push_back(ts.key(id));
  }
  std::vector<bool> aliased(ts.size(), false);
  for (const auto& p : m.predicates) {
    StateSet s = infra::predicate_states(m, x.table, p.predicate);
    if (s.size() == 1 && !aliased[s.begin()->index]) {
      aliased[s.begin()->index] = true;
      n.display_[s.begin()->index] = p.name;
    }
    n.names_.insert_or_assign(p.name, std::move(s));
  }
  return n;
}

StateSet StateNaming::resolve(const std::string& name, const SourceSpan& where) const {
  auto it = names_.find(name);
  if (it == names_.end())
    throw SemanticError(where, "unknown state " + quote_name(name));
  return it->second;
}

const std::string& StateNaming::display(StateId id) const {
  if (id.index >= display_.size())
    throw Error("state #" + std::to_string(id.index) + " has no name");
  return display_[id.index];
}

std::string emit_state_set(const StateSet& s, const StateNaming& naming) {
  std::string out = "{";
  bool first = true;
  for (StateId id : s) {
    out += (first ? "" : ",") + quote_name(naming.display(id));
    first = false;
  }
  return out + "}";
}

StateSet read_state_set(TokenStream& in, const StateNaming& naming) {
  in.expect_punct("{");
  StateSet out;
  if (!in.is_punct("}")) {
    do {
      Token t = in.expect_name("a state name");
      out = set_union(out, naming.resolve(t.text, t.span));
    } while (in.accept_punct(","));
  }
  in.expect_punct("}");
  return out;
}

AttackSignature read_signature(TokenStream& in, const StateNaming& naming) {
  in.expect_punct("(");
  StateSet pre = read_state_set(in, naming);
  in.expect_punct(",");
  StateSet post = read_state_set(in, naming);
  in.expect_punct(")");
  return {std::move(pre), std::move(post)};
}

std::string emit_signature(const AttackSignature& sig, const StateNaming& naming) {
  return "(" + emit_state_set(sig.pre, naming) + "," + emit_state_set(sig.post, naming) + ")";
}

namespace {

AttackTree read_tree(TokenStream& in, const StateNaming& naming) {
  if (in.accept_keyword("N"))
    return AttackTree::base(read_signature(in, naming));
  if (!in.is_punct("["))
    in.fail("attack tree");
  in.next();
  std::vector<AttackTree> children;
  if (!in.is_punct("]")) {
    do
      children.push_back(read_tree(in, naming));
    while (in.accept_punct(","));
  }
  in.expect_punct("]");
  if (in.accept_keyword("AND"))
    return AttackTree::and_of(std::move(children), read_signature(in, naming));
  if (in.accept_keyword("OR"))
    return AttackTree::or_of(std::move(children), read_signature(in, naming));
  in.fail("'AND' or 'OR'");
}

} // namespace

AttackTree parse_tree(std::string_view text, const StateNaming& naming) {
  TokenStream in(lex(text), true);
  if (in.accept_keyword("format")) {
    if (in.peek().text != "1")
      in.fail("format version 1");
    in.next();
  }
  AttackTree t = read_tree(in, naming);
  if (!in.at_end())
    in.fail("end of tree");
  return t;
}

std::string emit_tree(const AttackTree& tree, const StateNaming& naming) {
  if (tree.kind() == NodeKind::Base)
    return "N" + emit_signature(tree.sig(), naming);
  std::string out = "[";
  for (std::size_t i = 0; i < tree.children().size(); ++i)
    out += (i ? ", " : "") + emit_tree(tree.children()[i], naming);
  out += tree.kind() == NodeKind::And ? "] AND " : "] OR ";
  return out + emit_signature(tree.sig(), naming);
}

} // namespace rrc::dsl
