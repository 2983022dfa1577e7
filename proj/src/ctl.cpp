// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/ctl.hpp"

#include <algorithm>

namespace rrc::ctl {

std::string NamedAtom::text() const {
  if (args.empty())
    return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0)
      out += ", ";
    out += args[i];
  }
  return out + ")";
}

struct Formula::Node {
  Op op;
  NamedAtom named;
  StateSet literal;
  std::vector<Formula> operands;
};

Formula Formula::atom(std::string name, std::vector<std::string> args) {
  return Formula(std::make_shared<const Node>(
      Node{Op::Atom, NamedAtom{std::move(name), std::move(args)}, {}, {}}));
}

Formula Formula::literal(StateSet states) {
  return Formula(std::make_shared<const Node>(Node{Op::Literal, {}, std::move(states), {}}));
}

Formula Formula::truth() { return Formula(std::make_shared<const Node>(Node{Op::True, {}, {}, {}})); }

Formula Formula::falsity() { return Formula(std::make_shared<const Node>(Node{Op::False, {}, {}, {}})); }

Formula Formula::unary(Op op, Formula f) {
  Formula out(std::make_shared<const Node>(Node{op, {}, {}, {std::move(f)}}));
  if (!out.is_unary())
    throw Error("not a unary CTL operator");
  return out;
}

Formula Formula::binary(Op op, Formula f, Formula g) {
  Formula out(std::make_shared<const Node>(Node{op, {}, {}, {std::move(f), std::move(g)}}));
  if (!out.is_binary())
    throw Error("not a binary CTL operator");
  return out;
}

Op Formula::op() const { return node_->op; }

const Formula& Formula::lhs() const {
  if (node_->operands.empty())
    throw Error("formula has no operands");
  return node_->operands[0];
}

const Formula& Formula::rhs() const {
  if (node_->operands.size() < 2)
    throw Error("formula has no right operand");
  return node_->operands[1];
}

const NamedAtom& Formula::named() const {
  if (op() != Op::Atom)
    throw Error("formula is not a named atom");
  return node_->named;
}

const StateSet& Formula::literal_set() const {
  if (op() != Op::Literal)
    throw Error("formula is not a literal state set");
  return node_->literal;
}

bool Formula::is_unary() const {
  switch (op()) {
  case Op::Not:
  case Op::EX:
  case Op::AX:
  case Op::EF:
  case Op::AF:
  case Op::EG:
  case Op::AG:
    return true;
  default:
    return false;
  }
}

bool Formula::is_binary() const {
  switch (op()) {
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::EU:
  case Op::AU:
    return true;
  default:
    return false;
  }
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& f : node_->operands)
    d = std::max(d, f.depth());
  return node_->operands.empty() ? 0 : d + 1;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_)
    return true;
  return a.node_->op == b.node_->op && a.node_->named == b.node_->named &&
         a.node_->literal == b.node_->literal &&
         a.node_->operands == b.node_->operands;
}

AtomResolver label_resolver(const TransitionSystem& ts) {
  return [&ts](const NamedAtom& atom) {
    std::string name = atom.text();
    if (!ts.has_label_name(name))
      throw Error("unresolvable atom " + name);
    return ts.states_labelled(name);
  };
}

namespace {

// Dense membership mask over the states of one system; evaluation works on
// masks and converts to StateSet only at the boundary.
using Mask = std::vector<char>;

class Evaluator {
public:
  Evaluator(const KripkeStructure& k, const AtomResolver& resolver, SatStats* stats)
      : ts_(k.ts()), resolver_(resolver), stats_(stats),
        reach_(to_mask(k.reach())) {}

  Mask eval(const Formula& f) {
    switch (f.op()) {
    case Op::Atom: {
      StateSet s = resolver_ ? resolver_(f.named()) : label_resolver(ts_)(f.named());
      ts_.require(s);
      return meet(to_mask(s), reach_);
    }
    case Op::Literal:
      ts_.require(f.literal_set());
      return meet(to_mask(f.literal_set()), reach_);
    case Op::True:
      return reach_;
    case Op::False:
      return Mask(ts_.size(), 0);
    case Op::Not:
      return complement(eval(f.lhs()));
    case Op::And:
      return meet(eval(f.lhs()), eval(f.rhs()));
    case Op::Or:
      return join(eval(f.lhs()), eval(f.rhs()));
    case Op::Implies:
      return join(complement(eval(f.lhs())), eval(f.rhs()));
    case Op::EX:
      return pre_exists(eval(f.lhs()));
    case Op::AX:
      return pre_forall(eval(f.lhs()));
    case Op::EF:
      return until_exists(reach_, eval(f.lhs()));
    case Op::EU:
      return until_exists(eval(f.lhs()), eval(f.rhs()));
    case Op::AF:
      return until_forall(reach_, eval(f.lhs()));
    case Op::AU:
      return until_forall(eval(f.lhs()), eval(f.rhs()));
    case Op::EG:
      return globally_exists(eval(f.lhs()));
    case Op::AG:
      return globally_forall(eval(f.lhs()));
    }
    throw Error("unhandled CTL operator");
  }

  StateSet to_set(const Mask& m) const {
    std::vector<StateId> ids;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i])
        ids.push_back(StateId{static_cast<std::uint32_t>(i)});
    return StateSet(std::move(ids));
  }

private:
  Mask to_mask(const StateSet& s) const {
    Mask m(ts_.size(), 0);
    for (StateId id : s)
      m[id.index] = 1;
    return m;
  }

  static Mask meet(Mask a, const Mask& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      a[i] = a[i] && b[i];
    return a;
  }

  static Mask join(Mask a, const Mask& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      a[i] = a[i] || b[i];
    return a;
  }

  Mask complement(Mask a) const {
    for (std::size_t i = 0; i < a.size(); ++i)
      a[i] = reach_[i] && !a[i];
    return a;
  }

  // Reachable states with some successor in `x`.
  Mask pre_exists(const Mask& x) const {
    Mask out(ts_.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i])
        continue;
      for (StateId p : ts_.in(StateId{static_cast<std::uint32_t>(i)}))
        if (reach_[p.index])
          out[p.index] = 1;
    }
    return out;
  }

  // Reachable states all of whose successors are in `x` (deadlocks included).
  Mask pre_forall(const Mask& x) const {
    Mask out(ts_.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!reach_[i])
        continue;
      auto succ = ts_.out(StateId{static_cast<std::uint32_t>(i)});
      out[i] = std::all_of(succ.begin(), succ.end(),
                           [&](StateId s) { return x[s.index] != 0; });
    }
    return out;
  }

  void record(std::size_t rounds) {
    if (stats_)
      stats_->max_iterations = std::max(stats_->max_iterations, rounds);
  }

  template <typename Step>
  Mask fixpoint(Mask x, Step step) {
    std::size_t rounds = 0;
    for (;;) {
      Mask next = step(x);
      if (next == x)
        break;
      x = std::move(next);
      ++rounds;
    }
    record(rounds);
    return x;
  }

  // lfp X. g | (f & EX X)
  Mask until_exists(const Mask& f, const Mask& g) {
    return fixpoint(g, [&](const Mask& x) { return join(g, meet(f, pre_exists(x))); });
  }

  // lfp X. g | (f & AX X)
  Mask until_forall(const Mask& f, const Mask& g) {
    return fixpoint(g, [&](const Mask& x) { return join(g, meet(f, pre_forall(x))); });
  }

  // gfp X. f & EX X
  Mask globally_exists(const Mask& f) {
    return fixpoint(f, [&](const Mask& x) { return meet(f, pre_exists(x)); });
  }

  // gfp X. f & AX X
  Mask globally_forall(const Mask& f) {
    return fixpoint(f, [&](const Mask& x) { return meet(f, pre_forall(x)); });
  }

  const TransitionSystem& ts_;
  const AtomResolver& resolver_;
  SatStats* stats_;
  Mask reach_;
};

} // namespace

StateSet sat(const KripkeStructure& k, const Formula& f,
             const AtomResolver& resolver, SatStats* stats) {
  Evaluator ev(k, resolver, stats);
  return ev.to_set(ev.eval(f));
}

CheckResult models(const KripkeStructure& k, const Formula& f,
                   const AtomResolver& resolver) {
  CheckResult result;
  result.sat_set = sat(k, f, resolver);
  result.holds = k.init().is_subset_of(result.sat_set);
  if (f.op() == Op::EF)
    result.witnesses = ef_witness(k, sat(k, f.lhs(), resolver));
  return result;
}

std::map<StateId, std::optional<Path>> ef_witness(const KripkeStructure& k,
                                                  const StateSet& target) {
  k.ts().require(target);
  std::map<StateId, std::optional<Path>> out;
  for (StateId i : k.init())
    out.emplace(i, shortest_path(k.ts(), i, target));
  return out;
}

} // namespace rrc::ctl
