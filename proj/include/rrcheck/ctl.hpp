// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rrcheck/state_space.hpp"

namespace rrc::ctl {

enum class Op {
  Atom,
  Literal,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  EX,
  AX,
  EF,
  AF,
  EG,
  AG,
  EU,
  AU,
};

/// A proposition referenced by name, optionally applied to arguments, e.g.
/// `actor-at(alice, office)`.
struct NamedAtom {
  std::string name;
  std::vector<std::string> args;

  /// `name` or `name(a, b)`.
  std::string text() const;
  friend bool operator==(const NamedAtom&, const NamedAtom&) = default;
};

/// Immutable CTL formula. Copies share structure.
class Formula {
public:
  static Formula atom(std::string name, std::vector<std::string> args = {});
  static Formula literal(StateSet states);
  static Formula truth();
  static Formula falsity();
  static Formula unary(Op op, Formula f);
  static Formula binary(Op op, Formula f, Formula g);

  Op op() const;
  /// Operand of a unary operator, left operand of a binary one.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const NamedAtom& named() const;
  const StateSet& literal_set() const;

  bool is_unary() const;
  bool is_binary() const;
  /// Operator nesting depth; atoms and constants have depth 0.
  std::size_t depth() const;

  friend bool operator==(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline Formula lit(StateSet s) { return Formula::literal(std::move(s)); }
inline Formula neg(Formula f) { return Formula::unary(Op::Not, std::move(f)); }
inline Formula conj(Formula f, Formula g) { return Formula::binary(Op::And, std::move(f), std::move(g)); }
inline Formula disj(Formula f, Formula g) { return Formula::binary(Op::Or, std::move(f), std::move(g)); }
inline Formula implies(Formula f, Formula g) { return Formula::binary(Op::Implies, std::move(f), std::move(g)); }
inline Formula ex(Formula f) { return Formula::unary(Op::EX, std::move(f)); }
inline Formula ax(Formula f) { return Formula::unary(Op::AX, std::move(f)); }
inline Formula ef(Formula f) { return Formula::unary(Op::EF, std::move(f)); }
inline Formula af(Formula f) { return Formula::unary(Op::AF, std::move(f)); }
inline Formula eg(Formula f) { return Formula::unary(Op::EG, std::move(f)); }
inline Formula ag(Formula f) { return Formula::unary(Op::AG, std::move(f)); }
inline Formula eu(Formula f, Formula g) { return Formula::binary(Op::EU, std::move(f), std::move(g)); }
inline Formula au(Formula f, Formula g) { return Formula::binary(Op::AU, std::move(f), std::move(g)); }

/// Maps a named atom to the states where it holds. Throws rrc::Error when
/// the name cannot be resolved.
using AtomResolver = std::function<StateSet(const NamedAtom&)>;

/// Resolves atoms against the proposition labels of `ts`.
AtomResolver label_resolver(const TransitionSystem& ts);

struct SatStats {
  /// Largest number of set-changing rounds taken by any single fixpoint.
  std::size_t max_iterations = 0;
};

/// States of `k.reach()` satisfying `f`. Without a resolver, named atoms are
/// looked up in the label map of `k.ts()`.
StateSet sat(const KripkeStructure& k, const Formula& f,
             const AtomResolver& resolver = {}, SatStats* stats = nullptr);

struct CheckResult {
  bool holds = false;
  StateSet sat_set;
  /// Filled for EF-shaped formulas only: one entry per initial state.
  std::map<StateId, std::optional<Path>> witnesses;
};

/// `k |- f`: every initial state satisfies `f`.
CheckResult models(const KripkeStructure& k, const Formula& f,
                   const AtomResolver& resolver = {});

/// Shortest path from each initial state into `target`.
std::map<StateId, std::optional<Path>> ef_witness(const KripkeStructure& k,
                                                  const StateSet& target);

} // namespace rrc::ctl
