// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rrcheck/ctl.hpp"
#include "rrcheck/state_space.hpp"

namespace rrc {

/// The (pre, post) pair of an attack: from every state of `pre` the attack
/// reaches `post`.
struct AttackSignature {
  StateSet pre;
  StateSet post;

  friend bool operator==(const AttackSignature&, const AttackSignature&) = default;
  friend auto operator<=>(const AttackSignature&, const AttackSignature&) = default;
};

enum class NodeKind { Base, And, Or };

/// Recursive and/or attack tree. Every node carries a signature; only the
/// And and Or kinds have children (possibly none).
class AttackTree {
public:
  static AttackTree base(AttackSignature sig);
  static AttackTree and_of(std::vector<AttackTree> children, AttackSignature sig);
  static AttackTree or_of(std::vector<AttackTree> children, AttackSignature sig);

  NodeKind kind() const { return kind_; }
  const AttackSignature& sig() const { return sig_; }
  const std::vector<AttackTree>& children() const { return children_; }

  std::size_t leaf_count() const;

  friend bool operator==(const AttackTree&, const AttackTree&) = default;

private:
  AttackTree(NodeKind kind, std::vector<AttackTree> children, AttackSignature sig)
      : kind_(kind), children_(std::move(children)), sig_(std::move(sig)) {}

  NodeKind kind_;
  std::vector<AttackTree> children_;
  AttackSignature sig_;
};

/// Linear attack scenario: a sequence of base steps. The empty sequence is
/// the zero-step attack contributed by an empty and-tree.
using AttackPath = std::vector<AttackSignature>;

/// Index path from the root; `{}` is the root, `{1, 0}` the first child of
/// the second child.
using TreePosition = std::vector<std::size_t>;

const AttackSignature& attack_sig(const AttackTree& tree);

/// The validity judgment `|- tree` over `ts`:
///   Base (I,s):      every i in I has an edge into s.
///   And [] (I,s):    I is a subset of s.
///   And cs (I,s):    children valid, I <= pre(c1), post(ci) <= pre(ci+1),
///                    post(cn) <= s.
///   Or [] (I,s):     I is a subset of s.
///   Or cs (I,s):     children valid, I <= union of pre(ci), post(ci) <= s.
/// Throws when a signature mentions a state outside `ts`.
bool is_valid(const TransitionSystem& ts, const AttackTree& tree);

/// Flattens the tree into its scenarios, left to right. And-nodes take the
/// ordered product of their children's scenarios, or-nodes concatenate the
/// children's lists.
std::vector<AttackPath> attack_paths(const AttackTree& tree);

/// EF of the attack's post-set.
ctl::Formula to_ctl(const AttackTree& tree);

/// Builds a valid tree witnessing `k |- EF target`, or nullopt when EF fails.
/// One or-branch per initial state, each an and-chain of single-edge base
/// steps along the shortest witness path.
std::optional<AttackTree> synthesize(const KripkeStructure& k, const StateSet& target);

const AttackTree& subtree_at(const AttackTree& tree, const TreePosition& pos);

/// Replaces the node at `pos`. The replacement must carry the same signature.
AttackTree refine(const AttackTree& tree, const TreePosition& pos,
                  const AttackTree& replacement);

/// True iff `refined` extends `abstract` structurally: equal signatures at
/// every node of `abstract`, identical shape at its and/or nodes, and any
/// subtree where `abstract` has a base leaf.
bool check_refinement(const AttackTree& abstract, const AttackTree& refined);

std::string describe(const AttackSignature& sig);

} // namespace rrc
