// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/attack_tree.hpp"

#include <sstream>

namespace rrc {

AttackTree AttackTree::base(AttackSignature sig) {
  return AttackTree(NodeKind::Base, {}, std::move(sig));
}

AttackTree AttackTree::and_of(std::vector<AttackTree> children, AttackSignature sig) {
  return AttackTree(NodeKind::And, std::move(children), std::move(sig));
}

AttackTree AttackTree::or_of(std::vector<AttackTree> children, AttackSignature sig) {
  return AttackTree(NodeKind::Or, std::move(children), std::move(sig));
}

std::size_t AttackTree::leaf_count() const {
  if (kind_ == NodeKind::Base)
    return 1;
  std::size_t n = 0;
  for (const auto& c : children_)
    n += c.leaf_count();
  return n;
}

const AttackSignature& attack_sig(const AttackTree& tree) { return tree.sig(); }

std::string describe(const AttackSignature& sig) {
  std::ostringstream os;
  auto put = [&os](const StateSet& s) {
    os << '{';
    bool first = true;
    for (StateId id : s) {
      os << (first ? "" : ",") << '#' << id.index;
      first = false;
    }
    os << '}';
  };
  os << '(';
  put(sig.pre);
  os << ',';
  put(sig.post);
  os << ')';
  return os.str();
}

namespace {

bool valid_node(const TransitionSystem& ts, const AttackTree& t) {
  const auto& [pre, post] = t.sig();
  const auto& cs = t.children();
  switch (t.kind()) {
  case NodeKind::Base:
    for (StateId i : pre) {
      auto succ = ts.out(i);
      StateSet image(std::vector<StateId>(succ.begin(), succ.end()));
      if (!image.intersects(post))
        return false;
    }
    return true;
  case NodeKind::And:
    if (cs.empty())
      return pre.is_subset_of(post);
    if (!pre.is_subset_of(cs.front().sig().pre))
      return false;
    for (std::size_t k = 0; k + 1 < cs.size(); ++k)
      if (!cs[k].sig().post.is_subset_of(cs[k + 1].sig().pre))
        return false;
    if (!cs.back().sig().post.is_subset_of(post))
      return false;
    break;
  case NodeKind::Or: {
    if (cs.empty())
      return pre.is_subset_of(post);
    StateSet covered;
    for (const auto& c : cs) {
      covered = set_union(covered, c.sig().pre);
      if (!c.sig().post.is_subset_of(post))
        return false;
    }
    if (!pre.is_subset_of(covered))
      return false;
    break;
  }
  }
  for (const auto& c : cs)
    if (!valid_node(ts, c))
      return false;
  return true;
}

void require_in_system(const TransitionSystem& ts, const AttackTree& t) {
  for (const auto* s : {&t.sig().pre, &t.sig().post})
    for (StateId id : *s)
      if (!ts.contains(id))
        throw Error("attack signature " + describe(t.sig()) +
                    " mentions a state outside the system");
  for (const auto& c : t.children())
    require_in_system(ts, c);
}

} // namespace

bool is_valid(const TransitionSystem& ts, const AttackTree& tree) {
  require_in_system(ts, tree);
  return valid_node(ts, tree);
}

std::vector<AttackPath> attack_paths(const AttackTree& tree) {
  switch (tree.kind()) {
  case NodeKind::Base:
    return {AttackPath{tree.sig()}};
  case NodeKind::Or: {
    std::vector<AttackPath> out;
    for (const auto& c : tree.children()) {
      auto sub = attack_paths(c);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  case NodeKind::And: {
    std::vector<AttackPath> out{AttackPath{}};
    for (const auto& c : tree.children()) {
      auto sub = attack_paths(c);
      std::vector<AttackPath> next;
      next.reserve(out.size() * sub.size());
      for (const auto& prefix : out) {
        for (const auto& suffix : sub) {
          AttackPath p = prefix;
          p.insert(p.end(), suffix.begin(), suffix.end());
          next.push_back(std::move(p));
        }
      }
      out = std::move(next);
    }
    return out;
  }
  }
  return {};
}

ctl::Formula to_ctl(const AttackTree& tree) {
  return ctl::ef(ctl::lit(tree.sig().post));
}

std::optional<AttackTree> synthesize(const KripkeStructure& k, const StateSet& target) {
  k.ts().require(target);
  auto witnesses = ctl::ef_witness(k, target);
  std::vector<AttackTree> branches;
  StateSet reached;
  for (const auto& [init, path] : witnesses) {
    if (!path)
      return std::nullopt;
    StateSet end{path->back()};
    std::vector<AttackTree> steps;
    for (std::size_t i = 0; i + 1 < path->size(); ++i)
      steps.push_back(AttackTree::base({StateSet{(*path)[i]}, StateSet{(*path)[i + 1]}}));
    branches.push_back(AttackTree::and_of(std::move(steps), {StateSet{init}, end}));
    reached = set_union(reached, end);
  }
  return AttackTree::or_of(std::move(branches), {k.init(), reached});
}

const AttackTree& subtree_at(const AttackTree& tree, const TreePosition& pos) {
  const AttackTree* node = &tree;
  for (std::size_t i : pos) {
    if (i >= node->children().size())
      throw Error("tree position out of range");
    node = &node->children()[i];
  }
  return *node;
}

namespace {

AttackTree replace_at(const AttackTree& node, const TreePosition& pos, std::size_t depth,
                      const AttackTree& replacement) {
  if (depth == pos.size())
    return replacement;
  std::vector<AttackTree> children = node.children();
  children[pos[depth]] = replace_at(children[pos[depth]], pos, depth + 1, replacement);
  return node.kind() == NodeKind::And
             ? AttackTree::and_of(std::move(children), node.sig())
             : AttackTree::or_of(std::move(children), node.sig());
}

} // namespace

AttackTree refine(const AttackTree& tree, const TreePosition& pos,
                  const AttackTree& replacement) {
  const AttackTree& target = subtree_at(tree, pos);
  if (target.sig() != replacement.sig())
    throw Error("refinement signature mismatch: node has " + describe(target.sig()) +
                ", replacement has " + describe(replacement.sig()));
  return replace_at(tree, pos, 0, replacement);
}

bool check_refinement(const AttackTree& abstract, const AttackTree& refined) {
  if (abstract.sig() != refined.sig())
    return false;
  if (abstract.kind() == NodeKind::Base)
    return true;
  if (abstract.kind() != refined.kind() ||
      abstract.children().size() != refined.children().size())
    return false;
  for (std::size_t i = 0; i < abstract.children().size(); ++i)
    if (!check_refinement(abstract.children()[i], refined.children()[i]))
      return false;
  return true;
}

} // namespace rrc
