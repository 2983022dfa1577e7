// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/state_space.hpp"

#include <algorithm>
#include <deque>
#include <iterator>

namespace rrc {

StateSet::StateSet(std::initializer_list<StateId> ids)
    : StateSet(std::vector<StateId>(ids)) {}

StateSet::StateSet(std::vector<StateId> ids) : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool StateSet::contains(StateId id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

void StateSet::insert(StateId id) {
  auto it = std::lower_bound(members_.begin(), members_.end(), id);
  if (it == members_.end() || *it != id)
    members_.insert(it, id);
}

bool StateSet::is_subset_of(const StateSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

bool StateSet::intersects(const StateSet& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a < *b)
      ++a;
    else if (*b < *a)
      ++b;
    else
      return true;
  }
  return false;
}

StateSet set_union(const StateSet& a, const StateSet& b) {
  std::vector<StateId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return StateSet(std::move(out));
}

StateSet set_intersection(const StateSet& a, const StateSet& b) {
  std::vector<StateId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return StateSet(std::move(out));
}

StateSet set_difference(const StateSet& a, const StateSet& b) {
  std::vector<StateId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return StateSet(std::move(out));
}

// TransitionSystem

TransitionSystem TransitionSystem::build(
    std::span<const std::string> keys,
    std::span<const std::pair<std::string, std::string>> edges) {
  std::map<std::string, StateId, std::less<>> seen;
  for (const auto& k : keys) {
    StateId id{static_cast<std::uint32_t>(seen.size())};
    if (!seen.emplace(k, id).second)
      throw Error("duplicate state key " + k);
  }
  auto lookup = [&](const std::string& k) {
    auto it = seen.find(k);
    if (it == seen.end())
      throw Error("dangling endpoint " + k);
    return it->second;
  };
  std::vector<std::pair<StateId, StateId>> ids;
  ids.reserve(edges.size());
  for (const auto& [from, to] : edges)
    ids.emplace_back(lookup(from), lookup(to));
  return TransitionSystem({keys.begin(), keys.end()}, ids);
}

TransitionSystem::TransitionSystem(
    std::vector<std::string> keys,
    std::span<const std::pair<StateId, StateId>> edges)
    : keys_(std::move(keys)), succ_(keys_.size()), pred_(keys_.size()),
      labels_(keys_.size()) {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    StateId id{static_cast<std::uint32_t>(i)};
    if (!index_.emplace(keys_[i], id).second)
      throw Error("duplicate state key " + keys_[i]);
  }
  for (const auto& [from, to] : edges) {
    if (!contains(from) || !contains(to))
      throw Error("edge endpoint outside the system");
    succ_[from.index].push_back(to);
    pred_[to.index].push_back(from);
  }
  for (auto* adj : {&succ_, &pred_}) {
    for (auto& list : *adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
  for (const auto& list : succ_)
    edge_count_ += list.size();
}

StateSet TransitionSystem::states() const {
  std::vector<StateId> ids(keys_.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    ids[i] = StateId{static_cast<std::uint32_t>(i)};
  return StateSet(std::move(ids));
}

const std::string& TransitionSystem::key(StateId id) const {
  require(id);
  return keys_[id.index];
}

std::optional<StateId> TransitionSystem::find(std::string_view key) const {
  auto it = index_.find(key);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::span<const StateId> TransitionSystem::out(StateId id) const {
  require(id);
  return succ_[id.index];
}

std::span<const StateId> TransitionSystem::in(StateId id) const {
  require(id);
  return pred_[id.index];
}

bool TransitionSystem::has_edge(StateId from, StateId to) const {
  auto succ = out(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::vector<std::pair<StateId, StateId>> TransitionSystem::edges() const {
  std::vector<std::pair<StateId, StateId>> result;
  result.reserve(edge_count_);
  for (std::size_t i = 0; i < succ_.size(); ++i)
    for (StateId to : succ_[i])
      result.emplace_back(StateId{static_cast<std::uint32_t>(i)}, to);
  return result;
}

void TransitionSystem::add_label(StateId id, const std::string& name) {
  require(id);
  labels_[id.index].insert(name);
  label_names_.insert(name);
}

void TransitionSystem::declare_label(const std::string& name) {
  label_names_.insert(name);
}

bool TransitionSystem::has_label_name(const std::string& name) const {
  return label_names_.contains(name);
}

const std::set<std::string>& TransitionSystem::labels(StateId id) const {
  require(id);
  return labels_[id.index];
}

StateSet TransitionSystem::states_labelled(const std::string& name) const {
  std::vector<StateId> ids;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i].contains(name))
      ids.push_back(StateId{static_cast<std::uint32_t>(i)});
  return StateSet(std::move(ids));
}

void TransitionSystem::require(StateId id) const {
  if (!contains(id))
    throw Error("unknown state #" + std::to_string(id.index));
}

void TransitionSystem::require(const StateSet& set) const {
  for (StateId id : set)
    require(id);
}

// Free operations

StateSet successors(const TransitionSystem& ts, StateId x) {
  auto succ = ts.out(x);
  return StateSet(std::vector<StateId>(succ.begin(), succ.end()));
}

StateSet predecessors(const TransitionSystem& ts, const StateSet& xs) {
  std::vector<StateId> out;
  for (StateId x : xs) {
    auto pred = ts.in(x);
    out.insert(out.end(), pred.begin(), pred.end());
  }
  return StateSet(std::move(out));
}

StateSet reachable(const TransitionSystem& ts, const StateSet& init) {
  ts.require(init);
  std::vector<bool> seen(ts.size(), false);
  std::vector<StateId> stack(init.begin(), init.end());
  for (StateId i : init)
    seen[i.index] = true;
  while (!stack.empty()) {
    StateId x = stack.back();
    stack.pop_back();
    for (StateId y : ts.out(x)) {
      if (!seen[y.index]) {
        seen[y.index] = true;
        stack.push_back(y);
      }
    }
  }
  std::vector<StateId> result;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i])
      result.push_back(StateId{static_cast<std::uint32_t>(i)});
  return StateSet(std::move(result));
}

KripkeStructure make_kripke(TransitionSystem ts, StateSet init) {
  StateSet reach = reachable(ts, init);
  return KripkeStructure(std::move(ts), std::move(init), std::move(reach));
}

std::optional<Path> shortest_path(const TransitionSystem& ts, StateId from,
                                  const StateSet& target) {
  ts.require(from);
  ts.require(target);
  if (target.contains(from))
    return Path{from};

  constexpr std::uint32_t unseen = UINT32_MAX;
  std::vector<std::uint32_t> parent(ts.size(), unseen);
  parent[from.index] = from.index;
  std::deque<StateId> frontier{from};
  while (!frontier.empty()) {
    StateId x = frontier.front();
    frontier.pop_front();
    for (StateId y : ts.out(x)) {
      if (parent[y.index] != unseen)
        continue;
      parent[y.index] = x.index;
      if (target.contains(y)) {
        Path path{y};
        while (path.back() != from)
          path.push_back(StateId{parent[path.back().index]});
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(y);
    }
  }
  return std::nullopt;
}

} // namespace rrc
