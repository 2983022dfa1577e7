// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/dot.hpp"

#include <sstream>

namespace rrc::dsl {

std::string dot_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\')
      out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string emit_dot(const KripkeStructure& k,
                     const std::function<std::string(StateId)>& state_label,
                     const EdgeLabels& edge_labels) {
  std::ostringstream os;
  os << "digraph kripke {\n";
  os << "  node [shape=box];\n";
  for (StateId s : k.reach()) {
    os << "  s" << s.index << " [label=\"" << dot_escape(state_label(s)) << '"';
    if (k.init().contains(s))
      os << ", style=bold";
    os << "];\n";
  }
  for (StateId s : k.reach()) {
    for (StateId t : k.ts().out(s)) {
      os << "  s" << s.index << " -> s" << t.index;
      if (auto it = edge_labels.find({s, t}); it != edge_labels.end()) {
        std::string label;
        for (const auto& l : it->second)
          label += (label.empty() ? "" : "\n") + l;
        os << " [label=\"" << dot_escape(label) << "\"]";
      }
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

namespace {

std::size_t emit_node(std::ostringstream& os, const AttackTree& t, const StateNaming& naming,
                      std::size_t& counter) {
  std::size_t id = counter++;
  const char* kind = t.kind() == NodeKind::Base ? "N" : t.kind() == NodeKind::And ? "AND" : "OR";
  os << "  n" << id << " [label=\"" << kind << ' '
     << dot_escape(emit_signature(t.sig(), naming)) << "\"";
  if (t.kind() == NodeKind::Base)
    os << ", shape=box";
  os << "];\n";
  for (const auto& c : t.children()) {
    std::size_t child = emit_node(os, c, naming, counter);
    os << "  n" << id << " -> n" << child << ";\n";
  }
  return id;
}

} // namespace

std::string emit_dot(const AttackTree& tree, const StateNaming& naming) {
  std::ostringstream os;
  os << "digraph attack_tree {\n";
  std::size_t counter = 0;
  emit_node(os, tree, naming, counter);
  os << "}\n";
  return os.str();
}

} // namespace rrc::dsl
