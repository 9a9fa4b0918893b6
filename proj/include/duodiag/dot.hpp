#pragma once

// Graphviz and plain-text renderings of string diagrams. In DOT output the
// generator nodes are boxes and the boundaries rank-pinned points; without
// order edges each wire is a single labelled edge, with them each wire gets
// its own small node so the dashed covering relations of the derived poset
// have something to attach to.

#include <string>
#include <vector>

#include "diagram.hpp"

namespace duodiag {

namespace detail {

inline std::string dot_producer(const wiring& wr, const StringDiagram& d,
                                int w) {
  if (wr.producer[w] >= 0) return "n" + std::to_string(wr.producer[w]);
  for (std::size_t i = 0; i < d.input_wires.size(); ++i)
    if (d.input_wires[i] == w) return "in" + std::to_string(i);
  return "in?";
}

inline std::string dot_consumer(const wiring& wr, const StringDiagram& d,
                                int w) {
  if (wr.consumer[w] >= 0) return "n" + std::to_string(wr.consumer[w]);
  for (std::size_t i = 0; i < d.output_wires.size(); ++i)
    if (d.output_wires[i] == w) return "out" + std::to_string(i);
  return "out?";
}

}  // namespace detail

inline std::string to_dot(const StringDiagram& d, bool order_edges = false) {
  auto wr = detail::check_wiring(d);
  std::string s = "digraph diagram {\n  rankdir=TB;\n";
  s += "  { rank=source;";
  for (std::size_t i = 0; i < d.input_wires.size(); ++i)
    s += " in" + std::to_string(i) + " [shape=point];";
  s += " }\n  { rank=sink;";
  for (std::size_t i = 0; i < d.output_wires.size(); ++i)
    s += " out" + std::to_string(i) + " [shape=point];";
  s += " }\n";
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    s += "  n" + std::to_string(k) + " [shape=box label=\"" + d.nodes[k].gen +
         "\"];\n";
  if (!order_edges) {
    for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
      s += "  " + detail::dot_producer(wr, d, int(w)) + " -> " +
           detail::dot_consumer(wr, d, int(w)) + " [label=\"" +
           d.wire_labels[w] + "\"];\n";
  } else {
    for (std::size_t w = 0; w < d.wire_labels.size(); ++w) {
      std::string wn = "w" + std::to_string(w);
      s += "  " + wn + " [shape=circle label=\"" + d.wire_labels[w] +
           "\" fontsize=10 width=0.3];\n";
      s += "  " + detail::dot_producer(wr, d, int(w)) + " -> " + wn + ";\n";
      s += "  " + wn + " -> " + detail::dot_consumer(wr, d, int(w)) + ";\n";
    }
    for (auto [a, b] : covering_pairs(derived_poset(d)))
      s += "  w" + std::to_string(a) + " -> w" + std::to_string(b) +
           " [style=dashed constraint=false color=gray];\n";
  }
  s += "}\n";
  return s;
}

// Line-oriented text rendering: boundaries, wires, nodes, and the covering
// pairs of the derived wire order. Deterministic.
inline std::string to_ascii(const StringDiagram& d) {
  std::string s;
  s += "source: " + print(d.source_expr) + "\n";
  s += "target: " + print(d.target_expr) + "\n";
  auto ids = [](const std::vector<int>& v) {
    std::string r;
    for (std::size_t i = 0; i < v.size(); ++i)
      r += (i ? " " : "") + std::to_string(v[i]);
    return r;
  };
  s += "inputs: " + ids(d.input_wires) + "\n";
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    s += "node " + std::to_string(k) + ": " + d.nodes[k].gen + " [" +
         ids(d.nodes[k].inputs) + "] -> [" + ids(d.nodes[k].outputs) + "]\n";
  s += "outputs: " + ids(d.output_wires) + "\n";
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    s += "wire " + std::to_string(w) + ": " + d.wire_labels[w] + "\n";
  std::string ord;
  for (auto [a, b] : covering_pairs(derived_poset(d)))
    ord += (ord.empty() ? "" : " ") + std::to_string(a) + "<=" +
           std::to_string(b);
  s += "order: " + ord + "\n";
  return s;
}

}  // namespace duodiag
