#pragma once

// JSON forms used by the CLI. Posets: {"labels": ["A","B"], "leq": [[1,2]]}
// with 1-based non-reflexive pairs; the writer emits the covering pairs and
// the loader closes the relation. Diagrams: wires, nodes with port lists,
// boundary wire ids, and the printed boundary expressions.

#include <string>
#include <vector>

#include "json.hpp"

#include "diagram.hpp"

namespace duodiag {

inline nlohmann::json poset_to_json(const TypedPoset& p) {
  auto pairs = nlohmann::json::array();
  for (auto [a, b] : covering_pairs(p)) pairs.push_back({a + 1, b + 1});
  return {{"labels", p.labels}, {"leq", pairs}};
}

inline TypedPoset poset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("leq"))
    throw error("poset json: expected an object with labels and leq");
  auto labels = j.at("labels").get<std::vector<std::string>>();
  const int n = int(labels.size());
  std::vector<std::pair<int, int>> edges;
  for (const auto& pr : j.at("leq")) {
    if (!pr.is_array() || pr.size() != 2)
      throw error("poset json: leq entries must be [i, j] pairs");
    int a = pr[0].get<int>(), b = pr[1].get<int>();
    if (a < 1 || a > n || b < 1 || b > n)
      throw error("poset json: leq index out of range");
    edges.emplace_back(a - 1, b - 1);
  }
  return from_generators(std::move(labels), edges);
}

inline nlohmann::json diagram_to_json(const StringDiagram& d) {
  nlohmann::json j;
  j["source"] = print(d.source_expr);
  j["target"] = print(d.target_expr);
  auto wires = nlohmann::json::array();
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    wires.push_back({{"id", w}, {"label", d.wire_labels[w]}});
  j["wires"] = wires;
  auto nodes = nlohmann::json::array();
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    nodes.push_back({{"id", k},
                     {"label", d.nodes[k].gen},
                     {"inputs", d.nodes[k].inputs},
                     {"outputs", d.nodes[k].outputs}});
  j["nodes"] = nodes;
  j["inputs"] = d.input_wires;
  j["outputs"] = d.output_wires;
  return j;
}

// Rebuilds a diagram over the given signature and validates it.
inline StringDiagram diagram_from_json(std::shared_ptr<const Signature> sig,
                                       const nlohmann::json& j) {
  for (const char* key : {"source", "target", "wires", "nodes", "inputs",
                          "outputs"})
    if (!j.is_object() || !j.contains(key))
      throw error(std::string("diagram json: missing field '") + key + "'");
  StringDiagram d;
  d.sig = std::move(sig);
  d.source_expr = parse(j.at("source").get<std::string>());
  d.target_expr = parse(j.at("target").get<std::string>());
  d.wire_labels.resize(j.at("wires").size());
  std::vector<char> seen(d.wire_labels.size(), 0);
  for (const auto& w : j.at("wires")) {
    int id = w.at("id").get<int>();
    if (id < 0 || id >= int(seen.size()) || seen[id])
      throw error("diagram json: wire ids must be 0..n-1, each once");
    seen[id] = 1;
    d.wire_labels[id] = w.at("label").get<std::string>();
  }
  d.nodes.resize(j.at("nodes").size());
  std::vector<char> nseen(d.nodes.size(), 0);
  for (const auto& nd : j.at("nodes")) {
    int id = nd.at("id").get<int>();
    if (id < 0 || id >= int(nseen.size()) || nseen[id])
      throw error("diagram json: node ids must be 0..n-1, each once");
    nseen[id] = 1;
    d.nodes[id].gen = nd.at("label").get<std::string>();
    d.nodes[id].inputs = nd.at("inputs").get<std::vector<int>>();
    d.nodes[id].outputs = nd.at("outputs").get<std::vector<int>>();
  }
  d.input_wires = j.at("inputs").get<std::vector<int>>();
  d.output_wires = j.at("outputs").get<std::vector<int>>();
  validate(d);
  return d;
}

}  // namespace duodiag
