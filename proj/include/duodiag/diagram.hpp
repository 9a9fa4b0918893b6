#pragma once

// Physical string diagrams: wire-linear acyclic hypergraphs whose nodes carry
// signature generators and whose boundaries carry duoidal expressions. The
// wire poset is never stored; it is derived by forward propagation from the
// source boundary, and validity is a set of conditions on that poset.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "signature.hpp"
#include "zetless.hpp"

namespace duodiag {

struct DiagramNode {
  std::string gen;
  std::vector<int> inputs, outputs;  // wire ids, in port order
};

struct StringDiagram {
  std::shared_ptr<const Signature> sig;
  Expression source_expr, target_expr;
  std::vector<std::string> wire_labels;  // wire id = index
  std::vector<DiagramNode> nodes;        // node id = index
  std::vector<int> input_wires;   // produced by the input boundary, leaf order
  std::vector<int> output_wires;  // consumed by the output boundary, leaf order
};

namespace detail {

// producer[w] / consumer[w]: node id, or -1 for a boundary.
struct wiring {
  std::vector<int> producer, consumer;
};

inline wiring check_wiring(const StringDiagram& d) {
  const int W = int(d.wire_labels.size());
  wiring wr{std::vector<int>(W, -2), std::vector<int>(W, -2)};
  auto fail = [](const std::string& msg) {
    throw validation_error(validation_code::not_wire_linear, msg);
  };
  auto produce = [&](int w, int node) {
    if (w < 0 || w >= W) fail("wire id out of range: " + std::to_string(w));
    if (wr.producer[w] != -2)
      fail("wire " + std::to_string(w) + " produced twice");
    wr.producer[w] = node;
  };
  auto consume = [&](int w, int node) {
    if (w < 0 || w >= W) fail("wire id out of range: " + std::to_string(w));
    if (wr.consumer[w] != -2)
      fail("wire " + std::to_string(w) + " consumed twice");
    wr.consumer[w] = node;
  };
  for (int w : d.input_wires) produce(w, -1);
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    for (int w : d.nodes[k].inputs) consume(w, int(k));
    for (int w : d.nodes[k].outputs) produce(w, int(k));
  }
  for (int w : d.output_wires) consume(w, -1);
  for (int w = 0; w < W; ++w) {
    if (wr.producer[w] == -2)
      fail("wire " + std::to_string(w) + " never produced");
    if (wr.consumer[w] == -2)
      fail("wire " + std::to_string(w) + " never consumed");
  }
  return wr;
}

// Strict reachability between generator nodes; throws on any cycle.
inline std::vector<std::vector<char>> node_reach(const StringDiagram& d,
                                                 const wiring& wr) {
  const int K = int(d.nodes.size());
  std::vector<std::vector<char>> r(K, std::vector<char>(K, 0));
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w) {
    int p = wr.producer[w], c = wr.consumer[w];
    if (p >= 0 && c >= 0) r[p][c] = 1;
  }
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = 1;
  for (int i = 0; i < K; ++i)
    if (r[i][i])
      throw validation_error(validation_code::cyclic,
                             "node " + std::to_string(i) + " lies on a cycle");
  return r;
}

// The derived relation restricted to a subset of "fired" nodes: seeds from
// the source boundary and from fired nodes' target posets, then the forward
// propagation rules at fired nodes, iterated with transitive closure to a
// fixpoint. With all nodes active this is the full derived relation.
//
// Propagation at node n with output o and other wire x:
//   x ⊑ o  if x ⊑ i for some input i          (always)
//   o ⊑ x  if i ⊑ x for some input i          (only for x that already exists
//           and can still be live when n fires: not an input or output of n,
//           not consumed by a node that must fire before n, and not produced
//           by a node that must fire after n)
// The restrictions on the second rule are what keep the relation
// antisymmetric: inputs die as n fires, already-dead wires cannot be ordered
// after n's outputs, and wires born later cannot be ordered relative to n at
// the moment n fires (their relations to n's outputs arise at their own
// producer, or transitively).
inline Rel derived_rel_subset(const StringDiagram& d, const wiring& wr,
                              const std::vector<std::vector<char>>& reach,
                              const std::vector<char>& active) {
  const int W = int(d.wire_labels.size());
  Rel r = make_rel(W);
  for (int i = 0; i < W; ++i) r[i][i] = 1;

  TypedPoset ps = encode(d.source_expr);
  for (std::size_t i = 0; i < d.input_wires.size(); ++i)
    for (std::size_t j = 0; j < d.input_wires.size(); ++j)
      if (ps.le(int(i), int(j))) r[d.input_wires[i]][d.input_wires[j]] = 1;

  std::vector<TypedPoset> tposets(d.nodes.size());
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    if (!active[k]) continue;
    tposets[k] = encode(d.sig->generator(d.nodes[k].gen).target);
    const auto& os = d.nodes[k].outputs;
    for (std::size_t i = 0; i < os.size(); ++i)
      for (std::size_t j = 0; j < os.size(); ++j)
        if (tposets[k].le(int(i), int(j))) r[os[i]][os[j]] = 1;
  }

  // dead_before[k][w]: w's consumer must fire before node k in every order
  // born_after[k][w]: w's producer must fire after node k in every order
  std::vector<std::vector<char>> dead_before(d.nodes.size(),
                                             std::vector<char>(W, 0));
  std::vector<std::vector<char>> born_after(d.nodes.size(),
                                            std::vector<char>(W, 0));
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    for (int w = 0; w < W; ++w) {
      int c = wr.consumer[w];
      int p = wr.producer[w];
      dead_before[k][w] = c >= 0 && c != int(k) && reach[c][int(k)];
      born_after[k][w] = p >= 0 && p != int(k) && reach[int(k)][p];
    }

  for (bool changed = true; changed;) {
    changed = false;
    rel_transitive_close(r);
    for (std::size_t k = 0; k < d.nodes.size(); ++k) {
      if (!active[k]) continue;
      const auto& node = d.nodes[k];
      std::vector<char> is_out(W, 0), is_in(W, 0);
      for (int o : node.outputs) is_out[o] = 1;
      for (int i : node.inputs) is_in[i] = 1;
      for (int x = 0; x < W; ++x) {
        if (is_out[x]) continue;
        bool below = false, above = false;
        for (int i : node.inputs) {
          below |= r[x][i] != 0;
          above |= r[i][x] != 0;
        }
        for (int o : node.outputs) {
          if (below && !r[x][o]) { r[x][o] = 1; changed = true; }
          if (above && !is_in[x] && !dead_before[k][x] && !born_after[k][x] &&
              !r[o][x]) {
            r[o][x] = 1;
            changed = true;
          }
        }
      }
    }
  }
  rel_transitive_close(r);
  return r;
}

inline Rel derived_rel(const StringDiagram& d, const wiring& wr,
                       const std::vector<std::vector<char>>& reach) {
  return derived_rel_subset(d, wr, reach,
                            std::vector<char>(d.nodes.size(), 1));
}

inline void check_known_generators(const StringDiagram& d) {
  if (!d.sig)
    throw validation_error(validation_code::signature_mismatch,
                           "diagram has no signature");
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    if (!d.sig->has_generator(d.nodes[k].gen))
      throw validation_error(validation_code::signature_mismatch,
                             "node " + std::to_string(k) +
                                 " uses unknown generator '" +
                                 d.nodes[k].gen + "'");
}

inline void check_typing(const StringDiagram& d) {
  auto boundary = [&](const std::vector<int>& wires, const Expression& e,
                      const char* side) {
    auto lt = list_type(e);
    if (lt.size() != wires.size())
      throw validation_error(validation_code::boundary_mismatch,
                             std::string(side) + " boundary has " +
                                 std::to_string(wires.size()) + " wires for " +
                                 std::to_string(lt.size()) + " leaves");
    for (std::size_t i = 0; i < lt.size(); ++i)
      if (d.wire_labels[wires[i]] != lt[i])
        throw validation_error(
            validation_code::boundary_mismatch,
            std::string(side) + " boundary wire " + std::to_string(wires[i]) +
                " labelled '" + d.wire_labels[wires[i]] + "', expected '" +
                lt[i] + "'");
  };
  boundary(d.input_wires, d.source_expr, "input");
  boundary(d.output_wires, d.target_expr, "output");
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    const Generator& g = d.sig->generator(d.nodes[k].gen);
    auto ports = [&](const std::vector<int>& wires, const Expression& e,
                     const char* side) {
      auto lt = list_type(e);
      if (lt.size() != wires.size())
        throw validation_error(validation_code::type_mismatch,
                               "node " + std::to_string(k) + " has " +
                                   std::to_string(wires.size()) + " " + side +
                                   " wires for generator '" + g.name + "'");
      for (std::size_t i = 0; i < lt.size(); ++i)
        if (d.wire_labels[wires[i]] != lt[i])
          throw validation_error(
              validation_code::type_mismatch,
              "node " + std::to_string(k) + " " + side + " wire " +
                  std::to_string(wires[i]) + " labelled '" +
                  d.wire_labels[wires[i]] + "', expected '" + lt[i] + "'");
    };
    ports(d.nodes[k].inputs, g.source, "input");
    ports(d.nodes[k].outputs, g.target, "output");
  }
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    if (!d.sig->has_type(d.wire_labels[w]))
      throw validation_error(validation_code::type_mismatch,
                             "wire " + std::to_string(w) +
                                 " has undeclared type '" + d.wire_labels[w] +
                                 "'");
}

}  // namespace detail

// The derived wire poset (labels = wire types, order = wire ids). Requires
// wire-linearity and acyclicity but none of the further validity conditions;
// on invalid diagrams the relation may fail antisymmetry.
inline TypedPoset derived_poset(const StringDiagram& d) {
  auto wr = detail::check_wiring(d);
  auto reach = detail::node_reach(d, wr);
  TypedPoset p;
  p.labels = d.wire_labels;
  p.leq = detail::derived_rel(d, wr, reach);
  return p;
}

inline void validate(const StringDiagram& d) {
  detail::check_known_generators(d);
  auto wr = detail::check_wiring(d);
  auto reach = detail::node_reach(d, wr);
  detail::check_typing(d);
  const int W = int(d.wire_labels.size());
  Rel r = detail::derived_rel(d, wr, reach);

  // interval condition, per node, over the wires that can be live as it fires
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    const auto& node = d.nodes[k];
    std::vector<char> is_in(W, 0), is_out(W, 0);
    for (int i : node.inputs) is_in[i] = 1;
    for (int o : node.outputs) is_out[o] = 1;
    for (int y = 0; y < W; ++y) {
      if (is_in[y] || is_out[y]) continue;
      int c = wr.consumer[y], p = wr.producer[y];
      if (c >= 0 && c != int(k) && reach[c][int(k)]) continue;  // dead by then
      if (p >= 0 && p != int(k) && reach[int(k)][p]) continue;  // born later
      int lo = -1, hi = -1;
      for (int i : node.inputs) {
        if (r[i][y]) lo = i;
        if (r[y][i]) hi = i;
      }
      if (lo >= 0 && hi >= 0)
        throw validation_error(validation_code::not_interval,
                               "node " + std::to_string(k) + ": wire " +
                                   std::to_string(y) +
                                   " lies between input wires " +
                                   std::to_string(lo) + " and " +
                                   std::to_string(hi));
    }
  }

  for (int i = 0; i < W; ++i)
    for (int j = i + 1; j < W; ++j)
      if (r[i][j] && r[j][i])
        throw validation_error(validation_code::cyclic,
                               "wires " + std::to_string(i) + " and " +
                                   std::to_string(j) +
                                   " are ordered both ways");

  // input inclusion: derived order among the inputs must be assumed by the
  // generator's source expression (positionally)
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    const auto& node = d.nodes[k];
    TypedPoset gs = encode(d.sig->generator(node.gen).source);
    for (std::size_t i = 0; i < node.inputs.size(); ++i)
      for (std::size_t j = 0; j < node.inputs.size(); ++j)
        if (i != j && r[node.inputs[i]][node.inputs[j]] &&
            !gs.le(int(i), int(j)))
          throw validation_error(
              validation_code::no_input_inclusion,
              "node " + std::to_string(k) + ": wires " +
                  std::to_string(node.inputs[i]) + " <= " +
                  std::to_string(node.inputs[j]) +
                  " but the generator source does not order them");
  }

  // output boundary: derived order among output wires must be assumed by the
  // target expression
  TypedPoset te = encode(d.target_expr);
  for (std::size_t i = 0; i < d.output_wires.size(); ++i)
    for (std::size_t j = 0; j < d.output_wires.size(); ++j)
      if (i != j && r[d.output_wires[i]][d.output_wires[j]] &&
          !te.le(int(i), int(j)))
        throw validation_error(
            validation_code::boundary_mismatch,
            "output wires " + std::to_string(d.output_wires[i]) + " <= " +
                std::to_string(d.output_wires[j]) +
                " but the target expression does not order them");
}

// --- constructors ---------------------------------------------------------

inline StringDiagram identity(std::shared_ptr<const Signature> sig,
                              const Expression& e) {
  StringDiagram d;
  d.sig = std::move(sig);
  d.source_expr = e;
  d.target_expr = e;
  for (const auto& t : list_type(e)) {
    d.input_wires.push_back(int(d.wire_labels.size()));
    d.output_wires.push_back(int(d.wire_labels.size()));
    d.wire_labels.push_back(t);
  }
  validate(d);
  return d;
}

inline StringDiagram from_generator(std::shared_ptr<const Signature> sig,
                                    const std::string& name) {
  const Generator& g = sig->generator(name);
  StringDiagram d;
  d.sig = std::move(sig);
  d.source_expr = g.source;
  d.target_expr = g.target;
  DiagramNode n;
  n.gen = name;
  for (const auto& t : list_type(g.source)) {
    n.inputs.push_back(int(d.wire_labels.size()));
    d.input_wires.push_back(int(d.wire_labels.size()));
    d.wire_labels.push_back(t);
  }
  for (const auto& t : list_type(g.target)) {
    n.outputs.push_back(int(d.wire_labels.size()));
    d.output_wires.push_back(int(d.wire_labels.size()));
    d.wire_labels.push_back(t);
  }
  d.nodes.push_back(std::move(n));
  validate(d);
  return d;
}

// Node-free diagram e1 -> e2 along a leaf bijection that must be an
// inclusion of the encoded posets.
inline StringDiagram structure_diagram(std::shared_ptr<const Signature> sig,
                                       const Expression& e1,
                                       const Expression& e2,
                                       const std::vector<int>& leaf_map) {
  auto lt1 = list_type(e1), lt2 = list_type(e2);
  if (leaf_map.size() != lt1.size() || lt1.size() != lt2.size())
    throw invalid_inclusion("leaf map arity mismatch");
  std::vector<char> hit(lt2.size(), 0);
  for (std::size_t i = 0; i < leaf_map.size(); ++i) {
    int t = leaf_map[i];
    if (t < 0 || t >= int(lt2.size()) || hit[t])
      throw invalid_inclusion("leaf map is not a bijection");
    hit[t] = 1;
    if (lt1[i] != lt2[t])
      throw invalid_inclusion("leaf map does not preserve types");
  }
  TypedPoset p1 = encode(e1), p2 = encode(e2);
  for (std::size_t i = 0; i < leaf_map.size(); ++i)
    for (std::size_t j = 0; j < leaf_map.size(); ++j)
      if (p1.le(int(i), int(j)) && !p2.le(leaf_map[i], leaf_map[j]))
        throw invalid_inclusion("leaf map does not preserve order");
  StringDiagram d;
  d.sig = std::move(sig);
  d.source_expr = e1;
  d.target_expr = e2;
  d.wire_labels = lt1;
  d.input_wires.resize(lt1.size());
  std::iota(d.input_wires.begin(), d.input_wires.end(), 0);
  d.output_wires.resize(lt1.size());
  for (std::size_t i = 0; i < leaf_map.size(); ++i)
    d.output_wires[leaf_map[i]] = int(i);
  validate(d);
  return d;
}

// Canonical (lexicographically least) structure diagram e1 -> e2.
inline StringDiagram structure_diagram(std::shared_ptr<const Signature> sig,
                                       const Expression& e1,
                                       const Expression& e2) {
  auto inc = inclusion_exists(encode(e1), encode(e2));
  if (!inc)
    throw no_such_structure_map("no structure map " + print(e1) + " -> " +
                                print(e2));
  return structure_diagram(std::move(sig), e1, e2, inc->map);
}

// Overload taking an inclusion of zetless posets directly, with the
// boundary expressions given by decode.
inline StringDiagram structure_diagram(std::shared_ptr<const Signature> sig,
                                       const Inclusion& inc) {
  if (inc.source.size() != inc.target.size() ||
      inc.map.size() != inc.source.size())
    throw invalid_inclusion("inclusion arity mismatch");
  auto ds = decode_with_order(inc.source);
  auto dt = decode_with_order(inc.target);
  std::vector<int> tgt_pos(inc.target.size());
  for (std::size_t k = 0; k < dt.leaf_order.size(); ++k)
    tgt_pos[dt.leaf_order[k]] = int(k);
  std::vector<int> leaf_map(ds.leaf_order.size());
  for (std::size_t k = 0; k < ds.leaf_order.size(); ++k) {
    int img = inc.map[ds.leaf_order[k]];
    if (img < 0 || img >= int(inc.target.size()))
      throw invalid_inclusion("inclusion map out of range");
    leaf_map[k] = tgt_pos[img];
  }
  return structure_diagram(std::move(sig), ds.expr, dt.expr, leaf_map);
}

inline StringDiagram make_sym_diagram(std::shared_ptr<const Signature> sig,
                                      const Expression& x,
                                      const Expression& y) {
  int nx = int(atom_count(x)), ny = int(atom_count(y));
  std::vector<int> map(nx + ny);
  for (int i = 0; i < nx; ++i) map[i] = ny + i;
  for (int j = 0; j < ny; ++j) map[nx + j] = j;
  return structure_diagram(std::move(sig), par_e(x, y), par_e(y, x), map);
}

// dist(X,Y,Z,W): (X>Z)*(Y>W) -> (X*Y)>(Z*W), standard leaf bijection.
inline StringDiagram make_dist_diagram(std::shared_ptr<const Signature> sig,
                                       const Expression& x, const Expression& y,
                                       const Expression& z,
                                       const Expression& w) {
  int nx = int(atom_count(x)), ny = int(atom_count(y)), nz = int(atom_count(z)),
      nw = int(atom_count(w));
  std::vector<int> map(nx + ny + nz + nw);
  for (int i = 0; i < nx; ++i) map[i] = i;
  for (int i = 0; i < nz; ++i) map[nx + i] = nx + ny + i;
  for (int i = 0; i < ny; ++i) map[nx + nz + i] = nx + i;
  for (int i = 0; i < nw; ++i) map[nx + nz + ny + i] = nx + ny + nz + i;
  return structure_diagram(std::move(sig), par_e(seq_e(x, z), seq_e(y, w)),
                           seq_e(par_e(x, y), par_e(z, w)), map);
}

// --- composition ----------------------------------------------------------

namespace detail {
inline void check_same_signature(const StringDiagram& a,
                                 const StringDiagram& b) {
  if (!a.sig || !b.sig || (a.sig != b.sig && *a.sig != *b.sig))
    throw validation_error(validation_code::signature_mismatch,
                           "operands use different signatures");
}
}  // namespace detail

inline StringDiagram compose(const StringDiagram& a, const StringDiagram& b) {
  detail::check_same_signature(a, b);
  std::vector<int> w;
  try {
    w = sym_witness(a.target_expr, b.source_expr);
  } catch (const error&) {
    throw validation_error(validation_code::boundary_mismatch,
                           "compose: cannot match '" + print(a.target_expr) +
                               "' with '" + print(b.source_expr) + "'");
  }
  StringDiagram d;
  d.sig = a.sig;
  d.source_expr = a.source_expr;
  d.target_expr = b.target_expr;
  d.wire_labels = a.wire_labels;
  d.input_wires = a.input_wires;
  d.nodes = a.nodes;
  std::vector<int> bmap(b.wire_labels.size(), -1);
  for (std::size_t k = 0; k < w.size(); ++k)
    bmap[b.input_wires[w[k]]] = a.output_wires[k];
  for (std::size_t wi = 0; wi < b.wire_labels.size(); ++wi)
    if (bmap[wi] < 0) {
      bmap[wi] = int(d.wire_labels.size());
      d.wire_labels.push_back(b.wire_labels[wi]);
    }
  for (const auto& n : b.nodes) {
    DiagramNode m;
    m.gen = n.gen;
    for (int x : n.inputs) m.inputs.push_back(bmap[x]);
    for (int x : n.outputs) m.outputs.push_back(bmap[x]);
    d.nodes.push_back(std::move(m));
  }
  for (int x : b.output_wires) d.output_wires.push_back(bmap[x]);
  validate(d);
  return d;
}

namespace detail {
inline StringDiagram juxtapose(const StringDiagram& a, const StringDiagram& b,
                               bool sequential) {
  check_same_signature(a, b);
  StringDiagram d;
  d.sig = a.sig;
  d.source_expr = sequential ? seq_e(a.source_expr, b.source_expr)
                             : par_e(a.source_expr, b.source_expr);
  d.target_expr = sequential ? seq_e(a.target_expr, b.target_expr)
                             : par_e(a.target_expr, b.target_expr);
  d.wire_labels = a.wire_labels;
  const int off = int(a.wire_labels.size());
  for (const auto& l : b.wire_labels) d.wire_labels.push_back(l);
  d.nodes = a.nodes;
  for (const auto& n : b.nodes) {
    DiagramNode m;
    m.gen = n.gen;
    for (int x : n.inputs) m.inputs.push_back(x + off);
    for (int x : n.outputs) m.outputs.push_back(x + off);
    d.nodes.push_back(std::move(m));
  }
  d.input_wires = a.input_wires;
  for (int x : b.input_wires) d.input_wires.push_back(x + off);
  d.output_wires = a.output_wires;
  for (int x : b.output_wires) d.output_wires.push_back(x + off);
  validate(d);
  return d;
}
}  // namespace detail

inline StringDiagram tensor(const StringDiagram& a, const StringDiagram& b) {
  return detail::juxtapose(a, b, false);
}
inline StringDiagram sequence(const StringDiagram& a, const StringDiagram& b) {
  return detail::juxtapose(a, b, true);
}

// --- canonical form and equality -------------------------------------------

namespace detail {

struct canon_best {
  std::string key;
  bool have = false;
  std::vector<int> wire_id;  // old wire -> canonical wire
  std::vector<int> order;    // canonical node position -> old node
};

inline void canon_rec(const StringDiagram& d, std::vector<int> wire_id,
                      std::vector<char> done, int next_id, std::string acc,
                      std::vector<int> order, canon_best& best) {
  for (;;) {
    int chosen = -1;
    std::string chosen_key;
    std::vector<int> ties;
    for (std::size_t k = 0; k < d.nodes.size(); ++k) {
      if (done[k]) continue;
      bool ready = true;
      for (int i : d.nodes[k].inputs) ready &= wire_id[i] >= 0;
      if (!ready) continue;
      std::string key = d.nodes[k].gen + "(";
      for (int i : d.nodes[k].inputs)
        key += std::to_string(wire_id[i]) + ",";
      key += ")";
      if (chosen < 0 || key < chosen_key) {
        chosen = int(k);
        chosen_key = key;
        ties = {int(k)};
      } else if (key == chosen_key) {
        ties.push_back(int(k));
      }
    }
    if (chosen < 0) break;
    if (ties.size() == 1) {
      acc += "n:" + chosen_key + ";";
      for (int o : d.nodes[chosen].outputs) wire_id[o] = next_id++;
      done[chosen] = 1;
      order.push_back(chosen);
      continue;
    }
    // several zero-input nodes with the same generator: branch
    for (int t : ties) {
      auto wid = wire_id;
      auto dn = done;
      std::string a2 = acc + "n:" + chosen_key + ";";
      auto ord = order;
      ord.push_back(t);
      int nid = next_id;
      for (int o : d.nodes[t].outputs) wid[o] = nid++;
      dn[t] = 1;
      canon_rec(d, std::move(wid), std::move(dn), nid, std::move(a2),
                std::move(ord), best);
    }
    return;
  }
  acc += "out:";
  for (int o : d.output_wires) acc += std::to_string(wire_id[o]) + ",";
  acc += "|lab:";
  std::vector<std::string> lab(d.wire_labels.size());
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    if (wire_id[w] >= 0) lab[wire_id[w]] = d.wire_labels[w];
  for (const auto& l : lab) acc += l + ",";
  if (!best.have || acc < best.key) {
    best.key = std::move(acc);
    best.have = true;
    best.wire_id = std::move(wire_id);
    best.order = std::move(order);
  }
}

inline canon_best canonical_best(const StringDiagram& d) {
  std::vector<int> wire_id(d.wire_labels.size(), -1);
  int next_id = 0;
  for (int w : d.input_wires) wire_id[w] = next_id++;
  canon_best best;
  canon_rec(d, std::move(wire_id), std::vector<char>(d.nodes.size(), 0),
            next_id, "", {}, best);
  return best;
}

}  // namespace detail

// Canonical encoding of the hypergraph with boundaries pinned; equal strings
// <=> label/port/boundary-preserving isomorphism (for valid diagrams).
inline std::string canonical_encoding(const StringDiagram& d) {
  return detail::canonical_best(d).key;
}

// Renumbers wires and nodes along the canonical traversal: two diagrams are
// equal() iff their normal forms are structurally identical. Idempotent.
inline StringDiagram normal_form(const StringDiagram& d) {
  auto best = detail::canonical_best(d);
  StringDiagram n;
  n.sig = d.sig;
  n.source_expr = d.source_expr;
  n.target_expr = d.target_expr;
  n.wire_labels.resize(d.wire_labels.size());
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    n.wire_labels[best.wire_id[w]] = d.wire_labels[w];
  for (int k : best.order) {
    DiagramNode node;
    node.gen = d.nodes[k].gen;
    for (int i : d.nodes[k].inputs) node.inputs.push_back(best.wire_id[i]);
    for (int o : d.nodes[k].outputs) node.outputs.push_back(best.wire_id[o]);
    n.nodes.push_back(std::move(node));
  }
  for (int w : d.input_wires) n.input_wires.push_back(best.wire_id[w]);
  for (int w : d.output_wires) n.output_wires.push_back(best.wire_id[w]);
  return n;
}

namespace detail {
// Reorders boundary wire lists along the canonical representative of the
// boundary expressions' ≈-classes.
inline StringDiagram canonicalize_boundaries(const StringDiagram& d) {
  StringDiagram c = d;
  c.source_expr = canon_expr(d.source_expr);
  c.target_expr = canon_expr(d.target_expr);
  auto wsrc = sym_witness(d.source_expr, c.source_expr);
  auto wtgt = sym_witness(d.target_expr, c.target_expr);
  for (std::size_t i = 0; i < wsrc.size(); ++i)
    c.input_wires[wsrc[i]] = d.input_wires[i];
  for (std::size_t i = 0; i < wtgt.size(); ++i)
    c.output_wires[wtgt[i]] = d.output_wires[i];
  return c;
}
}  // namespace detail

// Diagram equality: boundary expressions match and the hypergraphs are
// isomorphic. Boundaries compare syntactically; pass up_to_sym to compare
// them up to ≈ instead.
inline bool equal(const StringDiagram& a, const StringDiagram& b,
                  bool up_to_sym = false) {
  if (up_to_sym) {
    if (!sym_equal(a.source_expr, b.source_expr) ||
        !sym_equal(a.target_expr, b.target_expr))
      return false;
    return canonical_encoding(detail::canonicalize_boundaries(a)) ==
           canonical_encoding(detail::canonicalize_boundaries(b));
  }
  if (!(a.source_expr == b.source_expr) ||
      !(a.target_expr == b.target_expr))
    return false;
  return canonical_encoding(a) == canonical_encoding(b);
}

// --- node orders ------------------------------------------------------------

// Deterministic topological order of the generator nodes (least node id
// among the ready ones at every step).
inline std::vector<int> node_order(const StringDiagram& d) {
  auto wr = detail::check_wiring(d);
  const int K = int(d.nodes.size());
  std::vector<int> missing(K, 0);
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    if (wr.producer[w] >= 0 && wr.consumer[w] >= 0) ++missing[wr.consumer[w]];
  std::vector<int> order;
  std::vector<char> used(K, 0);
  for (int step = 0; step < K; ++step) {
    int pick = -1;
    for (int k = 0; k < K; ++k)
      if (!used[k] && missing[k] == 0) { pick = k; break; }
    if (pick < 0)
      throw validation_error(validation_code::cyclic,
                             "no topological order exists");
    used[pick] = 1;
    order.push_back(pick);
    for (int o : d.nodes[pick].outputs)
      if (wr.consumer[o] >= 0) --missing[wr.consumer[o]];
  }
  return order;
}

// Every topological order; exponential, intended for small test diagrams.
inline std::vector<std::vector<int>> all_node_orders(const StringDiagram& d) {
  auto wr = detail::check_wiring(d);
  const int K = int(d.nodes.size());
  std::vector<std::vector<char>> pred(K, std::vector<char>(K, 0));
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w)
    if (wr.producer[w] >= 0 && wr.consumer[w] >= 0)
      pred[wr.consumer[w]][wr.producer[w]] = 1;
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<char> used(K, 0);
  std::function<void()> rec = [&]() {
    if (int(cur.size()) == K) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k < K; ++k) {
      if (used[k]) continue;
      bool ready = true;
      for (int p = 0; p < K; ++p) ready &= !pred[k][p] || used[p];
      if (!ready) continue;
      used[k] = 1;
      cur.push_back(k);
      rec();
      cur.pop_back();
      used[k] = 0;
    }
  };
  rec();
  return out;
}

// --- atomic decomposition ---------------------------------------------------

// The cut before firing order[pos] (pos = order.size() gives the final cut):
// live wires, the prefix-derived relation restricted to them, and its decode.
struct cut_info {
  std::vector<int> wires;      // global wire ids, ascending
  TypedPoset poset;            // prefix relation restricted to the cut
  Expression expr;             // decode of the cut poset
  std::vector<int> leaf_wire;  // leaf k of expr is this global wire
};

inline cut_info level_cut(const StringDiagram& d, const std::vector<int>& order,
                          std::size_t pos) {
  auto wr = detail::check_wiring(d);
  auto reach = detail::node_reach(d, wr);
  std::vector<char> active(d.nodes.size(), 0);
  for (std::size_t j = 0; j < pos && j < order.size(); ++j)
    active[order[j]] = 1;
  Rel r = detail::derived_rel_subset(d, wr, reach, active);
  cut_info c;
  for (std::size_t w = 0; w < d.wire_labels.size(); ++w) {
    int p = wr.producer[w], cn = wr.consumer[w];
    bool born = p < 0 || active[p];
    bool dead = cn >= 0 && active[cn];
    if (born && !dead) c.wires.push_back(int(w));
  }
  TypedPoset full;
  full.labels = d.wire_labels;
  full.leq = std::move(r);
  c.poset = restrict_to(full, c.wires);
  auto dec = decode_with_order(c.poset);
  c.expr = dec.expr;
  for (int local : dec.leaf_order) c.leaf_wire.push_back(c.wires[local]);
  return c;
}

// Single-node diagram for order[pos]: spectator wires plus the node, with
// boundaries decoded from the cuts before and after it fires.
inline StringDiagram atomic(const StringDiagram& d, const std::vector<int>& order,
                            std::size_t pos) {
  const DiagramNode& node = d.nodes.at(order.at(pos));
  cut_info before = level_cut(d, order, pos);
  cut_info after = level_cut(d, order, pos + 1);
  StringDiagram a;
  a.sig = d.sig;
  a.source_expr = before.expr;
  a.target_expr = after.expr;
  std::map<int, int> local;
  auto add_wire = [&](int w) {
    if (!local.count(w)) {
      local[w] = int(a.wire_labels.size());
      a.wire_labels.push_back(d.wire_labels[w]);
    }
    return local[w];
  };
  for (int w : before.wires) add_wire(w);
  for (int w : after.wires) add_wire(w);
  for (int w : before.leaf_wire) a.input_wires.push_back(local[w]);
  for (int w : after.leaf_wire) a.output_wires.push_back(local[w]);
  DiagramNode m;
  m.gen = node.gen;
  for (int w : node.inputs) m.inputs.push_back(local[w]);
  for (int w : node.outputs) m.outputs.push_back(local[w]);
  a.nodes.push_back(std::move(m));
  validate(a);
  return a;
}

inline std::vector<StringDiagram> decompose(const StringDiagram& d,
                                            const std::vector<int>& order) {
  std::vector<StringDiagram> out;
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    out.push_back(atomic(d, order, pos));
  return out;
}

inline std::vector<StringDiagram> decompose(const StringDiagram& d) {
  return decompose(d, node_order(d));
}

// Rebuilds a diagram equal() to d from its atomic decomposition, with the
// boundary structure diagrams supplying the initial and final coercions.
inline StringDiagram recompose(const StringDiagram& d,
                               const std::vector<int>& order) {
  cut_info first = level_cut(d, order, 0);
  std::vector<int> wire_leaf(d.wire_labels.size(), -1);
  for (std::size_t k = 0; k < first.leaf_wire.size(); ++k)
    wire_leaf[first.leaf_wire[k]] = int(k);
  std::vector<int> pre_map(d.input_wires.size());
  for (std::size_t i = 0; i < d.input_wires.size(); ++i)
    pre_map[i] = wire_leaf[d.input_wires[i]];
  StringDiagram acc =
      structure_diagram(d.sig, d.source_expr, first.expr, pre_map);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    acc = compose(acc, atomic(d, order, pos));
  cut_info last = level_cut(d, order, order.size());
  std::vector<int> leaf_of(d.wire_labels.size(), -1);
  for (std::size_t k = 0; k < last.leaf_wire.size(); ++k)
    leaf_of[last.leaf_wire[k]] = int(k);
  std::vector<int> post_map(last.leaf_wire.size());
  for (std::size_t i = 0; i < d.output_wires.size(); ++i)
    post_map[leaf_of[d.output_wires[i]]] = int(i);
  return compose(acc,
                 structure_diagram(d.sig, last.expr, d.target_expr, post_map));
}

inline StringDiagram recompose(const StringDiagram& d) {
  return recompose(d, node_order(d));
}

// --- relabelling ------------------------------------------------------------

inline StringDiagram relabel(const SignatureHom& h, const StringDiagram& d) {
  StringDiagram r;
  r.sig = h.target;
  r.source_expr = h.map_expr(d.source_expr);
  r.target_expr = h.map_expr(d.target_expr);
  for (const auto& l : d.wire_labels) r.wire_labels.push_back(h.map_type(l));
  for (const auto& n : d.nodes) {
    auto it = h.gen_map.find(n.gen);
    if (it == h.gen_map.end())
      throw unknown_generator("hom undefined on generator '" + n.gen + "'");
    DiagramNode m;
    m.gen = it->second;
    m.inputs = n.inputs;
    m.outputs = n.outputs;
    r.nodes.push_back(std::move(m));
  }
  r.input_wires = d.input_wires;
  r.output_wires = d.output_wires;
  validate(r);
  return r;
}

}  // namespace duodiag
