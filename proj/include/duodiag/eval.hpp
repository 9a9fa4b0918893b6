// Evaluation of expressions, structure terms, and diagrams into a strict
// physical duoidal algebra. The algebra is a duck-typed contract:
//
//   types   Object, Morphism
//   objects type_object(name), unit_object(),
//           tensor_objects(a, b), seq_objects(a, b)     -- strict on the nose
//   arrows  generator_morphism(name), identity(object),
//           compose(m1, m2)                             -- diagram order
//           tensor(m1, m2), sequence(m1, m2),
//           dist(x, y, z, w)   : (x>z)*(y>w) -> (x*y)>(z*w)
//           sym(x, y)          : x*y -> y*x
//
// Law compliance (associativity, interchange, naturality of dist/sym) is the
// caller's responsibility; the built-ins below satisfy it.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diagram.hpp"

namespace duodiag {

template <typename A>
typename A::Object eval_object(const A& alg, const Expression& e) {
  switch (e.kind) {
    case expr_kind::unit: return alg.unit_object();
    case expr_kind::atom: return alg.type_object(e.atom);
    default: {
      std::optional<typename A::Object> acc;
      for (const auto& c : e.children) {
        auto oc = eval_object(alg, c);
        if (!acc)
          acc = std::move(oc);
        else
          acc = e.kind == expr_kind::seq ? alg.seq_objects(*acc, oc)
                                         : alg.tensor_objects(*acc, oc);
      }
      return *acc;
    }
  }
  return alg.unit_object();
}

template <typename A>
typename A::Morphism eval_structure(const A& alg, const StructureTerm& t) {
  using k = StructureTerm::kind_t;
  switch (t.kind) {
    case k::id: return alg.identity(eval_object(alg, t.a));
    case k::sym:
      return alg.sym(eval_object(alg, t.a), eval_object(alg, t.b));
    case k::dist:
      return alg.dist(eval_object(alg, t.a), eval_object(alg, t.b),
                      eval_object(alg, t.c), eval_object(alg, t.d));
    default: {
      if (t.parts.empty()) return alg.identity(alg.unit_object());
      std::optional<typename A::Morphism> acc;
      for (const auto& p : t.parts) {
        auto mp = eval_structure(alg, p);
        if (!acc) {
          acc = std::move(mp);
          continue;
        }
        if (t.kind == k::seq_of)
          acc = alg.sequence(*acc, mp);
        else if (t.kind == k::par_of)
          acc = alg.tensor(*acc, mp);
        else
          acc = alg.compose(*acc, mp);
      }
      return *acc;
    }
  }
}

namespace detail {

// K[inner]: replace the unique @hole atom, keeping the result reduced.
inline Expression substitute_hole(const Expression& k, const Expression& inner) {
  switch (k.kind) {
    case expr_kind::unit: return k;
    case expr_kind::atom: return k.atom == hole_label ? inner : k;
    default: {
      Expression acc = Expression::unit();
      for (const auto& c : k.children) {
        Expression sc = substitute_hole(c, inner);
        acc = k.kind == expr_kind::seq ? seq_e(acc, sc) : par_e(acc, sc);
      }
      return acc;
    }
  }
}

// m at the hole of K, identities everywhere else: K[src m] -> K[tgt m].
template <typename A>
typename A::Morphism whisker(const A& alg, const Expression& k,
                             const typename A::Morphism& m) {
  switch (k.kind) {
    case expr_kind::unit: return alg.identity(alg.unit_object());
    case expr_kind::atom:
      return k.atom == hole_label ? m : alg.identity(alg.type_object(k.atom));
    default: {
      std::optional<typename A::Morphism> acc;
      for (const auto& c : k.children) {
        auto mc = whisker(alg, c, m);
        if (!acc)
          acc = std::move(mc);
        else
          acc = k.kind == expr_kind::seq ? alg.sequence(*acc, mc)
                                         : alg.tensor(*acc, mc);
      }
      return *acc;
    }
  }
}

// One node against its level cuts: coerce the cut expression into a context
// K with the node's inputs bracketed in the hole, adapt the hole content to
// the generator's source, fire the whiskered generator, and coerce K[target]
// onto the next cut expression.
template <typename A>
typename A::Morphism atomic_morphism(const A& alg, const StringDiagram& d,
                                     const DiagramNode& node,
                                     const cut_info& before,
                                     const cut_info& after) {
  const Generator& gen = d.sig->generator(node.gen);
  const int n = int(before.poset.size());

  std::map<int, int> b_elem;  // global wire -> element of the before poset
  for (int i = 0; i < n; ++i) b_elem[before.wires[i]] = i;

  std::vector<int> s;
  for (int w : node.inputs) s.push_back(b_elem.at(w));
  std::sort(s.begin(), s.end());
  std::vector<char> in_s(n, 0);
  for (int i : s) in_s[i] = 1;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in_s[i]) rest.push_back(i);

  extraction ex = extract(saturate_for_interval(before.poset, s), s);
  auto dk = decode_with_order(ex.outer);  // context, @hole as one leaf
  auto di = decode_with_order(ex.inner);  // hole content before firing

  // cut expression -> K[content]
  Expression k_src = substitute_hole(dk.expr, di.expr);
  std::vector<int> src_elems;  // leaf of k_src -> element of the before poset
  for (int oe : dk.leaf_order) {
    if (oe == ex.hole)
      for (int ie : di.leaf_order) src_elems.push_back(s[ie]);
    else
      src_elems.push_back(rest[oe]);
  }
  std::vector<int> pos_of_elem(n, -1);
  for (std::size_t i = 0; i < src_elems.size(); ++i)
    pos_of_elem[src_elems[i]] = int(i);
  std::vector<int> map1(before.leaf_wire.size());
  for (std::size_t k = 0; k < before.leaf_wire.size(); ++k)
    map1[k] = pos_of_elem[b_elem.at(before.leaf_wire[k])];
  typename A::Morphism m =
      eval_structure(alg, synthesize_structure_map(before.expr, k_src, map1));

  // content -> generator source, inside K
  std::map<int, int> slot;
  for (std::size_t j = 0; j < node.inputs.size(); ++j) slot[node.inputs[j]] = int(j);
  std::vector<int> map2(di.leaf_order.size());
  for (std::size_t k = 0; k < di.leaf_order.size(); ++k)
    map2[k] = slot.at(before.wires[s[di.leaf_order[k]]]);
  m = alg.compose(
      m, whisker(alg, dk.expr,
                 eval_structure(alg, synthesize_structure_map(
                                         di.expr, gen.source, map2))));

  // the generator itself, inside K
  m = alg.compose(m, whisker(alg, dk.expr, alg.generator_morphism(node.gen)));

  // K[target] -> next cut expression
  Expression k_tgt = substitute_hole(dk.expr, gen.target);
  std::vector<int> tgt_wires;  // leaf of k_tgt -> global wire
  for (int oe : dk.leaf_order) {
    if (oe == ex.hole)
      for (int w : node.outputs) tgt_wires.push_back(w);
    else
      tgt_wires.push_back(before.wires[rest[oe]]);
  }
  std::map<int, int> a_pos;
  for (std::size_t k = 0; k < after.leaf_wire.size(); ++k)
    a_pos[after.leaf_wire[k]] = int(k);
  std::vector<int> map4(tgt_wires.size());
  for (std::size_t i = 0; i < tgt_wires.size(); ++i)
    map4[i] = a_pos.at(tgt_wires[i]);
  return alg.compose(
      m, eval_structure(alg, synthesize_structure_map(k_tgt, after.expr, map4)));
}

}  // namespace detail

// Fold the atomic morphisms along the given node order, wrapped in the two
// boundary coercions. Any valid order yields the same value in a lawful
// algebra.
template <typename A>
typename A::Morphism eval_diagram(const A& alg, const StringDiagram& d,
                                  const std::vector<int>& order) {
  validate(d);
  if (order.size() != d.nodes.size())
    throw eval_error("node order must mention every node exactly once");

  std::vector<cut_info> cuts;
  for (std::size_t j = 0; j <= order.size(); ++j)
    cuts.push_back(level_cut(d, order, j));

  const cut_info& first = cuts.front();
  std::map<int, int> fpos;
  for (std::size_t k = 0; k < first.leaf_wire.size(); ++k)
    fpos[first.leaf_wire[k]] = int(k);
  std::vector<int> pre_map(d.input_wires.size());
  for (std::size_t i = 0; i < d.input_wires.size(); ++i)
    pre_map[i] = fpos.at(d.input_wires[i]);
  typename A::Morphism m = eval_structure(
      alg, synthesize_structure_map(d.source_expr, first.expr, pre_map));

  for (std::size_t pos = 0; pos < order.size(); ++pos)
    m = alg.compose(m, detail::atomic_morphism(alg, d, d.nodes[order[pos]],
                                               cuts[pos], cuts[pos + 1]));

  const cut_info& last = cuts.back();
  std::map<int, int> opos;
  for (std::size_t i = 0; i < d.output_wires.size(); ++i)
    opos[d.output_wires[i]] = int(i);
  std::vector<int> post_map(last.leaf_wire.size());
  for (std::size_t k = 0; k < last.leaf_wire.size(); ++k)
    post_map[k] = opos.at(last.leaf_wire[k]);
  return alg.compose(m, eval_structure(alg, synthesize_structure_map(
                                                last.expr, d.target_expr,
                                                post_map)));
}

template <typename A>
typename A::Morphism eval_diagram(const A& alg, const StringDiagram& d) {
  return eval_diagram(alg, d, node_order(d));
}

// --- built-in algebras ------------------------------------------------------

// Collapsing algebra over a commutative monoid: one object, every structure
// map the monoid unit, generators mapped to assigned weights. Default is
// integers under multiplication.
template <typename M = long long, typename Op = std::multiplies<M>>
struct WeightAlgebra {
  using Object = int;
  using Morphism = M;

  M one{1};
  Op op{};
  std::map<std::string, M> weights;

  Object type_object(const std::string&) const { return 0; }
  Object unit_object() const { return 0; }
  Object tensor_objects(Object, Object) const { return 0; }
  Object seq_objects(Object, Object) const { return 0; }

  Morphism generator_morphism(const std::string& g) const {
    auto it = weights.find(g);
    if (it == weights.end())
      throw eval_error("no weight assigned to generator '" + g + "'");
    return it->second;
  }
  Morphism identity(Object) const { return one; }
  Morphism compose(const Morphism& a, const Morphism& b) const { return op(a, b); }
  Morphism tensor(const Morphism& a, const Morphism& b) const { return op(a, b); }
  Morphism sequence(const Morphism& a, const Morphism& b) const { return op(a, b); }
  Morphism dist(Object, Object, Object, Object) const { return one; }
  Morphism sym(Object, Object) const { return one; }
};

// The diagram category over a signature interpreting itself; evaluation
// through it reproduces the input diagram.
struct SelfAlgebra {
  std::shared_ptr<const Signature> sig;

  using Object = Expression;
  using Morphism = StringDiagram;

  Object type_object(const std::string& t) const {
    if (!sig->has_type(t)) throw unknown_type("unknown type '" + t + "'");
    return Expression::make_atom(t);
  }
  Object unit_object() const { return Expression::unit(); }
  Object tensor_objects(const Object& a, const Object& b) const {
    return par_e(a, b);
  }
  Object seq_objects(const Object& a, const Object& b) const {
    return seq_e(a, b);
  }

  Morphism generator_morphism(const std::string& g) const {
    return from_generator(sig, g);
  }
  Morphism identity(const Object& e) const { return duodiag::identity(sig, e); }
  Morphism compose(const Morphism& a, const Morphism& b) const {
    return duodiag::compose(a, b);
  }
  Morphism tensor(const Morphism& a, const Morphism& b) const {
    return duodiag::tensor(a, b);
  }
  Morphism sequence(const Morphism& a, const Morphism& b) const {
    return duodiag::sequence(a, b);
  }
  Morphism dist(const Object& x, const Object& y, const Object& z,
                const Object& w) const {
    return make_dist_diagram(sig, x, y, z, w);
  }
  Morphism sym(const Object& x, const Object& y) const {
    return make_sym_diagram(sig, x, y);
  }
};

}  // namespace duodiag
