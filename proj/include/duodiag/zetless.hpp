#pragma once

// The zetless-poset / duoidal-expression correspondence: encode, decode,
// inclusions with canonical witnesses, synthesis of formal structure terms
// from inclusions, and enumeration of all zetless posets of a given size.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "poset.hpp"

namespace duodiag {

// Element order of encode(e) follows list_type(e).
inline TypedPoset encode(const Expression& e) {
  switch (e.kind) {
    case expr_kind::unit: return TypedPoset{};
    case expr_kind::atom: {
      TypedPoset p;
      p.labels = {e.atom};
      p.leq = make_rel(1);
      p.leq[0][0] = 1;
      return p;
    }
    case expr_kind::seq:
    case expr_kind::par: {
      TypedPoset acc;
      for (const auto& c : e.children) {
        TypedPoset pc = encode(c);
        acc = e.kind == expr_kind::seq ? seq(acc, pc) : tensor(acc, pc);
      }
      return acc;
    }
  }
  return TypedPoset{};
}

// decode returns the canonical expression together with the poset element
// backing each leaf (in list_type order).
struct decode_result {
  Expression expr;
  std::vector<int> leaf_order;  // leaf_order[k] = element index of leaf k
};

inline decode_result decode_with_order(const TypedPoset& p) {
  const std::size_t n = p.size();
  if (n == 0) return {Expression::unit(), {}};
  if (n == 1) return {Expression::make_atom(p.labels[0]), {0}};

  auto recurse_components = [&](std::vector<std::vector<int>> comps,
                                bool as_par) -> decode_result {
    decode_result out;
    out.expr = Expression::unit();
    for (const auto& comp : comps) {
      decode_result sub = decode_with_order(restrict_to(p, comp));
      out.expr = as_par ? par_e(out.expr, sub.expr) : seq_e(out.expr, sub.expr);
      for (int local : sub.leaf_order) out.leaf_order.push_back(comp[local]);
    }
    return out;
  };

  auto conn = connected_components(p);
  if (conn.size() >= 2) {
    // tensor split; components ordered by canonical sort key (stable on the
    // original smallest-element order for isomorphic ties)
    std::vector<std::string> keys(conn.size());
    for (std::size_t i = 0; i < conn.size(); ++i)
      keys[i] = component_sort_key(restrict_to(p, conn[i]));
    std::vector<int> order(conn.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<std::vector<int>> sorted;
    for (int i : order) sorted.push_back(conn[i]);
    return recurse_components(std::move(sorted), true);
  }

  auto icomp = incomparable_components(p);
  if (icomp.size() >= 2) {
    // sequence split; elements of distinct incomparable components are
    // comparable, and the direction is uniform, so this sort is total
    std::sort(icomp.begin(), icomp.end(),
              [&](const std::vector<int>& a, const std::vector<int>& b) {
                return p.le(a[0], b[0]);
              });
    return recurse_components(std::move(icomp), false);
  }

  throw not_zetless("poset is prime for both operations and not a singleton");
}

inline Expression decode(const TypedPoset& p) { return decode_with_order(p).expr; }

// --- inclusions ----------------------------------------------------------

// A label-preserving order-preserving bijection source -> target.
struct Inclusion {
  TypedPoset source, target;
  std::vector<int> map;  // map[i] = target index of source element i
};

namespace detail {
inline bool inclusion_extend(const TypedPoset& s, const TypedPoset& t,
                             std::vector<int>& map, std::vector<char>& used,
                             std::size_t i) {
  if (i == s.size()) return true;
  for (int cand = 0; cand < int(t.size()); ++cand) {
    if (used[cand] || t.labels[cand] != s.labels[i]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < i && ok; ++j) {
      if (s.le(int(j), int(i)) && !t.le(map[j], cand)) ok = false;
      if (s.le(int(i), int(j)) && !t.le(cand, map[j])) ok = false;
    }
    if (!ok) continue;
    map[i] = cand;
    used[cand] = 1;
    if (inclusion_extend(s, t, map, used, i + 1)) return true;
    used[cand] = 0;
  }
  return false;
}
}  // namespace detail

// Lexicographically least witness, or nullopt. Target may have strictly more
// relations; the reverse direction needs its own call.
inline std::optional<Inclusion> inclusion_exists(const TypedPoset& s,
                                                 const TypedPoset& t) {
  if (s.size() != t.size()) return std::nullopt;
  std::vector<int> map(s.size(), -1);
  std::vector<char> used(t.size(), 0);
  if (!detail::inclusion_extend(s, t, map, used, 0)) return std::nullopt;
  return Inclusion{s, t, std::move(map)};
}

// i1.target and i2.source must be the same poset up to storage order; merely
// isomorphic storages are bridged through their canonical permutations.
inline Inclusion compose_inclusions(const Inclusion& i1, const Inclusion& i2) {
  std::vector<int> bridge(i1.target.size());
  if (i1.target.labels == i2.source.labels && i1.target.leq == i2.source.leq) {
    std::iota(bridge.begin(), bridge.end(), 0);
  } else if (iso_equal(i1.target, i2.source)) {
    auto ct = canonical_form(i1.target), cs = canonical_form(i2.source);
    for (std::size_t k = 0; k < bridge.size(); ++k) bridge[ct.perm[k]] = cs.perm[k];
  } else {
    throw validation_error(validation_code::boundary_mismatch,
                           "inclusion composition: middle posets not isomorphic");
  }
  Inclusion r;
  r.source = i1.source;
  r.target = i2.target;
  r.map.resize(i1.map.size());
  for (std::size_t i = 0; i < i1.map.size(); ++i)
    r.map[i] = i2.map[bridge[i1.map[i]]];
  return r;
}

// --- formal structure terms ----------------------------------------------

// Formal composites of the canonical morphisms of a physical duoidal
// category. Source/target are duoidal expressions.
struct StructureTerm {
  enum class kind_t { id, dist, sym, seq_of, par_of, compose } kind;
  Expression a, b, c, d;            // id: a | sym: a,b | dist: a,b,c,d
  std::vector<StructureTerm> parts;  // seq_of / par_of / compose

  static StructureTerm make_id(Expression e) {
    StructureTerm t;
    t.kind = kind_t::id;
    t.a = std::move(e);
    return t;
  }
  static StructureTerm make_sym(Expression x, Expression y) {
    StructureTerm t;
    t.kind = kind_t::sym;
    t.a = std::move(x);
    t.b = std::move(y);
    return t;
  }
  // dist(X,Y,Z,W): (X>Z)*(Y>W) -> (X*Y)>(Z*W)
  static StructureTerm make_dist(Expression x, Expression y, Expression z,
                                 Expression w) {
    StructureTerm t;
    t.kind = kind_t::dist;
    t.a = std::move(x);
    t.b = std::move(y);
    t.c = std::move(z);
    t.d = std::move(w);
    return t;
  }
  static StructureTerm make_list(kind_t k, std::vector<StructureTerm> parts) {
    StructureTerm t;
    t.kind = k;
    t.parts = std::move(parts);
    return t;
  }

  Expression source() const {
    switch (kind) {
      case kind_t::id: return a;
      case kind_t::sym: return par_e(a, b);
      case kind_t::dist: return par_e(seq_e(a, c), seq_e(b, d));
      case kind_t::seq_of:
      case kind_t::par_of: {
        Expression e = Expression::unit();
        for (const auto& p : parts)
          e = kind == kind_t::seq_of ? seq_e(e, p.source())
                                     : par_e(e, p.source());
        return e;
      }
      case kind_t::compose:
        return parts.empty() ? Expression::unit() : parts.front().source();
    }
    return Expression::unit();
  }
  Expression target() const {
    switch (kind) {
      case kind_t::id: return a;
      case kind_t::sym: return par_e(b, a);
      case kind_t::dist: return seq_e(par_e(a, b), par_e(c, d));
      case kind_t::seq_of:
      case kind_t::par_of: {
        Expression e = Expression::unit();
        for (const auto& p : parts)
          e = kind == kind_t::seq_of ? seq_e(e, p.target())
                                     : par_e(e, p.target());
        return e;
      }
      case kind_t::compose:
        return parts.empty() ? Expression::unit() : parts.back().target();
    }
    return Expression::unit();
  }
};

inline std::string term_to_string(const StructureTerm& t) {
  using k = StructureTerm::kind_t;
  auto list = [&](const char* name) {
    std::string s = std::string(name) + "[";
    for (std::size_t i = 0; i < t.parts.size(); ++i) {
      if (i) s += ", ";
      s += term_to_string(t.parts[i]);
    }
    return s + "]";
  };
  switch (t.kind) {
    case k::id: return "id(" + print(t.a) + ")";
    case k::sym: return "sym(" + print(t.a) + ", " + print(t.b) + ")";
    case k::dist:
      return "dist(" + print(t.a) + ", " + print(t.b) + ", " + print(t.c) +
             ", " + print(t.d) + ")";
    case k::seq_of: return list("seq");
    case k::par_of: return list("par");
    case k::compose: return list("comp");
  }
  return "?";
}

// Does every compose step chain syntactically?
inline bool term_well_typed(const StructureTerm& t) {
  using k = StructureTerm::kind_t;
  for (const auto& p : t.parts)
    if (!term_well_typed(p)) return false;
  if (t.kind == k::compose)
    for (std::size_t i = 0; i + 1 < t.parts.size(); ++i)
      if (t.parts[i].target() != t.parts[i + 1].source()) return false;
  return true;
}

namespace detail {

// Drop identity layers; flatten nested composes; collapse singletons.
inline StructureTerm simplify_term(const StructureTerm& t) {
  using k = StructureTerm::kind_t;
  switch (t.kind) {
    case k::id:
    case k::sym:
    case k::dist: return t;
    case k::seq_of:
    case k::par_of: {
      std::vector<StructureTerm> parts;
      for (const auto& p : t.parts) {
        auto sp = simplify_term(p);
        if (sp.kind == k::id && sp.a.is_unit()) continue;  // unit factor
        parts.push_back(std::move(sp));
      }
      if (parts.empty()) return StructureTerm::make_id(Expression::unit());
      if (parts.size() == 1) return parts[0];
      bool all_id = true;
      for (const auto& p : parts) all_id &= p.kind == k::id;
      auto out = StructureTerm::make_list(t.kind, std::move(parts));
      if (all_id) return StructureTerm::make_id(out.source());
      return out;
    }
    case k::compose: {
      std::vector<StructureTerm> parts;
      for (const auto& p : t.parts) {
        auto sp = simplify_term(p);
        if (sp.kind == k::id) continue;
        if (sp.kind == k::compose) {
          for (auto& q : sp.parts) parts.push_back(std::move(q));
        } else {
          parts.push_back(std::move(sp));
        }
      }
      if (parts.empty()) return StructureTerm::make_id(t.source());
      if (parts.size() == 1) return parts[0];
      return StructureTerm::make_list(k::compose, std::move(parts));
    }
  }
  return t;
}

// Leaf index ranges of an expression's children.
inline std::vector<std::pair<int, int>> leaf_spans(const Expression& e) {
  std::vector<std::pair<int, int>> spans;
  int at = 0;
  for (const auto& c : e.children) {
    int sz = int(atom_count(c));
    spans.emplace_back(at, at + sz);
    at += sz;
  }
  return spans;
}

// Interleaving layer used by the mixed case: from a tensor of rows (each a
// sequence of column entries) to the sequence of columnwise tensors, built
// out of dist instances.
inline StructureTerm interleave_two(const std::vector<Expression>& ra,
                                    const std::vector<Expression>& rb) {
  using k = StructureTerm::kind_t;
  Expression a1 = ra[0], b1 = rb[0];
  if (ra.size() == 1)
    return StructureTerm::make_id(par_e(a1, b1));
  Expression rest_a = Expression::unit(), rest_b = Expression::unit();
  for (std::size_t j = 1; j < ra.size(); ++j) {
    rest_a = seq_e(rest_a, ra[j]);
    rest_b = seq_e(rest_b, rb[j]);
  }
  StructureTerm d = StructureTerm::make_dist(a1, b1, rest_a, rest_b);
  StructureTerm head = (d.source() == d.target())
                           ? StructureTerm::make_id(d.source())
                           : d;
  StructureTerm tail = interleave_two(
      std::vector<Expression>(ra.begin() + 1, ra.end()),
      std::vector<Expression>(rb.begin() + 1, rb.end()));
  StructureTerm step =
      StructureTerm::make_list(k::seq_of, {StructureTerm::make_id(par_e(a1, b1)), tail});
  return simplify_term(StructureTerm::make_list(k::compose, {head, step}));
}

inline StructureTerm interleave(const std::vector<std::vector<Expression>>& rows) {
  using k = StructureTerm::kind_t;
  if (rows.empty()) return StructureTerm::make_id(Expression::unit());
  if (rows.size() == 1) {
    Expression e = Expression::unit();
    for (const auto& x : rows[0]) e = seq_e(e, x);
    return StructureTerm::make_id(e);
  }
  StructureTerm first = interleave_two(rows[0], rows[1]);
  std::vector<StructureTerm> layer{first};
  for (std::size_t i = 2; i < rows.size(); ++i) {
    Expression e = Expression::unit();
    for (const auto& x : rows[i]) e = seq_e(e, x);
    layer.push_back(StructureTerm::make_id(e));
  }
  StructureTerm stage = StructureTerm::make_list(k::par_of, std::move(layer));
  std::vector<std::vector<Expression>> merged;
  std::vector<Expression> row0;
  for (std::size_t j = 0; j < rows[0].size(); ++j)
    row0.push_back(par_e(rows[0][j], rows[1][j]));
  merged.push_back(std::move(row0));
  for (std::size_t i = 2; i < rows.size(); ++i) merged.push_back(rows[i]);
  StructureTerm rest = interleave(merged);
  return simplify_term(StructureTerm::make_list(k::compose, {stage, rest}));
}

inline StructureTerm synth_rec(const Expression& e1, const Expression& e2,
                               const std::vector<int>& f);

// Children of e (treating a non-seq/par expression as its own single child).
inline std::vector<Expression> children_of(const Expression& e, expr_kind op) {
  if (e.kind == op) return e.children;
  if (e.is_unit()) return {};
  return {e};
}

inline StructureTerm synth_seq_case(const Expression& e1, const Expression& e2,
                                    const std::vector<int>& f) {
  using k = StructureTerm::kind_t;
  if (e2.kind != expr_kind::seq) {
    // a valid inclusion out of a sequence forces a sequence shape on the
    // target; anything else means the supplied map was not order-preserving
    throw no_such_structure_map("sequence source against non-sequence target");
  }
  auto gs = e1.children;
  auto gspan = leaf_spans(e1);
  auto fs = e2.children;
  auto fspan = leaf_spans(e2);
  // assign each target factor to the source block covering its leaves
  std::vector<int> inv(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) inv[f[i]] = int(i);
  std::vector<StructureTerm> recs;
  std::size_t fj = 0;
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    Expression target_i = Expression::unit();
    std::vector<int> fi(gspan[gi].second - gspan[gi].first, -1);
    int offset = 0;
    while (fj < fs.size()) {
      int rep = inv[fspan[fj].first];  // source leaf of this factor's first leaf
      if (rep < gspan[gi].first || rep >= gspan[gi].second) break;
      for (int t = fspan[fj].first; t < fspan[fj].second; ++t) {
        int srcleaf = inv[t];
        if (srcleaf < gspan[gi].first || srcleaf >= gspan[gi].second)
          throw no_such_structure_map("target factor straddles source blocks");
        fi[srcleaf - gspan[gi].first] = offset + (t - fspan[fj].first);
      }
      target_i = seq_e(target_i, fs[fj]);
      offset += fspan[fj].second - fspan[fj].first;
      ++fj;
    }
    if (target_i.is_unit() && gspan[gi].second > gspan[gi].first)
      throw no_such_structure_map("source block has no target factors");
    recs.push_back(synth_rec(gs[gi], target_i, fi));
  }
  if (fj != fs.size())
    throw no_such_structure_map("target factors left over");
  return StructureTerm::make_list(k::seq_of, std::move(recs));
}

inline StructureTerm synth_par_case(const Expression& e1, const Expression& e2,
                                    const std::vector<int>& f) {
  using k = StructureTerm::kind_t;
  auto gs = e1.children;
  auto gspan = leaf_spans(e1);
  auto fspan = leaf_spans(e2);
  // each connected source child lands in exactly one target component
  std::vector<int> sigma(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    int j = -1;
    for (int l = gspan[i].first; l < gspan[i].second; ++l) {
      int jj = -1;
      for (std::size_t cand = 0; cand < fspan.size(); ++cand)
        if (f[l] >= fspan[cand].first && f[l] < fspan[cand].second)
          jj = int(cand);
      if (j == -1) j = jj;
      if (j != jj)
        throw no_such_structure_map("source component straddles target components");
    }
    sigma[i] = j;
  }

  // stable-sort children by target component, realized with adjacent swaps
  std::vector<int> cur(gs.size());
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<StructureTerm> layers;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t p = 0; p + 1 < cur.size(); ++p) {
      if (sigma[cur[p]] <= sigma[cur[p + 1]]) continue;
      std::vector<StructureTerm> row;
      for (std::size_t q = 0; q < cur.size(); ++q) {
        if (q == p) {
          row.push_back(StructureTerm::make_sym(gs[cur[p]], gs[cur[p + 1]]));
        } else if (q != p + 1) {
          row.push_back(StructureTerm::make_id(gs[cur[q]]));
        }
      }
      layers.push_back(StructureTerm::make_list(k::par_of, std::move(row)));
      std::swap(cur[p], cur[p + 1]);
      moved = true;
    }
  }

  std::vector<StructureTerm> recs;
  std::size_t at = 0;
  for (std::size_t j = 0; j < fspan.size(); ++j) {
    Expression src_j = Expression::unit();
    std::vector<int> members;
    while (at < cur.size() && sigma[cur[at]] == int(j)) {
      members.push_back(cur[at]);
      src_j = par_e(src_j, gs[cur[at]]);
      ++at;
    }
    if (members.empty())
      throw no_such_structure_map("target component with no source leaves");
    std::vector<int> fj(atom_count(src_j));
    int offset = 0;
    for (int gi : members) {
      for (int l = gspan[gi].first; l < gspan[gi].second; ++l)
        fj[offset + (l - gspan[gi].first)] = f[l] - fspan[j].first;
      offset += gspan[gi].second - gspan[gi].first;
    }
    recs.push_back(synth_rec(src_j, e2.children[j], fj));
  }
  layers.push_back(StructureTerm::make_list(k::par_of, std::move(recs)));
  return simplify_term(StructureTerm::make_list(k::compose, std::move(layers)));
}

inline StructureTerm synth_mixed_case(const Expression& e1, const Expression& e2,
                                      const std::vector<int>& f) {
  using k = StructureTerm::kind_t;
  auto gs = e1.children;
  auto gspan = leaf_spans(e1);
  auto fsz = children_of(e2, expr_kind::seq);
  auto fspan = leaf_spans(e2);
  const std::size_t n = gs.size(), m = fsz.size();

  // split every source component by target section
  std::vector<std::vector<Expression>> rows(n, std::vector<Expression>(m));
  std::vector<std::vector<std::vector<int>>> lij(n);  // local leaves per cell
  std::vector<std::vector<std::vector<int>>> ordij(n);
  for (std::size_t i = 0; i < n; ++i) {
    lij[i].resize(m);
    ordij[i].resize(m);
    TypedPoset pi = encode(gs[i]);
    for (int l = gspan[i].first; l < gspan[i].second; ++l)
      for (std::size_t j = 0; j < m; ++j)
        if (f[l] >= fspan[j].first && f[l] < fspan[j].second)
          lij[i][j].push_back(l - gspan[i].first);
    for (std::size_t j = 0; j < m; ++j) {
      auto dr = decode_with_order(restrict_to(pi, lij[i][j]));
      rows[i][j] = dr.expr;
      ordij[i][j] = dr.leaf_order;
    }
  }

  // stage 1: inside each component, coerce to the sectioned sequence
  std::vector<StructureTerm> stage1;
  for (std::size_t i = 0; i < n; ++i) {
    Expression ti = Expression::unit();
    std::vector<int> fi(gspan[i].second - gspan[i].first, -1);
    int offset = 0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t p = 0; p < ordij[i][j].size(); ++p)
        fi[lij[i][j][ordij[i][j][p]]] = offset + int(p);
      ti = seq_e(ti, rows[i][j]);
      offset += int(ordij[i][j].size());
    }
    stage1.push_back(synth_rec(gs[i], ti, fi));
  }

  // stage 2: distribute
  StructureTerm mid = interleave(rows);

  // stage 3: inside each section, coerce the columnwise tensor to the target
  std::vector<StructureTerm> stage3;
  for (std::size_t j = 0; j < m; ++j) {
    Expression sj = Expression::unit();
    std::vector<int> gj;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < ordij[i][j].size(); ++p) {
        int global = gspan[i].first + lij[i][j][ordij[i][j][p]];
        gj.push_back(f[global] - fspan[j].first);
      }
      sj = par_e(sj, rows[i][j]);
    }
    stage3.push_back(synth_rec(sj, fsz[j], gj));
  }

  return simplify_term(StructureTerm::make_list(
      k::compose,
      {StructureTerm::make_list(k::par_of, std::move(stage1)), mid,
       StructureTerm::make_list(k::seq_of, std::move(stage3))}));
}

inline StructureTerm synth_rec(const Expression& e1, const Expression& e2,
                               const std::vector<int>& f) {
  if (e1.is_unit()) {
    if (!e2.is_unit()) throw no_such_structure_map("size mismatch");
    return StructureTerm::make_id(Expression::unit());
  }
  if (e1.is_atom()) {
    if (!e2.is_atom() || e1.atom != e2.atom || f != std::vector<int>{0})
      throw no_such_structure_map("atom mismatch");
    return StructureTerm::make_id(e1);
  }
  if (e1.is_seq()) return synth_seq_case(e1, e2, f);
  // e1 is par
  if (e2.is_par()) return synth_par_case(e1, e2, f);
  if (e2.is_seq()) return synth_mixed_case(e1, e2, f);
  throw no_such_structure_map("component count mismatch");
}

}  // namespace detail

// Formal structure term realizing an inclusion between expressions; the
// term's boundaries are exactly e1 and e2. leaf_map sends leaf positions of
// e1 to leaf positions of e2 and must come from a valid inclusion
// encode(e1) -> encode(e2).
inline StructureTerm synthesize_structure_map(const Expression& e1,
                                              const Expression& e2,
                                              const std::vector<int>& leaf_map) {
  if (atom_count(e1) != atom_count(e2) || leaf_map.size() != atom_count(e1))
    throw no_such_structure_map("leaf map arity mismatch");
  return detail::simplify_term(detail::synth_rec(e1, e2, leaf_map));
}

namespace detail {

// Reorder Par children (recursively) by the least of their leaves' values,
// where vals[k] is the value of leaf k in the expression's leaf order.
// Returns the new expression plus its leaves' values in the new leaf order.
struct reordered {
  Expression e;
  long min = std::numeric_limits<long>::max();
  std::vector<long> vals;
};

inline reordered reorder_pars(const Expression& e, const std::vector<long>& vals) {
  reordered out;
  switch (e.kind) {
    case expr_kind::unit:
      out.e = e;
      return out;
    case expr_kind::atom:
      out.e = e;
      out.min = vals.at(0);
      out.vals = vals;
      return out;
    default: {
      std::vector<reordered> parts;
      std::size_t at = 0;
      for (const auto& c : e.children) {
        std::size_t n = atom_count(c);
        std::vector<long> slice(vals.begin() + at, vals.begin() + at + n);
        at += n;
        parts.push_back(reorder_pars(c, slice));
      }
      if (e.kind == expr_kind::par)
        std::stable_sort(parts.begin(), parts.end(),
                         [](const reordered& a, const reordered& b) {
                           return a.min < b.min;
                         });
      std::vector<Expression> kids;
      for (auto& p : parts) {
        out.min = std::min(out.min, p.min);
        out.vals.insert(out.vals.end(), p.vals.begin(), p.vals.end());
        kids.push_back(std::move(p.e));
      }
      out.e = e.kind == expr_kind::par ? par_e(kids) : seq_e(kids);
      return out;
    }
  }
}

}  // namespace detail

// Synthesize from an inclusion of posets. Endpoint expressions decode the two
// posets, with Par children ordered to follow the inclusion (source blocks by
// image position, target blocks by preimage position) so that the recursion
// introduces no incidental symmetries; either way they are sym_equal to the
// canonical decodes.
inline StructureTerm synthesize_structure_map(const Inclusion& inc) {
  auto ds = decode_with_order(inc.source);
  auto dt = decode_with_order(inc.target);
  const std::size_t n = ds.leaf_order.size();
  std::vector<int> tgt_pos(inc.target.size());
  for (std::size_t k = 0; k < dt.leaf_order.size(); ++k)
    tgt_pos[dt.leaf_order[k]] = int(k);

  std::vector<long> sv(n);
  for (std::size_t k = 0; k < n; ++k)
    sv[k] = tgt_pos[inc.map[ds.leaf_order[k]]];
  auto rs = detail::reorder_pars(ds.expr, sv);

  std::vector<long> pre(n);
  for (std::size_t k = 0; k < n; ++k) pre[rs.vals[k]] = long(k);
  auto rt = detail::reorder_pars(dt.expr, pre);

  std::vector<int> leaf_map(n);
  for (std::size_t j = 0; j < n; ++j) leaf_map[rt.vals[j]] = int(j);
  return synthesize_structure_map(rs.e, rt.e, leaf_map);
}

// --- enumeration ----------------------------------------------------------

namespace detail {

// All reduced expressions with n atoms over the given types, up to reordering
// of Par children (which are kept sorted by their poset sort key).
inline std::vector<Expression> enum_exprs(int n, const std::vector<std::string>& types);

inline std::vector<Expression> enum_non(int n, const std::vector<std::string>& types,
                                        expr_kind excluded) {
  std::vector<Expression> out;
  for (auto& e : enum_exprs(n, types))
    if (e.kind != excluded) out.push_back(e);
  return out;
}

inline void enum_par_rest(int n, const std::vector<std::string>& types,
                          const std::string& min_key, std::vector<Expression>& parts,
                          std::vector<Expression>& out) {
  if (n == 0) {
    if (parts.size() >= 2) out.push_back(par_e(parts));
    return;
  }
  // the first child never takes everything: a reduced Par has >= 2 children
  const int max_sz = parts.empty() ? n - 1 : n;
  for (int sz = 1; sz <= max_sz; ++sz)
    for (auto& c : enum_non(sz, types, expr_kind::par)) {
      std::string key = component_sort_key(encode(c));
      if (key < min_key) continue;
      parts.push_back(c);
      enum_par_rest(n - sz, types, key, parts, out);
      parts.pop_back();
    }
}

inline void enum_seq_rest(int n, const std::vector<std::string>& types,
                          std::vector<Expression>& parts,
                          std::vector<Expression>& out) {
  if (n == 0) {
    if (parts.size() >= 2) out.push_back(seq_e(parts));
    return;
  }
  const int max_sz = parts.empty() ? n - 1 : n;
  for (int sz = 1; sz <= max_sz; ++sz)
    for (auto& c : enum_non(sz, types, expr_kind::seq)) {
      parts.push_back(c);
      enum_seq_rest(n - sz, types, parts, out);
      parts.pop_back();
    }
}

inline std::vector<Expression> enum_exprs(int n, const std::vector<std::string>& types) {
  std::vector<Expression> out;
  if (n == 0) {
    out.push_back(Expression::unit());
    return out;
  }
  if (n == 1) {
    for (const auto& t : types) out.push_back(Expression::make_atom(t));
    return out;
  }
  std::vector<Expression> parts;
  enum_seq_rest(n, types, parts, out);
  enum_par_rest(n, types, "", parts, out);
  return out;
}

}  // namespace detail

// All zetless posets of cardinality n over the given types, one per
// type-preserving isomorphism class, sorted by canonical key.
inline std::vector<TypedPoset> enumerate_zetless(
    int n, const std::vector<std::string>& types) {
  if (n < 0) throw error("enumerate: negative size");
  if (n > 7) throw size_limit("enumerate: size capped at 7");
  std::vector<TypedPoset> out;
  for (auto& e : detail::enum_exprs(n, types)) out.push_back(encode(e));
  std::sort(out.begin(), out.end(), [](const TypedPoset& a, const TypedPoset& b) {
    return component_sort_key(a) < component_sort_key(b);
  });
  return out;
}

}  // namespace duodiag
