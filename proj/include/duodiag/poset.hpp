#pragma once

// Typed finite posets with a closed order relation, plus the zetless-side
// toolkit: connectivity, Z-shape detection, primality, intervals,
// substitution, bracketed subposets, saturation, and canonical forms for
// equality up to label-preserving order isomorphism.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace duodiag {

using Rel = std::vector<std::vector<char>>;

inline Rel make_rel(std::size_t n) {
  return Rel(n, std::vector<char>(n, 0));
}

inline void rel_reflexive(Rel& r) {
  for (std::size_t i = 0; i < r.size(); ++i) r[i][i] = 1;
}

// Floyd-Warshall style closure; fine at the sizes this library handles.
inline void rel_transitive_close(Rel& r) {
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
}

inline std::optional<std::pair<int, int>> rel_antisymmetry_break(const Rel& r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      if (r[i][j] && r[j][i]) return std::make_pair(int(i), int(j));
  return std::nullopt;
}

struct TypedPoset {
  std::vector<std::string> labels;
  Rel leq;  // closed: reflexive, transitive, antisymmetric

  std::size_t size() const { return labels.size(); }
  bool le(int i, int j) const { return leq[i][j]; }
  bool incomparable(int i, int j) const { return !leq[i][j] && !leq[j][i]; }
};

// Builds a poset from generating pairs (0-based indices), closing the
// relation. AntisymmetryViolation if the closure relates two elements both
// ways.
inline TypedPoset from_generators(std::vector<std::string> labels,
                                  const std::vector<std::pair<int, int>>& pairs) {
  TypedPoset p;
  p.labels = std::move(labels);
  p.leq = make_rel(p.size());
  rel_reflexive(p.leq);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= int(p.size()) || b >= int(p.size()))
      throw error("relation index out of range");
    p.leq[a][b] = 1;
  }
  rel_transitive_close(p.leq);
  if (auto bad = rel_antisymmetry_break(p.leq))
    throw antisymmetry_violation("elements " + std::to_string(bad->first) +
                                 " and " + std::to_string(bad->second) +
                                 " are related both ways");
  return p;
}

// Sequencing: disjoint union with everything in p below everything in q.
inline TypedPoset seq(const TypedPoset& p, const TypedPoset& q) {
  TypedPoset r;
  r.labels = p.labels;
  r.labels.insert(r.labels.end(), q.labels.begin(), q.labels.end());
  const std::size_t n = p.size(), m = q.size();
  r.leq = make_rel(n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.leq[i][j] = p.leq[i][j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r.leq[n + i][n + j] = q.leq[i][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) r.leq[i][n + j] = 1;
  return r;
}

// Tensor: disjoint union, no cross relations.
inline TypedPoset tensor(const TypedPoset& p, const TypedPoset& q) {
  TypedPoset r = seq(p, q);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r.leq[i][p.size() + j] = 0;
  return r;
}

// Induced subposet on the given (distinct) element indices, in given order.
inline TypedPoset restrict_to(const TypedPoset& p, const std::vector<int>& idx) {
  TypedPoset r;
  r.leq = make_rel(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    r.labels.push_back(p.labels[idx[i]]);
    for (std::size_t j = 0; j < idx.size(); ++j)
      r.leq[i][j] = p.leq[idx[i]][idx[j]];
  }
  return r;
}

// Covering pairs (a, b): a < b with nothing strictly between. The transitive
// reflexive closure of the covers is the whole relation.
inline std::vector<std::pair<int, int>> covering_pairs(const TypedPoset& p) {
  const int n = int(p.size());
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !p.le(a, b)) continue;
      bool covering = true;
      for (int k = 0; k < n && covering; ++k)
        if (k != a && k != b && p.le(a, k) && p.le(k, b)) covering = false;
      if (covering) out.emplace_back(a, b);
    }
  return out;
}

namespace detail {
// Components of an undirected adjacency predicate, listed by smallest member,
// members ascending.
template <class Adj>
std::vector<std::vector<int>> graph_components(std::size_t n, Adj adj) {
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{int(s)};
    seen[s] = 1;
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (!seen[j] && adj(comp[k], int(j))) {
          seen[j] = 1;
          comp.push_back(int(j));
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}
}  // namespace detail

// Components of the comparability graph (x adjacent to y iff comparable).
inline std::vector<std::vector<int>> connected_components(const TypedPoset& p) {
  return detail::graph_components(p.size(), [&](int i, int j) {
    return i != j && (p.le(i, j) || p.le(j, i));
  });
}

// Components of the incomparability graph (x adjacent to y iff incomparable).
inline std::vector<std::vector<int>> incomparable_components(const TypedPoset& p) {
  return detail::graph_components(p.size(), [&](int i, int j) {
    return i != j && p.incomparable(i, j);
  });
}

inline bool is_connected(const TypedPoset& p) {
  return connected_components(p).size() <= 1;
}
inline bool is_incomparable_connected(const TypedPoset& p) {
  return incomparable_components(p).size() <= 1;
}

// A zet is an induced x <= u >= y <= v with all other pairs among the four
// incomparable. Returns a witness in that order, if any.
struct zet_witness {
  int x, u, y, v;
};

inline std::optional<zet_witness> find_zet(const TypedPoset& p) {
  const int n = int(p.size());
  auto lt = [&](int i, int j) { return p.le(i, j) && !p.le(j, i); };
  for (int x = 0; x < n; ++x)
    for (int u = 0; u < n; ++u)
      for (int y = 0; y < n; ++y)
        for (int v = 0; v < n; ++v) {
          if (x == u || x == y || x == v || u == y || u == v || y == v) continue;
          if (lt(x, u) && lt(y, u) && lt(y, v) && p.incomparable(x, y) &&
              p.incomparable(x, v) && p.incomparable(u, v))
            return zet_witness{x, u, y, v};
        }
  return std::nullopt;
}

inline bool is_zetless(const TypedPoset& p) { return !find_zet(p); }

// Do a and b admit a common lower bound (span) or upper bound (cospan)?
inline bool has_span_or_cospan(const TypedPoset& p, int a, int b) {
  for (int w = 0; w < int(p.size()); ++w) {
    if (p.le(w, a) && p.le(w, b)) return true;
    if (p.le(a, w) && p.le(b, w)) return true;
  }
  return false;
}

// Primality classification. par_prime = connected (no nontrivial tensor
// factorization); seq_prime = incomparable connected (no nontrivial
// sequencing). A non-zetless poset can be both; that case reports par_prime
// with the ambiguity flag set.
struct primality_result {
  enum class kind_t { empty, singleton, par_prime, seq_prime } kind;
  bool ambiguous_both_prime = false;
};

inline primality_result primality(const TypedPoset& p) {
  if (p.size() == 0) return {primality_result::kind_t::empty, false};
  if (p.size() == 1) return {primality_result::kind_t::singleton, false};
  const bool conn = is_connected(p);
  const bool iconn = is_incomparable_connected(p);
  if (conn && iconn) return {primality_result::kind_t::par_prime, true};
  if (conn) return {primality_result::kind_t::par_prime, false};
  if (iconn) return {primality_result::kind_t::seq_prime, false};
  throw error("poset is disconnected in both graphs; impossible for n >= 2");
}

// --- canonical form -----------------------------------------------------
//
// Equality of TypedPosets is up to label-preserving order isomorphism.
// Elements are partitioned into invariant classes (label + refined
// degree profile), then all class-respecting orderings are searched for the
// lexicographically least (labels, relation bits) encoding.

struct canonical_result {
  std::string key;
  std::vector<int> perm;  // perm[k] = original index placed at position k
};

namespace detail {

inline std::vector<std::string> iso_invariants(const TypedPoset& p) {
  const int n = int(p.size());
  std::vector<std::string> inv(n);
  for (int i = 0; i < n; ++i) {
    int down = 0, up = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (p.le(j, i)) ++down;
      if (p.le(i, j)) ++up;
    }
    inv[i] = p.labels[i] + "#" + std::to_string(down) + "#" + std::to_string(up);
  }
  for (int round = 0; round < 3; ++round) {
    std::vector<std::string> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> downs, ups;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (p.le(j, i)) downs.push_back(inv[j]);
        if (p.le(i, j)) ups.push_back(inv[j]);
      }
      std::sort(downs.begin(), downs.end());
      std::sort(ups.begin(), ups.end());
      next[i] = inv[i] + "|D";
      for (auto& s : downs) next[i] += s + ";";
      next[i] += "|U";
      for (auto& s : ups) next[i] += s + ";";
    }
    inv = std::move(next);
  }
  return inv;
}

struct canon_search {
  const TypedPoset& p;
  std::vector<int> slot_class;         // class id required at each position
  std::vector<std::vector<int>> classes;  // members (ascending) per class id
  std::vector<char> used;
  std::vector<int> ord;
  std::string cur;
  std::string best;
  std::vector<int> best_perm;
  bool have_best = false;

  explicit canon_search(const TypedPoset& poset) : p(poset) {}

  void run() {
    const int n = int(p.size());
    auto inv = iso_invariants(p);
    std::vector<std::string> keys(inv);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    classes.resize(keys.size());
    std::vector<int> elem_class(n);
    for (int i = 0; i < n; ++i) {
      int c = int(std::lower_bound(keys.begin(), keys.end(), inv[i]) - keys.begin());
      elem_class[i] = c;
      classes[c].push_back(i);
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t k = 0; k < classes[c].size(); ++k)
        slot_class.push_back(int(c));
    used.assign(n, 0);
    extend(0);
  }

  void extend(int k) {
    const int n = int(p.size());
    if (k == n) {
      if (!have_best || cur < best) {
        best = cur;
        best_perm = ord;
        have_best = true;
      }
      return;
    }
    for (int cand : classes[slot_class[k]]) {
      if (used[cand]) continue;
      std::string add;
      for (int j = 0; j < k; ++j) {
        add += p.le(ord[j], cand) ? '1' : '0';
        add += p.le(cand, ord[j]) ? '1' : '0';
      }
      std::size_t before = cur.size();
      cur += add;
      if (!have_best || std::string_view(cur).substr(0, best.size()) <=
                            std::string_view(best).substr(0, cur.size())) {
        used[cand] = 1;
        ord.push_back(cand);
        extend(k + 1);
        ord.pop_back();
        used[cand] = 0;
      }
      cur.resize(before);
    }
  }
};

}  // namespace detail

inline canonical_result canonical_form(const TypedPoset& p) {
  detail::canon_search s(p);
  s.run();
  std::string key = std::to_string(p.size()) + "|";
  for (int i : s.best_perm) key += p.labels[i] + ",";
  key += "|" + s.best;
  return {key, s.best_perm};
}

inline std::string canonical_key(const TypedPoset& p) {
  return canonical_form(p).key;
}

inline bool iso_equal(const TypedPoset& p, const TypedPoset& q) {
  if (p.size() != q.size()) return false;
  auto lp = p.labels, lq = q.labels;
  std::sort(lp.begin(), lp.end());
  std::sort(lq.begin(), lq.end());
  if (lp != lq) return false;
  return canonical_key(p) == canonical_key(q);
}

// Sort key for poset components: size, then label multiset, then canonical
// relation encoding. Total and deterministic; isomorphic posets tie.
inline std::string component_sort_key(const TypedPoset& p) {
  std::string key = std::to_string(p.size()) + "|";
  auto ls = p.labels;
  std::sort(ls.begin(), ls.end());
  for (auto& l : ls) key += l + ",";
  return key + "|" + canonical_key(p);
}

// --- intervals, substitution, brackets ----------------------------------

// S is an interval iff no outside element sits between two members.
inline bool is_interval(const TypedPoset& p, const std::vector<int>& s) {
  std::vector<char> in(p.size(), 0);
  for (int i : s) in[i] = 1;
  for (int a : s)
    for (int b : s)
      for (int y = 0; y < int(p.size()); ++y)
        if (!in[y] && p.le(a, y) && p.le(y, b)) return false;
  return true;
}

// S is bracketed iff every outside element relates uniformly to S:
// below all members, above all members, or incomparable to all.
inline bool is_bracketed(const TypedPoset& p, const std::vector<int>& s) {
  std::vector<char> in(p.size(), 0);
  for (int i : s) in[i] = 1;
  for (int q = 0; q < int(p.size()); ++q) {
    if (in[q]) continue;
    std::size_t below = 0, above = 0;  // q below / above members
    for (int m : s) {
      if (p.le(q, m)) ++below;
      if (p.le(m, q)) ++above;
    }
    bool ok = (below == s.size() && above == 0) ||
              (below == 0 && above == s.size()) || (below == 0 && above == 0);
    if (!ok) return false;
  }
  return true;
}

// Substitution Q[hole \ P]: hole is replaced by all of P, which inherits the
// hole's relations to the rest of Q. Element order: Q's elements with the
// hole removed, then P's elements.
inline TypedPoset substitute(const TypedPoset& q, int hole, const TypedPoset& p) {
  std::vector<int> qidx;
  for (int i = 0; i < int(q.size()); ++i)
    if (i != hole) qidx.push_back(i);
  const std::size_t nq = qidx.size(), np = p.size();
  TypedPoset r;
  r.leq = make_rel(nq + np);
  for (std::size_t i = 0; i < nq; ++i) r.labels.push_back(q.labels[qidx[i]]);
  for (std::size_t i = 0; i < np; ++i) r.labels.push_back(p.labels[i]);
  for (std::size_t i = 0; i < nq; ++i)
    for (std::size_t j = 0; j < nq; ++j) r.leq[i][j] = q.leq[qidx[i]][qidx[j]];
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j) r.leq[nq + i][nq + j] = p.leq[i][j];
  for (std::size_t i = 0; i < nq; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      r.leq[i][nq + j] = q.leq[qidx[i]][hole];
      r.leq[nq + j][i] = q.leq[hole][qidx[i]];
    }
  return r;
}

inline const std::string hole_label = "@hole";

struct extraction {
  TypedPoset outer;  // p with S collapsed to one element labelled hole_label
  int hole;          // its index in outer (always last)
  TypedPoset inner;  // induced subposet on S (ascending order)
};

// Splits p as outer[hole \ inner] along a bracketed S.
inline extraction extract(const TypedPoset& p, const std::vector<int>& s) {
  if (!is_bracketed(p, s))
    throw not_bracketed("subset is not bracketed; cannot extract");
  std::vector<char> in(p.size(), 0);
  for (int i : s) in[i] = 1;
  std::vector<int> rest;
  for (int i = 0; i < int(p.size()); ++i)
    if (!in[i]) rest.push_back(i);

  extraction ex;
  ex.inner = restrict_to(p, s);
  ex.hole = int(rest.size());
  ex.outer.leq = make_rel(rest.size() + 1);
  for (int i : rest) ex.outer.labels.push_back(p.labels[i]);
  ex.outer.labels.push_back(hole_label);
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (std::size_t j = 0; j < rest.size(); ++j)
      ex.outer.leq[i][j] = p.leq[rest[i]][rest[j]];
  ex.outer.leq[ex.hole][ex.hole] = 1;
  // bracketed: "related to one member" coincides with "related to all"
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (int m : s) {
      if (p.leq[rest[i]][m]) ex.outer.leq[i][ex.hole] = 1;
      if (p.leq[m][rest[i]]) ex.outer.leq[ex.hole][i] = 1;
    }
  return ex;
}

// Least saturation making an interval S bracketed: anything below one member
// goes below all, dually above, then close. Antisymmetry survives for
// intervals.
inline TypedPoset saturate_for_interval(const TypedPoset& p,
                                        const std::vector<int>& s) {
  if (!is_interval(p, s))
    throw not_interval("subset is not an interval; cannot saturate");
  TypedPoset r = p;
  for (int q = 0; q < int(p.size()); ++q) {
    bool in = std::find(s.begin(), s.end(), q) != s.end();
    if (in) continue;
    bool below = false, above = false;
    for (int m : s) {
      if (p.le(q, m)) below = true;
      if (p.le(m, q)) above = true;
    }
    for (int m : s) {
      if (below) r.leq[q][m] = 1;
      if (above) r.leq[m][q] = 1;
    }
  }
  rel_transitive_close(r.leq);
  if (auto bad = rel_antisymmetry_break(r.leq))
    throw antisymmetry_violation("saturation collapsed elements " +
                                 std::to_string(bad->first) + " and " +
                                 std::to_string(bad->second));
  return r;
}

}  // namespace duodiag
