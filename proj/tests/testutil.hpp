#pragma once

// Shared helpers for the test suite: seeded random generators for
// expressions, posets, and diagrams, plus a brute-force poset enumerator used
// as an oracle.

#include <random>
#include <string>
#include <vector>

#include "duodiag/diagram.hpp"

namespace testutil {

using namespace duodiag;

inline std::vector<std::string> abc() { return {"A", "B", "C"}; }

inline int pick(std::mt19937& g, int n) {
  return int(g() % unsigned(n));
}

// Random composition of n into 2..kmax parts, each >= 1.
inline std::vector<int> random_split(std::mt19937& g, int n, int kmax) {
  int k = 2 + pick(g, std::max(1, std::min(n, kmax) - 1));
  if (k > n) k = n;
  std::vector<int> cuts{0, n};
  while (int(cuts.size()) < k + 1) {
    int c = 1 + pick(g, n - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end())
      cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    parts.push_back(cuts[i + 1] - cuts[i]);
  return parts;
}

// Random reduced expression with exactly n atoms. forbid excludes the parent
// operator so the result stays reduced.
inline Expression random_expr(std::mt19937& g, int n,
                              const std::vector<std::string>& types,
                              int forbid = -1) {
  if (n <= 0) return Expression::unit();
  if (n == 1) return Expression::make_atom(types[pick(g, int(types.size()))]);
  int op;
  if (forbid < 0)
    op = pick(g, 2);
  else
    op = 1 - forbid;
  auto parts = random_split(g, n, 4);
  std::vector<Expression> children;
  for (int sz : parts) children.push_back(random_expr(g, sz, types, op));
  return op == 0 ? seq_e(children) : par_e(children);
}

// Random poset: random edges consistent with a random permutation, closed.
inline TypedPoset random_poset(std::mt19937& g, int n,
                               const std::vector<std::string>& types) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), g);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    labels.push_back(types[pick(g, int(types.size()))]);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (pick(g, 3) == 0) edges.emplace_back(perm[i], perm[j]);
  return from_generators(labels, edges);
}

// Every partial order on n labelled elements with the given labels (the
// relation is checked directly, not closed, so each poset appears once).
inline std::vector<TypedPoset> all_posets(int n,
                                          const std::vector<std::string>& labels) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) slots.emplace_back(i, j);
  std::vector<TypedPoset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << slots.size());
       ++mask) {
    Rel r = make_rel(n);
    for (int i = 0; i < n; ++i) r[i][i] = 1;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) r[slots[s].first][slots[s].second] = 1;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (i != j && r[i][j] && r[j][i]) ok = false;
        for (int k = 0; k < n && ok; ++k)
          if (r[i][j] && r[j][k] && !r[i][k]) ok = false;
      }
    if (!ok) continue;
    TypedPoset p;
    p.labels = labels;
    p.leq = std::move(r);
    out.push_back(std::move(p));
  }
  return out;
}

// --- random diagrams --------------------------------------------------------

// Grows a random valid diagram from a given source expression by composing
// identities, structure steps, fresh generators, and parallel/sequential
// splits. Fresh generators are appended to the shared signature as needed.
struct DiagramGen {
  std::shared_ptr<Signature> sig;
  std::mt19937* g;
  int fresh = 0;

  explicit DiagramGen(std::mt19937& rng) : g(&rng) {
    sig = std::make_shared<Signature>();
    for (const auto& t : abc()) sig->add_type(t);
  }

  std::string fresh_gen(const Expression& src, const Expression& tgt) {
    std::string name = "k" + std::to_string(fresh++);
    sig->add_generator(name, src, tgt);
    return name;
  }

  // A zetless strengthening of encode(e), or e itself if none found.
  Expression coarsen(const Expression& e) {
    TypedPoset p = encode(e);
    const int n = int(p.size());
    for (int tries = 0; tries < 8; ++tries) {
      int i = pick(*g, n), j = pick(*g, n);
      if (i == j || !p.incomparable(i, j)) continue;
      TypedPoset q = p;
      q.leq[i][j] = 1;
      rel_transitive_close(q.leq);
      if (is_zetless(q)) return decode(q);
    }
    return e;
  }

  StringDiagram from(const Expression& e, int depth) {
    if (depth <= 0) return identity(sig, e);
    switch (pick(*g, 5)) {
      case 0:
        return identity(sig, e);
      case 1: {  // structure step, then continue
        Expression e2 = coarsen(e);
        StringDiagram s = structure_diagram(sig, e, e2);
        return try_compose(s, e2, depth - 1);
      }
      case 2: {  // fresh generator consuming the whole boundary
        Expression t = random_expr(*g, 1 + pick(*g, 3), abc());
        std::string name = fresh_gen(e, t);
        return try_compose(from_generator(sig, name), t, depth - 1);
      }
      case 3: {  // split the boundary
        if (e.children.size() >= 2) {
          std::size_t cut = 1 + pick(*g, int(e.children.size()) - 1);
          std::vector<Expression> l(e.children.begin(), e.children.begin() + cut);
          std::vector<Expression> r(e.children.begin() + cut, e.children.end());
          Expression el = e.is_seq() ? seq_e(l) : par_e(l);
          Expression er = e.is_seq() ? seq_e(r) : par_e(r);
          StringDiagram dl = from(el, depth - 1), dr = from(er, depth - 1);
          try {
            return e.is_seq() ? sequence(dl, dr) : tensor(dl, dr);
          } catch (const validation_error&) {
            return identity(sig, e);
          }
        }
        return from(e, depth - 1);
      }
      default: {  // two stages
        StringDiagram first = from(e, depth / 2);
        return try_compose(first, first.target_expr, depth / 2);
      }
    }
  }

  StringDiagram try_compose(const StringDiagram& head, const Expression& mid,
                            int depth) {
    for (int tries = 0; tries < 4; ++tries) {
      StringDiagram tail = from(mid, depth);
      try {
        return compose(head, tail);
      } catch (const validation_error&) {
      }
    }
    return head;
  }

  StringDiagram random_diagram(int depth) {
    Expression e = random_expr(*g, 1 + pick(*g, 3), abc());
    return from(e, depth);
  }

  // A composable pair (a, b) with compose(a, b) valid.
  std::pair<StringDiagram, StringDiagram> composable_pair(int depth) {
    for (;;) {
      StringDiagram a = random_diagram(depth);
      for (int tries = 0; tries < 4; ++tries) {
        StringDiagram b = from(a.target_expr, depth);
        try {
          compose(a, b);
          return {a, b};
        } catch (const validation_error&) {
        }
      }
    }
  }
};

}  // namespace testutil
