#pragma once

// Duoidal expressions: the reduced terms N | atom | e > e | e * e.
// Reduction (associativity flattening + unit dropping) is maintained as a
// representation invariant by the smart constructors seq_e / par_e, so Seq and
// Par nodes always have >= 2 children, none of which repeats the parent
// operator or is the unit.

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace duodiag {

enum class expr_kind { unit, atom, seq, par };

struct Expression {
  expr_kind kind = expr_kind::unit;
  std::string atom;                  // set iff kind == atom
  std::vector<Expression> children;  // set iff kind == seq/par

  static Expression unit() { return Expression{}; }
  static Expression make_atom(std::string name) {
    Expression e;
    e.kind = expr_kind::atom;
    e.atom = std::move(name);
    return e;
  }

  bool is_unit() const { return kind == expr_kind::unit; }
  bool is_atom() const { return kind == expr_kind::atom; }
  bool is_seq() const { return kind == expr_kind::seq; }
  bool is_par() const { return kind == expr_kind::par; }

  friend bool operator==(const Expression& a, const Expression& b) {
    return a.kind == b.kind && a.atom == b.atom && a.children == b.children;
  }
  friend bool operator!=(const Expression& a, const Expression& b) {
    return !(a == b);
  }
};

namespace detail {
inline Expression join(expr_kind op, const Expression& a, const Expression& b) {
  if (a.is_unit()) return b;
  if (b.is_unit()) return a;
  Expression e;
  e.kind = op;
  if (a.kind == op)
    e.children = a.children;
  else
    e.children.push_back(a);
  if (b.kind == op)
    e.children.insert(e.children.end(), b.children.begin(), b.children.end());
  else
    e.children.push_back(b);
  return e;
}
}  // namespace detail

inline Expression seq_e(const Expression& a, const Expression& b) {
  return detail::join(expr_kind::seq, a, b);
}
inline Expression par_e(const Expression& a, const Expression& b) {
  return detail::join(expr_kind::par, a, b);
}

inline Expression seq_e(const std::vector<Expression>& es) {
  Expression acc = Expression::unit();
  for (const auto& e : es) acc = seq_e(acc, e);
  return acc;
}
inline Expression par_e(const std::vector<Expression>& es) {
  Expression acc = Expression::unit();
  for (const auto& e : es) acc = par_e(acc, e);
  return acc;
}

// Leaf type names, left to right.
inline void list_type(const Expression& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case expr_kind::unit: return;
    case expr_kind::atom: out.push_back(e.atom); return;
    case expr_kind::seq:
    case expr_kind::par:
      for (const auto& c : e.children) list_type(c, out);
      return;
  }
}
inline std::vector<std::string> list_type(const Expression& e) {
  std::vector<std::string> out;
  list_type(e, out);
  return out;
}

inline std::size_t atom_count(const Expression& e) {
  switch (e.kind) {
    case expr_kind::unit: return 0;
    case expr_kind::atom: return 1;
    default: {
      std::size_t n = 0;
      for (const auto& c : e.children) n += atom_count(c);
      return n;
    }
  }
}

// Rename atoms. Names not in the map are kept; the result is re-reduced since
// a non-injective rename never changes shape, only labels.
inline Expression map_types(
    const Expression& e,
    const std::function<std::string(const std::string&)>& f) {
  switch (e.kind) {
    case expr_kind::unit: return e;
    case expr_kind::atom: return Expression::make_atom(f(e.atom));
    case expr_kind::seq:
    case expr_kind::par: {
      Expression acc = Expression::unit();
      for (const auto& c : e.children) {
        auto mc = map_types(c, f);
        acc = e.kind == expr_kind::seq ? seq_e(acc, mc) : par_e(acc, mc);
      }
      return acc;
    }
  }
  return e;
}

// Equality up to reordering Par children (Def-style ~): Seq is positional,
// Par compares children as a multiset via backtracking.
inline bool sym_equal(const Expression& a, const Expression& b);

namespace detail {
inline bool par_match(const std::vector<Expression>& as,
                      std::vector<const Expression*>& bs, std::size_t i) {
  if (i == as.size()) return true;
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (!bs[j] || !sym_equal(as[i], *bs[j])) continue;
    const Expression* saved = bs[j];
    bs[j] = nullptr;
    if (par_match(as, bs, i + 1)) return true;
    bs[j] = saved;
  }
  return false;
}
}  // namespace detail

inline bool sym_equal(const Expression& a, const Expression& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case expr_kind::unit: return true;
    case expr_kind::atom: return a.atom == b.atom;
    case expr_kind::seq: {
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!sym_equal(a.children[i], b.children[i])) return false;
      return true;
    }
    case expr_kind::par: {
      if (a.children.size() != b.children.size()) return false;
      std::vector<const Expression*> bs;
      for (const auto& c : b.children) bs.push_back(&c);
      return detail::par_match(a.children, bs, 0);
    }
  }
  return false;
}

// Canonical string of the ≈-class: Par children are sorted, so two
// expressions have equal canon_str exactly when sym_equal.
inline std::string canon_str(const Expression& e) {
  switch (e.kind) {
    case expr_kind::unit: return "N";
    case expr_kind::atom: return e.atom;
    case expr_kind::seq:
    case expr_kind::par: {
      std::vector<std::string> parts;
      for (const auto& c : e.children) parts.push_back(canon_str(c));
      if (e.kind == expr_kind::par) std::sort(parts.begin(), parts.end());
      std::string s = e.kind == expr_kind::seq ? "S(" : "P(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += parts[i];
      }
      return s + ")";
    }
  }
  return "N";
}

// Canonical representative of the ≈-class: Par children reordered by their
// canonical strings, recursively.
inline Expression canon_expr(const Expression& e) {
  if (!e.is_seq() && !e.is_par()) return e;
  std::vector<Expression> cs;
  for (const auto& c : e.children) cs.push_back(canon_expr(c));
  if (e.is_par())
    std::stable_sort(cs.begin(), cs.end(),
                     [](const Expression& x, const Expression& y) {
                       return canon_str(x) < canon_str(y);
                     });
  Expression out;
  out.kind = e.kind;
  out.children = std::move(cs);
  return out;
}

// The canonical leaf permutation witnessing a ≈ b: result[i] is the leaf
// position in b that leaf i of a corresponds to. Identity when a == b.
inline std::vector<int> sym_witness(const Expression& a, const Expression& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size() ||
      (a.is_atom() && a.atom != b.atom))
    throw error("sym_witness: expressions are not equivalent");
  if (a.is_unit()) return {};
  if (a.is_atom()) return {0};
  auto offsets = [](const Expression& e) {
    std::vector<int> off;
    int at = 0;
    for (const auto& c : e.children) {
      off.push_back(at);
      at += int(atom_count(c));
    }
    return off;
  };
  std::vector<int> offa = offsets(a), offb = offsets(b);
  std::vector<int> pairing(a.children.size());  // child i of a -> child of b
  if (a.is_seq()) {
    std::iota(pairing.begin(), pairing.end(), 0);
  } else {
    auto sorted_by_key = [](const Expression& e) {
      std::vector<std::pair<std::string, int>> v;
      for (std::size_t i = 0; i < e.children.size(); ++i)
        v.emplace_back(canon_str(e.children[i]), int(i));
      std::stable_sort(v.begin(), v.end());
      return v;
    };
    auto sa = sorted_by_key(a), sb = sorted_by_key(b);
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (sa[k].first != sb[k].first)
        throw error("sym_witness: expressions are not equivalent");
      pairing[sa[k].second] = sb[k].second;
    }
  }
  std::vector<int> w(atom_count(a));
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    auto sub = sym_witness(a.children[i], b.children[pairing[i]]);
    for (std::size_t l = 0; l < sub.size(); ++l)
      w[offa[i] + int(l)] = offb[pairing[i]] + sub[l];
  }
  return w;
}

// Fully parenthesized printing: children get parens whenever their operator
// differs from the parent's (same-operator nesting cannot occur in reduced
// form). parse(print(e)) == e.
inline std::string print(const Expression& e) {
  switch (e.kind) {
    case expr_kind::unit: return "N";
    case expr_kind::atom: return e.atom;
    case expr_kind::seq:
    case expr_kind::par: {
      const char* op = e.kind == expr_kind::seq ? " > " : " * ";
      std::string s;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += op;
        const Expression& c = e.children[i];
        if (c.is_seq() || c.is_par())
          s += "(" + print(c) + ")";
        else
          s += print(c);
      }
      return s;
    }
  }
  return "N";
}

// --- expression parser -------------------------------------------------
//
//   E ::= T ('>' T)*      seq, left associative, binds loosest
//   T ::= F ('*' F)*      par, left associative
//   F ::= 'N' | IDENT | '(' E ')'
//
// IDENT = [A-Za-z][A-Za-z0-9_]*, with N reserved for the unit.

namespace detail {

struct expr_cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (pos < text.size()) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      advance();
  }
  bool at_end() {
    skip_ws();
    return pos == text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg, line, col);
  }
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c));
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::string read_ident(expr_cursor& cur) {
  cur.skip_ws();
  if (cur.pos >= cur.text.size() || !ident_start(cur.text[cur.pos]))
    cur.fail("expected identifier");
  std::string name;
  while (cur.pos < cur.text.size() && ident_char(cur.text[cur.pos])) {
    name += cur.text[cur.pos];
    cur.advance();
  }
  return name;
}

inline Expression parse_expr_at(expr_cursor& cur);

inline Expression parse_factor(expr_cursor& cur) {
  char c = cur.peek();
  if (c == '(') {
    cur.advance();
    Expression e = parse_expr_at(cur);
    if (cur.peek() != ')') cur.fail("expected ')'");
    cur.advance();
    return e;
  }
  if (!ident_start(c)) cur.fail("expected type name, 'N' or '('");
  std::string name = read_ident(cur);
  if (name == "N") return Expression::unit();
  return Expression::make_atom(name);
}

inline Expression parse_par(expr_cursor& cur) {
  Expression e = parse_factor(cur);
  while (cur.peek() == '*') {
    cur.advance();
    e = par_e(e, parse_factor(cur));
  }
  return e;
}

inline Expression parse_expr_at(expr_cursor& cur) {
  Expression e = parse_par(cur);
  while (cur.peek() == '>') {
    cur.advance();
    e = seq_e(e, parse_par(cur));
  }
  return e;
}

}  // namespace detail

inline Expression parse(const std::string& text) {
  detail::expr_cursor cur{text};
  if (cur.at_end()) cur.fail("empty expression");
  Expression e = detail::parse_expr_at(cur);
  if (!cur.at_end()) cur.fail("trailing input after expression");
  return e;
}

}  // namespace duodiag
