#pragma once

// Surface syntax for morphisms of the free category, and the line-oriented
// file format the CLI consumes.
//
//   term := seqt (';' seqt)*           composition, left to right
//   seqt := part ('>' part)*
//   part := fact ('*' fact)*
//   fact := IDENT | 'id' '[' E ']' | 'str' '[' E '->' E ']' | '(' term ')'
//
// Files hold '#' comments and three kinds of declaration, one per line:
//   type A B C
//   gen  f : E -> E
//   term name : E -> E = TERM
// Declared term boundaries are checked against the elaborated diagram.

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diagram.hpp"

namespace duodiag {

struct TermAst {
  enum class kind_t { gen, id_e, str_e, comp, par, seq };
  kind_t kind = kind_t::gen;
  std::string name;               // gen
  Expression a, b;                // id_e: a; str_e: a -> b
  std::vector<TermAst> children;  // comp/par/seq: exactly two

  static TermAst make_gen(std::string n) {
    TermAst t;
    t.name = std::move(n);
    return t;
  }
  static TermAst make_id(Expression e) {
    TermAst t;
    t.kind = kind_t::id_e;
    t.a = std::move(e);
    return t;
  }
  static TermAst make_str(Expression s, Expression tg) {
    TermAst t;
    t.kind = kind_t::str_e;
    t.a = std::move(s);
    t.b = std::move(tg);
    return t;
  }
  static TermAst make_bin(kind_t k, TermAst l, TermAst r) {
    TermAst t;
    t.kind = k;
    t.children.push_back(std::move(l));
    t.children.push_back(std::move(r));
    return t;
  }
};

namespace detail {

inline void expect_char(expr_cursor& cur, char c) {
  if (cur.peek() != c) cur.fail(std::string("expected '") + c + "'");
  cur.advance();
}

inline void expect_arrow(expr_cursor& cur) {
  if (cur.peek() != '-') cur.fail("expected '->'");
  cur.advance();
  if (cur.pos >= cur.text.size() || cur.text[cur.pos] != '>')
    cur.fail("expected '->'");
  cur.advance();
}

inline TermAst parse_term_at(expr_cursor& cur);

inline TermAst parse_term_factor(expr_cursor& cur) {
  char c = cur.peek();
  if (c == '(') {
    cur.advance();
    TermAst t = parse_term_at(cur);
    expect_char(cur, ')');
    return t;
  }
  if (!ident_start(c)) cur.fail("expected generator, 'id', 'str' or '('");
  std::string name = read_ident(cur);
  if (name == "id" && cur.peek() == '[') {
    cur.advance();
    Expression e = parse_expr_at(cur);
    expect_char(cur, ']');
    return TermAst::make_id(std::move(e));
  }
  if (name == "str" && cur.peek() == '[') {
    cur.advance();
    Expression s = parse_expr_at(cur);
    expect_arrow(cur);
    Expression t = parse_expr_at(cur);
    expect_char(cur, ']');
    return TermAst::make_str(std::move(s), std::move(t));
  }
  return TermAst::make_gen(std::move(name));
}

inline TermAst parse_term_par(expr_cursor& cur) {
  TermAst t = parse_term_factor(cur);
  while (cur.peek() == '*') {
    cur.advance();
    t = TermAst::make_bin(TermAst::kind_t::par, std::move(t),
                          parse_term_factor(cur));
  }
  return t;
}

inline TermAst parse_term_seq(expr_cursor& cur) {
  TermAst t = parse_term_par(cur);
  while (cur.peek() == '>') {
    cur.advance();
    t = TermAst::make_bin(TermAst::kind_t::seq, std::move(t),
                          parse_term_par(cur));
  }
  return t;
}

inline TermAst parse_term_at(expr_cursor& cur) {
  TermAst t = parse_term_seq(cur);
  while (cur.peek() == ';') {
    cur.advance();
    t = TermAst::make_bin(TermAst::kind_t::comp, std::move(t),
                          parse_term_seq(cur));
  }
  return t;
}

}  // namespace detail

inline TermAst parse_term(const std::string& text) {
  detail::expr_cursor cur{text};
  if (cur.at_end()) cur.fail("empty term");
  TermAst t = detail::parse_term_at(cur);
  if (!cur.at_end()) cur.fail("trailing input after term");
  return t;
}

inline StringDiagram elaborate(std::shared_ptr<const Signature> sig,
                               const TermAst& t) {
  switch (t.kind) {
    case TermAst::kind_t::gen: return from_generator(sig, t.name);
    case TermAst::kind_t::id_e: return identity(sig, t.a);
    case TermAst::kind_t::str_e: return structure_diagram(sig, t.a, t.b);
    case TermAst::kind_t::comp:
      return compose(elaborate(sig, t.children[0]),
                     elaborate(sig, t.children[1]));
    case TermAst::kind_t::par:
      return tensor(elaborate(sig, t.children[0]),
                    elaborate(sig, t.children[1]));
    case TermAst::kind_t::seq:
      return sequence(elaborate(sig, t.children[0]),
                      elaborate(sig, t.children[1]));
  }
  throw error("unreachable term kind");
}

// --- .duo files ---------------------------------------------------------

struct NamedTerm {
  std::string name;
  Expression source, target;  // declared boundaries
  TermAst ast;
  int line = 0;
};

struct DuoFile {
  std::shared_ptr<Signature> sig = std::make_shared<Signature>();
  std::vector<NamedTerm> terms;

  const NamedTerm& term(const std::string& name) const {
    for (const auto& t : terms)
      if (t.name == name) return t;
    throw error("no term named '" + name + "'");
  }
};

// Elaborates a named term and checks its declared boundaries exactly.
inline StringDiagram elaborate(const DuoFile& f, const NamedTerm& t) {
  StringDiagram d = elaborate(f.sig, t.ast);
  if (!(d.source_expr == t.source) || !(d.target_expr == t.target))
    throw validation_error(
        validation_code::boundary_mismatch,
        "term '" + t.name + "' declared " + print(t.source) + " -> " +
            print(t.target) + " but elaborates to " + print(d.source_expr) +
            " -> " + print(d.target_expr));
  return d;
}

inline DuoFile parse_duo_file(const std::string& text) {
  DuoFile f;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    detail::expr_cursor cur{line, 0, lineno, 1};
    if (cur.at_end()) continue;
    std::string kw = detail::read_ident(cur);
    if (kw == "type") {
      while (!cur.at_end()) {
        std::string t = detail::read_ident(cur);
        if (t == "N") cur.fail("'N' is reserved for the unit");
        f.sig->add_type(t);
      }
    } else if (kw == "gen") {
      std::string name = detail::read_ident(cur);
      detail::expect_char(cur, ':');
      Expression s = detail::parse_expr_at(cur);
      detail::expect_arrow(cur);
      Expression t = detail::parse_expr_at(cur);
      if (!cur.at_end()) cur.fail("trailing input after generator");
      f.sig->add_generator(name, std::move(s), std::move(t));
    } else if (kw == "term") {
      NamedTerm nt;
      nt.line = lineno;
      nt.name = detail::read_ident(cur);
      detail::expect_char(cur, ':');
      nt.source = detail::parse_expr_at(cur);
      detail::expect_arrow(cur);
      nt.target = detail::parse_expr_at(cur);
      detail::expect_char(cur, '=');
      nt.ast = detail::parse_term_at(cur);
      if (!cur.at_end()) cur.fail("trailing input after term");
      for (const auto& other : f.terms)
        if (other.name == nt.name) cur.fail("term '" + nt.name + "' redefined");
      f.terms.push_back(std::move(nt));
    } else {
      cur.fail("expected 'type', 'gen' or 'term', got '" + kw + "'");
    }
  }
  return f;
}

inline DuoFile load_duo_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_duo_file(ss.str());
}

}  // namespace duodiag
