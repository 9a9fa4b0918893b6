#include <catch2/catch_amalgamated.hpp>

#include "duodiag/expr.hpp"
#include "duodiag/poset.hpp"
#include "duodiag/zetless.hpp"
#include "testutil.hpp"

using namespace duodiag;

TEST_CASE("parse basics") {
  CHECK(parse("N").is_unit());
  CHECK(parse("A").is_atom());
  CHECK(parse("A").atom == "A");
  CHECK(parse("(A)").is_atom());

  Expression e = parse("(A > B) * C");
  REQUIRE(e.is_par());
  REQUIRE(e.children.size() == 2);
  CHECK(e.children[0].is_seq());
  CHECK(e.children[1].atom == "C");

  // associativity is flattened away while parsing
  Expression f = parse("(A * B) * C");
  REQUIRE(f.is_par());
  CHECK(f.children.size() == 3);
  CHECK(f == parse("A * (B * C)"));
  CHECK(f == parse("A * B * C"));

  // > binds looser than *
  Expression g = parse("A > B * C");
  REQUIRE(g.is_seq());
  CHECK(g.children[0].atom == "A");
  CHECK(g.children[1].is_par());

  // units are absorbed
  CHECK(parse("N > N") == Expression::unit());
  CHECK(parse("A * N") == Expression::make_atom("A"));
  CHECK(parse("N > A > N") == Expression::make_atom("A"));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse(""), parse_error);
  CHECK_THROWS_AS(parse("A >"), parse_error);
  CHECK_THROWS_AS(parse("A @ B"), parse_error);
  CHECK_THROWS_AS(parse("(A > B"), parse_error);
  CHECK_THROWS_AS(parse("A B"), parse_error);
  try {
    parse("A @ B");
    FAIL("expected parse_error");
  } catch (const parse_error& err) {
    CHECK(err.column > 1);
  }
}

TEST_CASE("print") {
  CHECK(print(Expression::unit()) == "N");
  CHECK(print(parse("A > (B * C)")) == "A > (B * C)");
  CHECK(print(parse("(A > B) * C")) == "(A > B) * C");
  CHECK(print(parse("A * B * C")) == "A * B * C");
}

TEST_CASE("parse-print round trip on random expressions") {
  std::mt19937 g(1001);
  for (int i = 0; i < 1000; ++i) {
    Expression e = testutil::random_expr(g, 1 + testutil::pick(g, 8),
                                         testutil::abc());
    CHECK(parse(print(e)) == e);
  }
}

TEST_CASE("smart constructors keep expressions reduced") {
  Expression a = Expression::make_atom("A");
  Expression b = Expression::make_atom("B");
  Expression c = Expression::make_atom("C");

  CHECK(seq_e(a, Expression::unit()) == a);
  CHECK(par_e(Expression::unit(), b) == b);
  CHECK(seq_e(Expression::unit(), Expression::unit()) == Expression::unit());

  // nested same-operator children are flattened
  Expression s = seq_e(seq_e(a, b), c);
  REQUIRE(s.is_seq());
  CHECK(s.children.size() == 3);
  CHECK(s == seq_e(a, seq_e(b, c)));

  Expression p = par_e(par_e(a, b), c);
  REQUIRE(p.is_par());
  CHECK(p.children.size() == 3);

  // mixed operators stay nested
  Expression m = par_e(seq_e(a, b), c);
  REQUIRE(m.is_par());
  CHECK(m.children[0].is_seq());
}

TEST_CASE("smart constructor associativity on random expressions") {
  std::mt19937 g(1002);
  for (int i = 0; i < 300; ++i) {
    Expression x = testutil::random_expr(g, 1 + testutil::pick(g, 4),
                                         testutil::abc());
    Expression y = testutil::random_expr(g, 1 + testutil::pick(g, 4),
                                         testutil::abc());
    Expression z = testutil::random_expr(g, 1 + testutil::pick(g, 4),
                                         testutil::abc());
    CHECK(seq_e(seq_e(x, y), z) == seq_e(x, seq_e(y, z)));
    CHECK(par_e(par_e(x, y), z) == par_e(x, par_e(y, z)));
    CHECK(seq_e(x, Expression::unit()) == x);
    CHECK(par_e(x, Expression::unit()) == x);
  }
}

TEST_CASE("list_type and atom_count") {
  Expression e = parse("(A > B) * C");
  CHECK(list_type(e) == std::vector<std::string>{"A", "B", "C"});
  CHECK(atom_count(e) == 3);
  CHECK(atom_count(Expression::unit()) == 0);
  CHECK(list_type(Expression::unit()).empty());

  std::mt19937 g(1003);
  for (int i = 0; i < 200; ++i) {
    Expression x = testutil::random_expr(g, 1 + testutil::pick(g, 5),
                                         testutil::abc());
    Expression y = testutil::random_expr(g, 1 + testutil::pick(g, 5),
                                         testutil::abc());
    auto lx = list_type(x), ly = list_type(y);
    auto ls = list_type(seq_e(x, y)), lp = list_type(par_e(x, y));
    std::vector<std::string> cat = lx;
    cat.insert(cat.end(), ly.begin(), ly.end());
    CHECK(ls == cat);
    CHECK(lp == cat);
    CHECK(atom_count(x) == lx.size());
  }
}

TEST_CASE("map_types") {
  auto h = [](const std::string& t) -> std::string {
    if (t == "A" || t == "B") return "T";
    return "U";
  };
  Expression e = parse("(A > B) * C");
  CHECK(print(map_types(e, h)) == "(T > T) * U");
  CHECK(map_types(Expression::unit(), h) == Expression::unit());
}

namespace {

// recursively shuffles Par children (a sym-equal copy by construction)
Expression shuffle_pars(std::mt19937& g, const Expression& e) {
  if (!e.is_seq() && !e.is_par()) return e;
  std::vector<Expression> kids;
  for (const auto& c : e.children) kids.push_back(shuffle_pars(g, c));
  if (e.is_par()) std::shuffle(kids.begin(), kids.end(), g);
  Expression out;
  out.kind = e.kind;
  out.children = std::move(kids);
  return out;
}

}  // namespace

TEST_CASE("sym_equal examples") {
  CHECK(sym_equal(parse("A * B"), parse("B * A")));
  CHECK_FALSE(sym_equal(parse("A > B"), parse("B > A")));
  CHECK(sym_equal(parse("(A > B) * C"), parse("C * (A > B)")));
  CHECK_FALSE(sym_equal(parse("A * B"), parse("A > B")));
  CHECK(sym_equal(Expression::unit(), Expression::unit()));
  CHECK_FALSE(sym_equal(Expression::unit(), parse("A")));
}

TEST_CASE("sym_equal is an equivalence compatible with shuffles") {
  std::mt19937 g(1004);
  for (int i = 0; i < 300; ++i) {
    Expression e = testutil::random_expr(g, 1 + testutil::pick(g, 6),
                                         testutil::abc());
    Expression s1 = shuffle_pars(g, e);
    Expression s2 = shuffle_pars(g, s1);
    CHECK(sym_equal(e, e));
    CHECK(sym_equal(e, s1));
    CHECK(sym_equal(s1, e));
    CHECK(sym_equal(s1, s2));
    CHECK(sym_equal(e, s2));  // transitivity along the chain
  }
}

TEST_CASE("sym_equal agrees with poset isomorphism of encodings") {
  std::mt19937 g(1005);
  for (int i = 0; i < 200; ++i) {
    Expression x = testutil::random_expr(g, 1 + testutil::pick(g, 5),
                                         testutil::abc());
    Expression y = testutil::pick(g, 2) == 0
                       ? shuffle_pars(g, x)
                       : testutil::random_expr(g, 1 + testutil::pick(g, 5),
                                               testutil::abc());
    CHECK(sym_equal(x, y) == iso_equal(encode(x), encode(y)));
  }
}

TEST_CASE("canonical representatives") {
  Expression e = parse("C * (A > B)");
  CHECK(canon_str(e) == canon_str(parse("(A > B) * C")));
  CHECK(sym_equal(canon_expr(e), e));
  CHECK(canon_expr(e) == canon_expr(parse("(A > B) * C")));

  std::mt19937 g(1006);
  for (int i = 0; i < 300; ++i) {
    Expression x = testutil::random_expr(g, 1 + testutil::pick(g, 6),
                                         testutil::abc());
    Expression y = shuffle_pars(g, x);
    CHECK(canon_str(x) == canon_str(y));
    CHECK(canon_expr(x) == canon_expr(y));
    CHECK(sym_equal(canon_expr(x), x));
    Expression z = testutil::random_expr(g, 1 + testutil::pick(g, 6),
                                         testutil::abc());
    CHECK((canon_str(x) == canon_str(z)) == sym_equal(x, z));
  }
}

TEST_CASE("sym_witness") {
  Expression a = parse("(A > B) * C");
  Expression b = parse("C * (A > B)");
  std::vector<int> w = sym_witness(a, b);
  // leaves of a are A,B,C; in b they sit at positions 1,2,0
  CHECK(w == std::vector<int>{1, 2, 0});
  CHECK(sym_witness(a, a) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(sym_witness(parse("A > B"), parse("B > A")),
                  duodiag::error);

  std::mt19937 g(1007);
  for (int i = 0; i < 300; ++i) {
    Expression x = testutil::random_expr(g, 1 + testutil::pick(g, 6),
                                         testutil::abc());
    Expression y = shuffle_pars(g, x);
    std::vector<int> wit = sym_witness(x, y);
    auto lx = list_type(x), ly = list_type(y);
    REQUIRE(wit.size() == lx.size());
    std::vector<bool> seen(wit.size(), false);
    for (std::size_t k = 0; k < wit.size(); ++k) {
      REQUIRE(wit[k] >= 0);
      REQUIRE(wit[k] < int(wit.size()));
      CHECK_FALSE(seen[wit[k]]);
      seen[wit[k]] = true;
      CHECK(lx[k] == ly[wit[k]]);  // labels preserved
    }
    // the witness is an isomorphism of the encoded posets
    TypedPoset px = encode(x), py = encode(y);
    for (std::size_t r = 0; r < wit.size(); ++r)
      for (std::size_t c = 0; c < wit.size(); ++c)
        CHECK(px.le(int(r), int(c)) == py.le(wit[r], wit[c]));
  }
}
