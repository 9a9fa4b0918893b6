// End-to-end acceptance checks. Usage: acceptance <duo-binary> <fixtures-dir>.
// Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "duodiag/duodiag.hpp"
#include "testutil.hpp"

using namespace duodiag;

namespace {

int failures = 0;

void report(int n, const std::string& name, bool ok, const std::string& note) {
  std::string line = std::string(ok ? "PASS" : "FAIL") + " criterion " +
                     std::to_string(n) + ": " + name;
  if (!note.empty()) line += " (" + note + ")";
  std::printf("%s\n", line.c_str());
  if (!ok) ++failures;
}

using clock_t_ = std::chrono::steady_clock;

double secs(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

std::string fmt_secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

struct cli_result {
  int code = -1;
  std::string out;
};

cli_result run_cli(const std::string& bin, const std::string& args) {
  static int counter = 0;
  std::string path = "/tmp/duo_acc_" + std::to_string(++counter) + ".txt";
  std::string cmd = bin + " " + args + " > " + path + " 2>&1";
  int rc = std::system(cmd.c_str());
  cli_result r;
  if (WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

// --- criterion 1: enumerating the two-element posets -------------------------

void criterion1(const std::string& bin) {
  const char* name = "two-element poset enumeration";
  try {
    auto t0 = clock_t_::now();
    cli_result r = run_cli(bin, "enumerate 2 --types A,B");
    double dt = secs(t0);

    bool ok = r.code == 0;
    std::vector<TypedPoset> got;
    bool count_line = false;
    for (const auto& line : split_lines(r.out)) {
      if (line.rfind("count:", 0) == 0) {
        count_line = line == "count: 7";
        continue;
      }
      got.push_back(poset_from_json(nlohmann::json::parse(line)));
    }
    ok = ok && count_line && got.size() == 7;

    // oracle: every two-element poset over {A, B}, deduplicated up to iso
    std::vector<TypedPoset> expect;
    for (const auto& labels :
         std::vector<std::vector<std::string>>{
             {"A", "A"}, {"A", "B"}, {"B", "A"}, {"B", "B"}})
      for (const auto& p : testutil::all_posets(2, labels)) {
        bool seen = false;
        for (const auto& q : expect)
          if (iso_equal(p, q)) seen = true;
        if (!seen) expect.push_back(p);
      }
    ok = ok && expect.size() == 7;

    for (const auto& e : expect) {
      int hits = 0;
      for (const auto& g : got)
        if (iso_equal(e, g)) ++hits;
      ok = ok && hits == 1;
    }
    for (const auto& g : got) ok = ok && is_zetless(g);
    ok = ok && dt < 1.0;

    report(1, name, ok,
           std::to_string(got.size()) + " classes, " + fmt_secs(dt));
  } catch (const std::exception& e) {
    report(1, name, false, e.what());
  }
}

// --- criterion 2: the ordered-output composite --------------------------------

void criterion2(const std::string& fx) {
  const char* name = "composite with ordered outputs";
  try {
    auto t0 = clock_t_::now();
    DuoFile f = load_duo_file(fx + "/fig1.duo");
    StringDiagram d = elaborate(f, f.term("fig1"));  // validates

    bool ok = d.source_expr == parse("(A > X) * Y");
    ok = ok && d.target_expr == parse("(U * V) > C");
    ok = ok && d.output_wires.size() == 3;

    int u = d.output_wires[0], v = d.output_wires[1], c = d.output_wires[2];
    ok = ok && d.wire_labels[u] == "U" && d.wire_labels[v] == "V" &&
         d.wire_labels[c] == "C";

    TypedPoset w = derived_poset(d);
    ok = ok && w.le(u, c) && w.le(v, c);
    ok = ok && !w.le(c, u) && !w.le(c, v);
    ok = ok && w.incomparable(u, v);

    double dt = secs(t0);
    ok = ok && dt < 1.0;
    report(2, name, ok, "u<=c, v<=c, u||v, " + fmt_secs(dt));
  } catch (const std::exception& e) {
    report(2, name, false, e.what());
  }
}

// --- criterion 3: one-sided stages commute past identities -------------------

void criterion3(const std::string& fx) {
  const char* name = "spatial equality of one-sided stages";
  try {
    auto t0 = clock_t_::now();
    DuoFile f = load_duo_file(fx + "/spacial.duo");
    StringDiagram l = elaborate(f, f.term("lhs"));
    StringDiagram r = elaborate(f, f.term("rhs"));
    bool ok = equal(l, r);
    double dt = secs(t0);
    ok = ok && dt < 1.0;
    report(3, name, ok, fmt_secs(dt));
  } catch (const std::exception& e) {
    report(3, name, false, e.what());
  }
}

// --- criterion 4: categorical and two-tensor laws -----------------------------

void criterion4() {
  const char* name = "category and two-tensor law suite";
  try {
    auto t0 = clock_t_::now();
    std::mt19937 g(9004);
    testutil::DiagramGen gen(g);
    const Expression unit = parse("N");
    int fails = 0;
    std::vector<std::string> notes;

    // compose associativity, counted only when both sides are defined
    {
      int runs = 0, attempts = 0;
      while (runs < 500 && attempts < 20000) {
        ++attempts;
        auto [a, b] = gen.composable_pair(2);
        StringDiagram c = gen.from(b.target_expr, 2);
        try {
          StringDiagram l = compose(compose(a, b), c);
          StringDiagram r = compose(a, compose(b, c));
          ++runs;
          if (!equal(l, r)) ++fails;
        } catch (const validation_error&) {
        }
      }
      notes.push_back("assoc " + std::to_string(runs));
      if (runs < 500) ++fails;
    }

    // unitality
    for (int rep = 0; rep < 500; ++rep) {
      StringDiagram d = gen.random_diagram(2);
      try {
        if (!equal(compose(identity(gen.sig, d.source_expr), d), d)) ++fails;
        if (!equal(compose(d, identity(gen.sig, d.target_expr)), d)) ++fails;
      } catch (const std::exception&) {
        ++fails;
      }
    }

    // strict associativity and the shared unit of both tensors
    for (int rep = 0; rep < 500; ++rep) {
      StringDiagram a = gen.random_diagram(1);
      StringDiagram b = gen.random_diagram(1);
      StringDiagram c = gen.random_diagram(1);
      StringDiagram e = identity(gen.sig, unit);
      try {
        if (!equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))) ++fails;
        if (!equal(sequence(sequence(a, b), c), sequence(a, sequence(b, c))))
          ++fails;
        if (!equal(tensor(a, e), a) || !equal(tensor(e, a), a)) ++fails;
        if (!equal(sequence(a, e), a) || !equal(sequence(e, a), a)) ++fails;
      } catch (const std::exception&) {
        ++fails;
      }
    }

    // interchange of composition with each tensor
    for (auto seq_mode : {false, true}) {
      int runs = 0, attempts = 0;
      while (runs < 500 && attempts < 20000) {
        ++attempts;
        auto [a, c] = gen.composable_pair(1);
        auto [b, d] = gen.composable_pair(1);
        try {
          StringDiagram l = seq_mode ? compose(sequence(a, b), sequence(c, d))
                                     : compose(tensor(a, b), tensor(c, d));
          StringDiagram r = seq_mode ? sequence(compose(a, c), compose(b, d))
                                     : tensor(compose(a, c), compose(b, d));
          ++runs;
          if (!equal(l, r)) ++fails;
        } catch (const validation_error&) {
        }
      }
      notes.push_back(std::string(seq_mode ? "seq" : "par") + "-interchange " +
                      std::to_string(runs));
      if (runs < 500) ++fails;
    }

    // naturality of the distributor
    {
      int runs = 0, attempts = 0;
      while (runs < 500 && attempts < 20000) {
        ++attempts;
        StringDiagram a = gen.random_diagram(1), b = gen.random_diagram(1);
        StringDiagram c = gen.random_diagram(1), d = gen.random_diagram(1);
        try {
          Expression src = par_e(seq_e(a.source_expr, c.source_expr),
                                 seq_e(b.source_expr, d.source_expr));
          Expression mid = par_e(seq_e(a.target_expr, c.target_expr),
                                 seq_e(b.target_expr, d.target_expr));
          Expression tgt = seq_e(par_e(a.target_expr, b.target_expr),
                                 par_e(c.target_expr, d.target_expr));
          Expression low = seq_e(par_e(a.source_expr, b.source_expr),
                                 par_e(c.source_expr, d.source_expr));
          StringDiagram l =
              compose(tensor(sequence(a, c), sequence(b, d)),
                      structure_diagram(gen.sig, mid, tgt));
          StringDiagram r =
              compose(structure_diagram(gen.sig, src, low),
                      sequence(tensor(a, b), tensor(c, d)));
          ++runs;
          if (!equal(l, r)) ++fails;
        } catch (const std::exception&) {
        }
      }
      notes.push_back("dist " + std::to_string(runs));
      if (runs < 500) ++fails;
    }

    double dt = secs(t0);
    std::string note;
    for (const auto& n : notes) note += n + ", ";
    note += std::to_string(fails) + " failures, " + fmt_secs(dt);
    report(4, name, fails == 0, note);
  } catch (const std::exception& e) {
    report(4, name, false, e.what());
  }
}

// --- criterion 5: poset oracles ------------------------------------------------

void criterion5() {
  const char* name = "poset oracle suite";
  try {
    auto t0 = clock_t_::now();
    int fails = 0;
    long long checks = 0;
    std::mt19937 g(9005);

    std::vector<std::vector<TypedPoset>> psets(5);
    for (int n = 0; n <= 4; ++n)
      psets[n] =
          testutil::all_posets(n, std::vector<std::string>(std::size_t(n), "A"));

    auto decode_matches = [&](const TypedPoset& p) {
      bool dec;
      try {
        decode(p);
        dec = true;
      } catch (const not_zetless&) {
        dec = false;
      }
      ++checks;
      if (dec != is_zetless(p)) ++fails;
    };
    auto prime_matches = [&](const TypedPoset& p) {
      using K = primality_result::kind_t;
      auto r = primality(p);
      bool conn = is_connected(p), iconn = is_incomparable_connected(p);
      checks += 4;
      if (((r.kind == K::par_prime) == conn) == false) ++fails;
      if (((r.kind == K::seq_prime || r.ambiguous_both_prime) == iconn) == false)
        ++fails;
      if (r.ambiguous_both_prime && is_zetless(p)) ++fails;
      if (is_zetless(p) && conn && iconn) ++fails;
    };
    auto span_matches = [&](const TypedPoset& p) {
      if (!is_zetless(p)) return;
      for (const auto& comp : connected_components(p))
        for (std::size_t i = 0; i < comp.size(); ++i)
          for (std::size_t j = i + 1; j < comp.size(); ++j) {
            ++checks;
            if (!has_span_or_cospan(p, comp[i], comp[j])) ++fails;
          }
    };

    for (int n = 0; n <= 4; ++n)
      for (const auto& p : psets[n]) {
        decode_matches(p);
        if (n >= 2) prime_matches(p);
        span_matches(p);
      }
    for (int rep = 0; rep < 300; ++rep) {
      TypedPoset p =
          testutil::random_poset(g, 5 + testutil::pick(g, 2), testutil::abc());
      decode_matches(p);
      prime_matches(p);
      span_matches(p);
    }

    // both operations preserve the decodable class
    for (int rep = 0; rep < 300; ++rep) {
      TypedPoset p =
          testutil::random_poset(g, testutil::pick(g, 5), testutil::abc());
      TypedPoset q =
          testutil::random_poset(g, testutil::pick(g, 5), testutil::abc());
      if (!is_zetless(p) || !is_zetless(q)) continue;
      checks += 2;
      if (!is_zetless(seq(p, q))) ++fails;
      if (!is_zetless(tensor(p, q))) ++fails;
    }

    // substitution operad laws
    std::vector<std::string> tps{"A", "B", "C", "D", "E"};
    for (int rep = 0; rep < 200; ++rep) {
      TypedPoset q = testutil::random_poset(g, 2 + testutil::pick(g, 3), tps);
      TypedPoset p1 = testutil::random_poset(g, 1 + testutil::pick(g, 3), tps);
      TypedPoset p2 = testutil::random_poset(g, 1 + testutil::pick(g, 3), tps);
      checks += 3;
      // element 1 shifts to index 0 once the hole at 0 is consumed
      if (!iso_equal(substitute(substitute(q, 0, p1), 0, p2),
                     substitute(substitute(q, 1, p2), 0, p1)))
        ++fails;
      int y = testutil::pick(g, int(p1.size()));
      if (!iso_equal(substitute(substitute(q, 0, p1), int(q.size()) - 1 + y, p2),
                     substitute(q, 0, substitute(p1, y, p2))))
        ++fails;
      int h = testutil::pick(g, int(q.size()));
      TypedPoset dot = from_generators({q.labels[h]}, {});
      if (!iso_equal(substitute(q, h, dot), q)) ++fails;
    }

    // bracketed <=> extraction succeeds <=> substitution factorization
    for (int n = 1; n <= 4; ++n)
      for (const auto& p : psets[n])
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
          std::vector<int> s;
          for (int i = 0; i < n; ++i)
            if (mask >> i & 1) s.push_back(i);
          ++checks;
          if (!is_bracketed(p, s)) {
            try {
              extract(p, s);
              ++fails;
            } catch (const not_bracketed&) {
            }
            continue;
          }
          extraction ex = extract(p, s);
          if (!iso_equal(substitute(ex.outer, ex.hole, ex.inner), p)) ++fails;
        }

    // interval <=> bracketed in some order-extension; saturation brackets
    for (int n = 1; n <= 4; ++n)
      for (const auto& p : psets[n]) {
        std::vector<std::pair<int, int>> missing;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j && !p.le(i, j)) missing.emplace_back(i, j);
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
          std::vector<int> s;
          for (int i = 0; i < n; ++i)
            if (mask >> i & 1) s.push_back(i);
          bool found = is_bracketed(p, s);
          for (std::uint32_t em = 1; !found && em < (1u << missing.size());
               ++em) {
            Rel r = p.leq;
            for (std::size_t b = 0; b < missing.size(); ++b)
              if (em >> b & 1) r[missing[b].first][missing[b].second] = 1;
            rel_transitive_close(r);
            if (rel_antisymmetry_break(r)) continue;
            TypedPoset q;
            q.labels = p.labels;
            q.leq = r;
            if (is_bracketed(q, s)) found = true;
          }
          ++checks;
          if (is_interval(p, s) != found) ++fails;
          if (is_interval(p, s)) {
            TypedPoset sat = saturate_for_interval(p, s);
            ++checks;
            if (!is_bracketed(sat, s)) ++fails;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                if (p.le(i, j) && !sat.le(i, j)) ++fails;
          }
        }
      }

    double dt = secs(t0);
    bool ok = fails == 0 && dt < 60.0;
    report(5, name, ok,
           std::to_string(checks) + " checks, " + std::to_string(fails) +
               " failures, " + fmt_secs(dt));
  } catch (const std::exception& e) {
    report(5, name, false, e.what());
  }
}

// --- criterion 6: evaluation is order-independent and functorial ---------------

void criterion6() {
  const char* name = "evaluation freeness evidence";
  try {
    auto t0 = clock_t_::now();
    std::mt19937 g(9006);
    testutil::DiagramGen gen(g);
    WeightAlgebra<> wa;
    SelfAlgebra sa{gen.sig};
    int fails = 0, done = 0, multi = 0;

    auto weight_all = [&](const StringDiagram& d) {
      for (const auto& nd : d.nodes)
        if (!wa.weights.count(nd.gen))
          wa.weights[nd.gen] = 2 + (long long)(wa.weights.size() % 5);
    };

    while (done < 300) {
      StringDiagram d = gen.random_diagram(2);
      if (done % 2) {
        auto half = [&] {
          Expression s =
              testutil::random_expr(g, 1 + testutil::pick(g, 2), testutil::abc());
          Expression t =
              testutil::random_expr(g, 1 + testutil::pick(g, 2), testutil::abc());
          return from_generator(gen.sig, gen.fresh_gen(s, t));
        };
        StringDiagram a = half(), b = half();
        d = testutil::pick(g, 2) ? tensor(a, b) : sequence(a, b);
      }
      if (d.nodes.size() > 4) continue;
      ++done;
      weight_all(d);
      try {
        auto orders = all_node_orders(d);
        if (orders.size() > 1) ++multi;
        long long w0 = eval_diagram(wa, d, orders[0]);
        StringDiagram s0 = eval_diagram(sa, d, orders[0]);
        if (!equal(s0, d)) ++fails;  // the self algebra reproduces the input
        for (std::size_t i = 1; i < orders.size(); ++i) {
          if (eval_diagram(wa, d, orders[i]) != w0) ++fails;
          if (!equal(eval_diagram(sa, d, orders[i]), s0)) ++fails;
        }
      } catch (const std::exception&) {
        ++fails;
      }
    }
    bool ok = multi >= 20;

    int pairs = 0;
    for (int rep = 0; rep < 500; ++rep) {
      auto [a, b] = gen.composable_pair(2);
      StringDiagram ab = compose(a, b);
      weight_all(ab);
      try {
        if (eval_diagram(wa, ab) != eval_diagram(wa, a) * eval_diagram(wa, b))
          ++fails;
        if (!equal(eval_diagram(sa, ab),
                   compose(eval_diagram(sa, a), eval_diagram(sa, b))))
          ++fails;
        ++pairs;
      } catch (const std::exception&) {
        ++fails;
      }
    }

    double dt = secs(t0);
    ok = ok && fails == 0 && pairs == 500;
    report(6, name, ok,
           std::to_string(done) + " diagrams (" + std::to_string(multi) +
               " with several orders), " + std::to_string(pairs) + " pairs, " +
               std::to_string(fails) + " failures, " + fmt_secs(dt));
  } catch (const std::exception& e) {
    report(6, name, false, e.what());
  }
}

// --- criterion 7: round trips ---------------------------------------------------

void criterion7() {
  const char* name = "round trips";
  try {
    auto t0 = clock_t_::now();
    std::mt19937 g(9007);
    int fails = 0;

    for (int rep = 0; rep < 1000; ++rep) {
      Expression e =
          testutil::random_expr(g, 1 + testutil::pick(g, 8), testutil::abc());
      if (!sym_equal(decode(encode(e)), e)) ++fails;
      if (!(parse(print(e)) == e)) ++fails;
    }

    for (int rep = 0; rep < 300; ++rep) {
      TypedPoset p =
          testutil::random_poset(g, testutil::pick(g, 6), testutil::abc());
      TypedPoset q = poset_from_json(poset_to_json(p));
      if (q.labels != p.labels || q.leq != p.leq) ++fails;
    }

    testutil::DiagramGen gen(g);
    for (int rep = 0; rep < 500; ++rep) {
      StringDiagram d = gen.random_diagram(2);
      try {
        StringDiagram j = diagram_from_json(d.sig, diagram_to_json(d));
        if (diagram_to_json(j) != diagram_to_json(d)) ++fails;
        if (!equal(recompose(d), d)) ++fails;
      } catch (const std::exception&) {
        ++fails;
      }
    }

    double dt = secs(t0);
    report(7, name, fails == 0,
           std::to_string(fails) + " failures, " + fmt_secs(dt));
  } catch (const std::exception& e) {
    report(7, name, false, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <duo-binary> <fixtures-dir>\n");
    return 2;
  }
  std::string bin = argv[1], fx = argv[2];
  criterion1(bin);
  criterion2(fx);
  criterion3(fx);
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  return failures ? 1 : 0;
}
