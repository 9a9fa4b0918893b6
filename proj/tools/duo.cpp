// duo: batch tool over duoidal term files.
//
//   duo check FILE...              elaborate + validate every term
//   duo eq FILE T1 T2              compare two terms (prints equal/distinct)
//   duo normalize FILE T           canonical JSON form of a term's diagram
//   duo render FILE T [--ascii]    DOT (default) or text rendering
//   duo enumerate N --types A,B    all zetless posets of size N
//   duo eval FILE T --algebra ...  evaluate a term in a built-in algebra
//
// Exit codes: 0 ok/true, 1 invalid/false, 2 usage.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "duodiag/duodiag.hpp"

using namespace duodiag;

namespace {

int run_check(const std::vector<std::string>& files) {
  bool bad = false;
  for (const auto& path : files) {
    DuoFile f;
    try {
      f = load_duo_file(path);
    } catch (const error& e) {
      std::cout << "error " << path << ": " << e.what() << "\n";
      bad = true;
      continue;
    }
    for (const auto& t : f.terms) {
      try {
        StringDiagram d = elaborate(f, t);
        std::cout << "ok " << path << " " << t.name << " : "
                  << print(d.source_expr) << " -> " << print(d.target_expr)
                  << "\n";
      } catch (const error& e) {
        std::cout << "error " << path << ":" << t.line << " " << t.name
                  << ": " << e.what() << "\n";
        bad = true;
      }
    }
  }
  return bad ? 1 : 0;
}

int run_eq(const std::string& file, const std::string& t1,
           const std::string& t2) {
  DuoFile f = load_duo_file(file);
  StringDiagram a = elaborate(f, f.term(t1));
  StringDiagram b = elaborate(f, f.term(t2));
  if (equal(a, b)) {
    std::cout << "equal\n";
    return 0;
  }
  std::cout << "distinct\n";
  return 1;
}

int run_normalize(const std::string& file, const std::string& term) {
  DuoFile f = load_duo_file(file);
  StringDiagram d = elaborate(f, f.term(term));
  std::cout << diagram_to_json(normal_form(d)).dump(2) << "\n";
  return 0;
}

int run_render(const std::string& file, const std::string& term, bool ascii,
               bool order) {
  DuoFile f = load_duo_file(file);
  StringDiagram d = elaborate(f, f.term(term));
  std::cout << (ascii ? to_ascii(d) : to_dot(d, order));
  return 0;
}

int run_enumerate(int n, const std::vector<std::string>& types) {
  auto posets = enumerate_zetless(n, types);
  for (const auto& p : posets) std::cout << poset_to_json(p).dump() << "\n";
  std::cout << "count: " << posets.size() << "\n";
  return 0;
}

int run_eval(const std::string& file, const std::string& term,
             const std::string& algebra,
             const std::vector<std::string>& weights) {
  DuoFile f = load_duo_file(file);
  StringDiagram d = elaborate(f, f.term(term));
  if (algebra == "weight") {
    WeightAlgebra<long long> alg;
    for (const auto& w : weights) {
      auto eq = w.find('=');
      if (eq == std::string::npos)
        throw error("weights must be name=value, got '" + w + "'");
      alg.weights[w.substr(0, eq)] = std::stoll(w.substr(eq + 1));
    }
    std::cout << eval_diagram(alg, d) << "\n";
    return 0;
  }
  if (algebra == "self") {
    SelfAlgebra alg{f.sig};
    StringDiagram r = eval_diagram(alg, d);
    std::cout << diagram_to_json(normal_form(r)).dump(2) << "\n";
    return 0;
  }
  throw error("unknown algebra '" + algebra + "' (try weight or self)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duoidal string diagram tool"};
  app.require_subcommand(1);

  std::vector<std::string> files, types, weights;
  std::string file, t1, t2, algebra = "weight";
  int n = 0;
  bool ascii = false, order = false;

  auto* check = app.add_subcommand("check", "validate every term in the files");
  check->add_option("files", files, "term files")->required();

  auto* eq = app.add_subcommand("eq", "compare two terms of one file");
  eq->add_option("file", file, "term file")->required();
  eq->add_option("t1", t1, "first term")->required();
  eq->add_option("t2", t2, "second term")->required();

  auto* norm = app.add_subcommand("normalize", "canonical JSON of a term");
  norm->add_option("file", file, "term file")->required();
  norm->add_option("term", t1, "term name")->required();

  auto* render = app.add_subcommand("render", "render a term's diagram");
  render->add_option("file", file, "term file")->required();
  render->add_option("term", t1, "term name")->required();
  render->add_flag("--ascii", ascii, "text rendering instead of DOT");
  render->add_flag("--poset", order,
                   "add dashed wire-order edges (DOT only)");

  auto* enumerate = app.add_subcommand("enumerate",
                                       "all zetless posets of a given size");
  enumerate->add_option("n", n, "number of elements")->required();
  enumerate->add_option("--types", types, "type labels")
      ->delimiter(',')
      ->required();

  auto* ev = app.add_subcommand("eval", "evaluate a term in an algebra");
  ev->add_option("file", file, "term file")->required();
  ev->add_option("term", t1, "term name")->required();
  ev->add_option("--algebra", algebra, "weight or self");
  ev->add_option("--weights", weights, "generator weights f=2,g=3")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*check) return run_check(files);
    if (*eq) return run_eq(file, t1, t2);
    if (*norm) return run_normalize(file, t1);
    if (*render) return run_render(file, t1, ascii, order);
    if (*enumerate) return run_enumerate(n, types);
    if (*ev) return run_eval(file, t1, algebra, weights);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
