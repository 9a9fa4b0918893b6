#pragma once

// Signatures: a set of base types plus typed generators whose boundaries are
// duoidal expressions over those types.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"

namespace duodiag {

struct Generator {
  std::string name;
  Expression source, target;
};

struct Signature {
  std::vector<std::string> types;          // insertion order
  std::vector<Generator> generators;       // insertion order
  std::map<std::string, int> gen_index;

  bool has_type(const std::string& t) const {
    for (const auto& x : types)
      if (x == t) return true;
    return false;
  }

  void add_type(const std::string& t) {
    if (t == "N") throw unknown_type("'N' is reserved for the unit");
    if (!has_type(t)) types.push_back(t);
  }

  void check_expr(const Expression& e) const {
    for (const auto& t : list_type(e))
      if (!has_type(t)) throw unknown_type("undeclared type '" + t + "'");
  }

  void add_generator(const std::string& name, Expression source,
                     Expression target) {
    if (gen_index.count(name))
      throw duplicate_generator("generator '" + name + "' declared twice");
    check_expr(source);
    check_expr(target);
    gen_index[name] = int(generators.size());
    generators.push_back(Generator{name, std::move(source), std::move(target)});
  }

  bool has_generator(const std::string& name) const {
    return gen_index.count(name) != 0;
  }

  const Generator& generator(const std::string& name) const {
    auto it = gen_index.find(name);
    if (it == gen_index.end())
      throw unknown_generator("unknown generator '" + name + "'");
    return generators[it->second];
  }
};

inline bool operator==(const Generator& a, const Generator& b) {
  return a.name == b.name && a.source == b.source && a.target == b.target;
}

inline bool operator==(const Signature& a, const Signature& b) {
  return a.types == b.types && a.generators == b.generators;
}
inline bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }

// Re-checks the construction invariants on an arbitrary Signature value
// (useful after hand-assembly or deserialization).
inline void validate_signature(const Signature& s) {
  std::map<std::string, int> seen;
  for (const auto& g : s.generators) {
    if (seen.count(g.name))
      throw duplicate_generator("generator '" + g.name + "' declared twice");
    seen[g.name] = 1;
    for (const auto& t : list_type(g.source))
      if (!s.has_type(t))
        throw unknown_type("undeclared type '" + t + "' in generator '" +
                           g.name + "'");
    for (const auto& t : list_type(g.target))
      if (!s.has_type(t))
        throw unknown_type("undeclared type '" + t + "' in generator '" +
                           g.name + "'");
  }
}

// A homomorphism of signatures: a type renaming plus a generator renaming
// whose boundaries agree with the renamed boundaries.
struct SignatureHom {
  std::shared_ptr<const Signature> source, target;
  std::map<std::string, std::string> type_map;
  std::map<std::string, std::string> gen_map;

  std::string map_type(const std::string& t) const {
    auto it = type_map.find(t);
    if (it == type_map.end())
      throw unknown_type("hom undefined on type '" + t + "'");
    return it->second;
  }
  Expression map_expr(const Expression& e) const {
    return map_types(e, [&](const std::string& t) { return map_type(t); });
  }
};

inline void validate_hom(const SignatureHom& h) {
  if (!h.source || !h.target) throw error("hom missing source or target");
  for (const auto& [t, u] : h.type_map) {
    if (!h.source->has_type(t))
      throw unknown_type("hom defined on undeclared type '" + t + "'");
    if (!h.target->has_type(u))
      throw unknown_type("hom maps into undeclared type '" + u + "'");
  }
  for (const auto& g : h.source->generators) {
    auto it = h.gen_map.find(g.name);
    if (it == h.gen_map.end())
      throw unknown_generator("hom undefined on generator '" + g.name + "'");
    const Generator& img = h.target->generator(it->second);
    if (!(img.source == h.map_expr(g.source)) ||
        !(img.target == h.map_expr(g.target)))
      throw validation_error(validation_code::type_mismatch,
                             "hom image of generator '" + g.name +
                                 "' has mismatched boundary");
  }
}

}  // namespace duodiag
