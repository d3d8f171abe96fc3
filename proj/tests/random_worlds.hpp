#pragma once

// Deterministic random structures and formulas for property tests. All
// generators take the RNG by reference so tests control the seed.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ra/eval.hpp"
#include "ra/formula.hpp"
#include "ra/structure.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline std::uint64_t pick(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

// Small explicit-sort world: 1-2 sorts of 1-5 elements, 1-3 relations of
// arity 1-2 with random extensions, sometimes a constant per sort.
inline ra::Structure random_world(Rng& rng) {
  ra::Vocabulary v;
  size_t sort_count = 1 + pick(rng, 2);
  std::vector<std::vector<std::string>> ids(sort_count);
  for (size_t s = 0; s < sort_count; ++s) {
    v.sorts.push_back("S" + std::to_string(s));
    size_t n = 1 + pick(rng, 5);
    for (size_t i = 0; i < n; ++i)
      ids[s].push_back("e" + std::to_string(s) + std::to_string(i));
  }
  size_t rel_count = 1 + pick(rng, 3);
  for (size_t r = 0; r < rel_count; ++r) {
    ra::RelationDecl d;
    d.name = "P" + std::to_string(r);
    size_t arity = 1 + pick(rng, 2);
    for (size_t a = 0; a < arity; ++a)
      d.arg_sorts.push_back(v.sorts[pick(rng, sort_count)]);
    v.relations.push_back(d);
  }
  ra::RawStructure raw;
  for (size_t s = 0; s < sort_count; ++s) {
    ra::SortCarrier c;
    c.kind = ra::SortCarrier::Kind::Explicit;
    c.elements = ids[s];
    raw.carriers[v.sorts[s]] = c;
  }
  for (const auto& d : v.relations) {
    std::vector<std::vector<std::string>> tuples;
    // include each possible tuple with probability 1/2
    std::vector<size_t> sizes;
    size_t total = 1;
    for (const auto& s : d.arg_sorts) {
      size_t n = ids[static_cast<size_t>(s[1] - '0')].size();
      sizes.push_back(n);
      total *= n;
    }
    for (size_t t = 0; t < total; ++t) {
      if (pick(rng, 2) == 0) continue;
      std::vector<std::string> tuple;
      size_t rest = t;
      for (size_t a = 0; a < d.arg_sorts.size(); ++a) {
        tuple.push_back(
            ids[static_cast<size_t>(d.arg_sorts[a][1] - '0')][rest % sizes[a]]);
        rest /= sizes[a];
      }
      tuples.push_back(tuple);
    }
    raw.relation_tuples[d.name] = tuples;
  }
  for (size_t s = 0; s < sort_count; ++s) {
    if (pick(rng, 2) == 0) continue;
    ra::ConstantDecl c;
    c.name = "c" + std::to_string(s);
    c.sort = v.sorts[s];
    v.constants.push_back(c);
    raw.constant_values[c.name] = ids[s][pick(rng, ids[s].size())];
  }
  return ra::validate_or_throw(v, raw);
}

// Random formula over the structure's vocabulary. Free variables come from
// `context` (name -> sort); quantifiers may bind fresh variables q0, q1...
// over any sort listed in `quant_sorts`. Dotted quantifiers included.
struct FormulaGen {
  const ra::Structure& s;
  std::map<std::string, std::string> context;
  std::vector<std::string> quant_sorts;
  Rng& rng;
  int next_bound = 0;

  ra::FormulaPtr atom(std::vector<std::pair<std::string, std::string>>& scope) {
    // term sources per sort: context vars, in-scope bound vars, constants
    auto term_of = [&](const std::string& sort,
                       std::vector<ra::Term>& out) {
      for (const auto& [name, vsort] : context)
        if (vsort == sort) out.push_back(ra::var(name, vsort));
      for (const auto& [name, vsort] : scope)
        if (vsort == sort) out.push_back(ra::var(name, vsort));
      for (const auto& c : s.vocabulary.constants)
        if (c.sort == sort) out.push_back(ra::cons(c.name, c.sort));
    };
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (!s.vocabulary.relations.empty() && pick(rng, 3) != 0) {
        const auto& d =
            s.vocabulary.relations[pick(rng, s.vocabulary.relations.size())];
        std::vector<ra::Term> args;
        bool ok = true;
        for (const auto& sort : d.arg_sorts) {
          std::vector<ra::Term> options;
          term_of(sort, options);
          if (options.empty()) {
            ok = false;
            break;
          }
          args.push_back(options[pick(rng, options.size())]);
        }
        if (ok) return ra::rel(d.name, args);
      } else {
        const std::string& sort =
            quant_sorts[pick(rng, quant_sorts.size())];
        std::vector<ra::Term> options;
        term_of(sort, options);
        if (options.size() < 1) continue;
        ra::Term a = options[pick(rng, options.size())];
        ra::Term b = options[pick(rng, options.size())];
        return pick(rng, 2) ? ra::eq(a, b) : ra::neq(a, b);
      }
    }
    // always-available fallback
    if (!context.empty()) {
      auto [name, sort] = *context.begin();
      return ra::eq(ra::var(name, sort), ra::var(name, sort));
    }
    const std::string& sort = quant_sorts[0];
    ra::FormulaPtr body = ra::eq(ra::var("q_fb", sort), ra::var("q_fb", sort));
    return ra::exists("q_fb", sort, body);
  }

  ra::FormulaPtr gen(int depth,
                     std::vector<std::pair<std::string, std::string>>& scope) {
    if (depth <= 0 || pick(rng, 4) == 0) return atom(scope);
    switch (pick(rng, 8)) {
      case 0:
        return ra::neg(gen(depth - 1, scope));
      case 1:
        return ra::conj(gen(depth - 1, scope), gen(depth - 1, scope));
      case 2:
        return ra::disj(gen(depth - 1, scope), gen(depth - 1, scope));
      case 3:
        return ra::implies(gen(depth - 1, scope), gen(depth - 1, scope));
      case 4:
        return ra::iff(gen(depth - 1, scope), gen(depth - 1, scope));
      default: {
        std::string name = "q" + std::to_string(next_bound++);
        std::string sort = quant_sorts[pick(rng, quant_sorts.size())];
        scope.emplace_back(name, sort);
        ra::FormulaPtr body = gen(depth - 1, scope);
        scope.pop_back();
        switch (pick(rng, 4)) {
          case 0: return ra::exists(name, sort, body);
          case 1: return ra::forall(name, sort, body);
          case 2: return ra::dotted_exists(name, sort, body);
          default: return ra::dotted_forall(name, sort, body);
        }
      }
    }
  }

  ra::FormulaPtr operator()(int depth = 3) {
    std::vector<std::pair<std::string, std::string>> scope;
    return gen(depth, scope);
  }
};

// Context of 0-2 free variables over the structure's explicit sorts, plus a
// random valuation for them.
inline std::pair<std::map<std::string, std::string>, ra::Valuation>
random_context(const ra::Structure& s, Rng& rng, size_t max_vars = 2) {
  std::vector<std::string> sorts;
  for (const auto& [name, c] : s.carriers)
    if (!c.implicit()) sorts.push_back(name);
  std::map<std::string, std::string> context;
  ra::Valuation v;
  size_t n = pick(rng, max_vars + 1);
  for (size_t i = 0; i < n; ++i) {
    std::string name = "fv" + std::to_string(i);
    const std::string& sort = sorts[pick(rng, sorts.size())];
    context[name] = sort;
    std::uint64_t size = s.explicit_size(s.carrier(sort));
    ra::Element e;
    e.index = static_cast<std::uint32_t>(pick(rng, size));
    v.bind(name, e);
  }
  return {context, v};
}

}  // namespace testgen
