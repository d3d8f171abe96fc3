#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ra/error.hpp"
#include "ra/eval.hpp"
#include "ra/formula.hpp"
#include "ra/structure.hpp"

namespace ra {

// Limits on the formula language searched: total symbol count, distinct
// variable names usable at once, and quantifier nesting depth.
struct SynthesisBudget {
  unsigned max_length = 8;
  unsigned max_vars = 3;
  unsigned max_quantifier_depth = 3;
};

struct SynthesisOptions {
  // distinct (free variables, extension) classes before giving up
  std::uint64_t class_cap = 1000000;
  std::uint64_t enum_limit = std::uint64_t(1) << 20;
};

struct DefinableEntry {
  unsigned length = 0;
  FormulaPtr witness;
};

struct DefinableSets {
  // defined set (sorted elements of the target sort) -> minimal description
  std::map<std::vector<Element>, DefinableEntry> sets;
  std::uint64_t explored_classes = 0;
};

struct ComplexityResult {
  std::optional<unsigned> length;  // empty: not definable within the budget
  FormulaPtr witness;
  std::uint64_t explored_classes = 0;
};

// Variable names used in synthesized formulas, indexed by [sort position in
// the vocabulary][slot]. Deterministic, and adjusted wholesale if any name
// would collide with a declared vocabulary name.
inline std::vector<std::vector<std::string>> synthesis_variable_names(
    const Vocabulary& vocab, unsigned max_vars) {
  static const char letters[] = {'x', 'y', 'z', 'u', 'w', 'v'};
  for (int round = 0;; ++round) {
    std::vector<std::vector<std::string>> names(vocab.sorts.size());
    bool clean = true;
    for (size_t s = 0; s < vocab.sorts.size(); ++s) {
      for (unsigned j = 0; j < max_vars; ++j) {
        std::string name;
        if (round == 0) {
          name = letters[s % 6];
          if (s >= 6) name += std::to_string(s / 6);
          if (j > 0) name += std::to_string(j + 1);
        } else {
          name = std::string(static_cast<size_t>(round), 'v') + "ar" +
                 std::to_string(s) + "_" + std::to_string(j);
        }
        clean = clean && !vocab.has_name(name);
        names[s].push_back(std::move(name));
      }
      if (!clean) break;
    }
    if (clean) return names;
  }
}

namespace detail {

// search-internal variable identity
struct VarRef {
  std::uint8_t sort = 0;  // index into Vocabulary::sorts
  std::uint8_t slot = 0;

  auto operator<=>(const VarRef&) const = default;
};

using FvSet = std::vector<VarRef>;  // sorted, unique

inline FvSet fv_union(const FvSet& a, const FvSet& b) {
  FvSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

struct ClassKey {
  FvSet fv;
  std::vector<bool> ext;

  bool operator==(const ClassKey&) const = default;
};

struct ClassKeyHash {
  size_t operator()(const ClassKey& k) const {
    size_t h = std::hash<std::vector<bool>>()(k.ext);
    for (const VarRef& v : k.fv)
      h = h * 1000003u + (size_t(v.sort) << 8 | v.slot);
    return h;
  }
};

struct Candidate {
  unsigned cost = 0;
  unsigned depth = 0;
  FvSet fv;
  std::vector<bool> ext;
  FormulaPtr ast;
  std::string text;
};

// search state shared by the generation passes
class Search {
 public:
  Search(const Structure& s, const SynthesisBudget& budget,
         const SynthesisOptions& options)
      : s_(s), budget_(budget), options_(options) {
    const auto& sorts = s.vocabulary.sorts;
    if (sorts.size() > 255)
      throw error(errc::budget_explosion, "too many sorts for the search");
    names_ = synthesis_variable_names(s.vocabulary, budget.max_vars);
    elements_.resize(sorts.size());
    enumerable_.assign(sorts.size(), false);
    for (size_t i = 0; i < sorts.size(); ++i) {
      SortSize size = sort_size(s, sorts[i], options.enum_limit);
      if (!size.over_limit) {
        enumerable_[i] = true;
        elements_[i] = enumerate_elements(s, sorts[i], options.enum_limit);
      }
    }
    bycost_.resize(budget.max_length + 1);
  }

  std::uint8_t sort_index(const std::string& sort) const {
    const auto& sorts = s_.vocabulary.sorts;
    for (size_t i = 0; i < sorts.size(); ++i)
      if (sorts[i] == sort) return static_cast<std::uint8_t>(i);
    throw error(errc::unknown_sort, "sort " + sort + " is not declared");
  }

  bool enumerable(std::uint8_t sort) const { return enumerable_[sort]; }

  const std::vector<Element>& domain(std::uint8_t sort) const {
    return elements_[sort];
  }

  // runs every level up to max_length
  void run() {
    for (unsigned cost = 2; cost <= budget_.max_length; ++cost) level(cost);
  }

  // runs levels until `stop` returns true after a finished level
  template <class F>
  void run_until(F&& stop) {
    for (unsigned cost = 2; cost <= budget_.max_length; ++cost) {
      level(cost);
      if (stop()) return;
    }
  }

  std::uint64_t explored() const { return classes_.size(); }

  // minimal representative per single-free-variable class of the sort, the
  // free variable being slot 0
  std::map<std::vector<bool>, const Candidate*> slot0_classes(
      std::uint8_t sort) const {
    std::map<std::vector<bool>, const Candidate*> out;
    FvSet want = {VarRef{sort, 0}};
    for (const auto& [key, entries] : classes_) {
      if (key.fv != want) continue;
      const Candidate* best = nullptr;
      for (size_t idx : entries) {
        const Candidate& c = arena_[idx];
        if (!best || c.cost < best->cost ||
            (c.cost == best->cost && c.depth < best->depth))
          best = &c;
      }
      if (best) out.emplace(key.ext, best);
    }
    return out;
  }

 private:
  const Structure& s_;
  SynthesisBudget budget_;
  SynthesisOptions options_;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<Element>> elements_;
  std::vector<bool> enumerable_;
  // deque: insert() appends while callers hold references to entries
  std::deque<Candidate> arena_;
  // class -> arena indices forming the (cost, depth) Pareto frontier
  std::unordered_map<ClassKey, std::vector<size_t>, ClassKeyHash> classes_;
  std::vector<std::vector<size_t>> bycost_;

  std::uint64_t grid_cells(const FvSet& fv) const {
    std::uint64_t cells = 1;
    for (const VarRef& v : fv) {
      std::uint64_t n = elements_[v.sort].size();
      if (cells > (std::uint64_t(1) << 22) / std::max<std::uint64_t>(n, 1))
        throw error(errc::budget_explosion,
                    "valuation grid too large; lower max_vars or use smaller "
                    "sorts");
      cells *= n;
    }
    return cells;
  }

  static bool shortlex_less(const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }

  // Keeps the frontier: a candidate survives unless an existing entry is at
  // least as good in both cost and depth (ties on both resolved toward the
  // shortlex-smaller printed form, which keeps results deterministic).
  void insert(Candidate&& c) {
    ClassKey key{c.fv, c.ext};
    auto it = classes_.find(key);
    if (it == classes_.end()) {
      if (classes_.size() >= options_.class_cap)
        throw error(errc::budget_explosion,
                    "signature class count exceeded " +
                        std::to_string(options_.class_cap));
      size_t idx = arena_.size();
      bycost_[c.cost].push_back(idx);
      classes_.emplace(std::move(key), std::vector<size_t>{idx});
      arena_.push_back(std::move(c));
      return;
    }
    std::vector<size_t>& entries = it->second;
    for (size_t idx : entries) {
      Candidate& old = arena_[idx];
      if (old.cost == c.cost && old.depth == c.depth) {
        if (shortlex_less(c.text, old.text)) {
          // same class, same budget point: keep the canonical spelling
          old.ast = c.ast;
          old.text = std::move(c.text);
        }
        return;
      }
      if (old.cost <= c.cost && old.depth <= c.depth) return;  // dominated
    }
    // drop entries the newcomer dominates (same cost, deeper)
    std::erase_if(entries, [&](size_t idx) {
      const Candidate& old = arena_[idx];
      return c.cost <= old.cost && c.depth <= old.depth;
    });
    size_t idx = arena_.size();
    bycost_[c.cost].push_back(idx);
    entries.push_back(idx);
    arena_.push_back(std::move(c));
  }

  struct TermChoice {
    Term term;
    bool is_var = false;
    VarRef ref;           // when is_var
    Element value;        // when constant
  };

  // variables first so canonical equalities read variable-left: x = John
  std::vector<TermChoice> term_choices(const std::string& sort) const {
    std::vector<TermChoice> out;
    std::uint8_t si = 0;
    for (size_t i = 0; i < s_.vocabulary.sorts.size(); ++i)
      if (s_.vocabulary.sorts[i] == sort) si = static_cast<std::uint8_t>(i);
    if (enumerable_[si])
      for (unsigned j = 0; j < budget_.max_vars; ++j)
        out.push_back({var(names_[si][j], sort), true,
                       VarRef{si, static_cast<std::uint8_t>(j)}, {}});
    for (const auto& c : s_.vocabulary.constants)
      if (c.sort == sort)
        out.push_back({cons(c.name, c.sort), false, {},
                       s_.constant_values.at(c.name)});
    return out;
  }

  void level(unsigned cost) {
    atoms(cost);
    if (cost >= 3)  // Not(eta) with eta at cost - 1 >= 2
      for (size_t idx : bycost_[cost - 1]) negation(arena_[idx]);
    if (cost >= 4)  // quantifier over a body at cost - 2 >= 2
      for (size_t idx : bycost_[cost - 2]) quantifiers(arena_[idx]);
    for (unsigned a = 2; a + 2 + 1 <= cost; ++a) {
      unsigned b = cost - 1 - a;
      for (size_t ia : bycost_[a]) {
        for (size_t ib : bycost_[b]) {
          // symmetric connectives once per unordered pair
          if (a < b || (a == b && ia <= ib)) {
            binary_op(Formula::Kind::And, arena_[ia], arena_[ib]);
            binary_op(Formula::Kind::Or, arena_[ia], arena_[ib]);
            binary_op(Formula::Kind::Iff, arena_[ia], arena_[ib]);
          }
          binary_op(Formula::Kind::Implies, arena_[ia], arena_[ib]);
        }
      }
    }
  }

  void atoms(unsigned cost) {
    // R(t1..tk) costs 1 + k
    for (const auto& decl : s_.vocabulary.relations) {
      if (1 + decl.arg_sorts.size() != cost) continue;
      std::vector<std::vector<TermChoice>> per_arg;
      bool ok = true;
      for (const auto& sort : decl.arg_sorts) {
        per_arg.push_back(term_choices(sort));
        ok = ok && !per_arg.back().empty();
      }
      if (!ok) continue;
      std::vector<size_t> pick(per_arg.size(), 0);
      bool done = false;
      while (!done) {
        std::vector<Term> args;
        FvSet fv;
        for (size_t i = 0; i < pick.size(); ++i) {
          const TermChoice& t = per_arg[i][pick[i]];
          args.push_back(t.term);
          if (t.is_var) fv = fv_union(fv, {t.ref});
        }
        if (fv.size() <= budget_.max_vars) {
          std::vector<TermChoice> chosen;
          for (size_t i = 0; i < pick.size(); ++i)
            chosen.push_back(per_arg[i][pick[i]]);
          atom_candidate(rel(decl.name, args), fv, chosen, &decl);
        }
        done = true;
        for (size_t i = pick.size(); i > 0;) {
          --i;
          if (++pick[i] < per_arg[i].size()) {
            done = false;
            break;
          }
          pick[i] = 0;
        }
      }
    }
    if (cost != 3) return;
    // t1 = t2 (reflexive pairs allowed) and t1 != t2 (distinct terms only):
    // with distinct-term disequalities the empty set's cheapest description
    // is !(x = x) at cost 4, never x != x at cost 3
    for (const auto& sort : s_.vocabulary.sorts) {
      std::vector<TermChoice> terms = term_choices(sort);
      for (size_t i = 0; i < terms.size(); ++i) {
        for (size_t j = i; j < terms.size(); ++j) {
          FvSet fv;
          if (terms[i].is_var) fv = fv_union(fv, {terms[i].ref});
          if (terms[j].is_var) fv = fv_union(fv, {terms[j].ref});
          if (fv.size() > budget_.max_vars) continue;
          std::vector<TermChoice> chosen = {terms[i], terms[j]};
          atom_candidate(eq(terms[i].term, terms[j].term), fv, chosen,
                         nullptr);
          if (i != j)
            atom_candidate(neq(terms[i].term, terms[j].term), fv, chosen,
                           nullptr);
        }
      }
    }
  }

  void atom_candidate(FormulaPtr ast, const FvSet& fv,
                      const std::vector<TermChoice>& terms,
                      const RelationDecl* decl) {
    std::uint64_t cells = grid_cells(fv);
    std::vector<bool> ext(cells);
    std::vector<std::uint64_t> coord(fv.size(), 0);
    std::vector<Element> args(terms.size());
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
      for (size_t t = 0; t < terms.size(); ++t) {
        if (!terms[t].is_var) {
          args[t] = terms[t].value;
          continue;
        }
        for (size_t axis = 0; axis < fv.size(); ++axis)
          if (fv[axis] == terms[t].ref) {
            args[t] = elements_[fv[axis].sort][coord[axis]];
            break;
          }
      }
      bool truth;
      if (decl)
        truth = holds(s_, ast->rel, args);
      else if (ast->kind == Formula::Kind::Eq)
        truth = args[0] == args[1];
      else
        truth = args[0] != args[1];
      ext[cell] = truth;
      for (size_t axis = fv.size(); axis > 0;) {
        --axis;
        if (++coord[axis] < elements_[fv[axis].sort].size()) break;
        coord[axis] = 0;
      }
    }
    unsigned cost = formula_length(ast);
    std::string text = pretty(ast);
    insert(Candidate{cost, 0, fv, std::move(ext), std::move(ast),
                     std::move(text)});
  }

  void negation(const Candidate& c) {
    std::vector<bool> ext = c.ext;
    ext.flip();
    FormulaPtr ast = neg(c.ast);
    insert(Candidate{c.cost + 1, c.depth, c.fv, std::move(ext), ast,
                     pretty(ast)});
  }

  void quantifiers(const Candidate& c) {
    if (c.depth + 1 > budget_.max_quantifier_depth) return;
    for (size_t axis = 0; axis < c.fv.size(); ++axis) {
      VarRef bound = c.fv[axis];
      FvSet fv;
      for (size_t i = 0; i < c.fv.size(); ++i)
        if (i != axis) fv.push_back(c.fv[i]);
      // same-sort axes among the remaining free variables, for the dotted
      // exclusion rule
      std::vector<size_t> same_sort;
      for (size_t i = 0; i < fv.size(); ++i)
        if (fv[i].sort == bound.sort) same_sort.push_back(i);

      std::uint64_t cells = grid_cells(fv);
      const auto& axis_dom = elements_[bound.sort];
      std::vector<std::uint64_t> coord(fv.size(), 0);
      std::vector<bool> plain_ex(cells), plain_all(cells), dot_ex, dot_all;
      bool dotted = !same_sort.empty();
      if (dotted) {
        dot_ex.resize(cells);
        dot_all.resize(cells);
      }
      for (std::uint64_t cell = 0; cell < cells; ++cell) {
        bool pe = false, pa = true, de = false, da = true;
        for (std::uint64_t v = 0; v < axis_dom.size(); ++v) {
          bool b = c.ext[body_index(c.fv, axis, coord, v)];
          pe = pe || b;
          pa = pa && b;
          if (dotted) {
            bool excluded = false;
            for (size_t i : same_sort)
              excluded = excluded || coord[i] == v;
            if (!excluded) {
              de = de || b;
              da = da && b;
            }
          }
        }
        plain_ex[cell] = pe;
        plain_all[cell] = pa;
        if (dotted) {
          dot_ex[cell] = de;
          dot_all[cell] = da;
        }
        for (size_t i = fv.size(); i > 0;) {
          --i;
          if (++coord[i] < elements_[fv[i].sort].size()) break;
          coord[i] = 0;
        }
      }
      const std::string& name = names_[bound.sort][bound.slot];
      const std::string& sort = s_.vocabulary.sorts[bound.sort];
      auto emit = [&](Formula::Kind kind, std::vector<bool>&& ext) {
        FormulaPtr ast = quantifier(kind, name, sort, c.ast);
        insert(Candidate{c.cost + 2, c.depth + 1, fv, std::move(ext), ast,
                         pretty(ast)});
      };
      emit(Formula::Kind::Exists, std::move(plain_ex));
      emit(Formula::Kind::Forall, std::move(plain_all));
      if (dotted) {
        emit(Formula::Kind::DottedExists, std::move(dot_ex));
        emit(Formula::Kind::DottedForall, std::move(dot_all));
      } else {
        // without same-sort free variables the dotted forms coincide with
        // the plain ones and are skipped
      }
    }
  }

  // linear index into the body extension: coordinates of the reduced grid
  // plus the bound axis value
  std::uint64_t body_index(const FvSet& body_fv, size_t axis,
                           const std::vector<std::uint64_t>& coord,
                           std::uint64_t v) const {
    std::uint64_t idx = 0;
    size_t ci = 0;
    for (size_t i = 0; i < body_fv.size(); ++i) {
      std::uint64_t c = i == axis ? v : coord[ci++];
      idx = idx * elements_[body_fv[i].sort].size() + c;
    }
    return idx;
  }

  void binary_op(Formula::Kind kind, const Candidate& a, const Candidate& b) {
    FvSet fv = fv_union(a.fv, b.fv);
    if (fv.size() > budget_.max_vars) return;
    unsigned depth = std::max(a.depth, b.depth);
    std::uint64_t cells = grid_cells(fv);
    // axis positions of each operand's variables in the result grid
    auto axis_map = [&](const FvSet& sub) {
      std::vector<size_t> map;
      for (const VarRef& v : sub)
        map.push_back(static_cast<size_t>(
            std::find(fv.begin(), fv.end(), v) - fv.begin()));
      return map;
    };
    std::vector<size_t> ma = axis_map(a.fv), mb = axis_map(b.fv);
    std::vector<std::uint64_t> coord(fv.size(), 0);
    std::vector<bool> ext(cells);
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
      std::uint64_t ia = 0, ib = 0;
      for (size_t i = 0; i < ma.size(); ++i)
        ia = ia * elements_[a.fv[i].sort].size() + coord[ma[i]];
      for (size_t i = 0; i < mb.size(); ++i)
        ib = ib * elements_[b.fv[i].sort].size() + coord[mb[i]];
      bool va = a.ext[ia], vb = b.ext[ib];
      bool r = false;
      switch (kind) {
        case Formula::Kind::And: r = va && vb; break;
        case Formula::Kind::Or: r = va || vb; break;
        case Formula::Kind::Implies: r = !va || vb; break;
        case Formula::Kind::Iff: r = va == vb; break;
        default: throw error(errc::internal_error, "bad binary kind");
      }
      ext[cell] = r;
      for (size_t i = fv.size(); i > 0;) {
        --i;
        if (++coord[i] < elements_[fv[i].sort].size()) break;
        coord[i] = 0;
      }
    }
    FormulaPtr ast = binary(kind, a.ast, b.ast);
    insert(Candidate{1 + a.cost + b.cost, depth, std::move(fv),
                     std::move(ext), ast, pretty(ast)});
  }
};

}  // namespace detail

// Every subset of the sort definable by a one-free-variable formula within
// the budget, with a minimal-length witness for each. The search works
// bottom-up by cost and collapses formulas with equal free variables and
// equal extension over the valuation grid, keeping per class a Pareto
// frontier over (cost, quantifier depth) so deeper-but-cheaper
// representatives never block shallower compositions. Quantifiers bind only
// variables free in their body; disequality atoms need syntactically
// distinct terms. Deterministic: candidates are generated in a fixed order
// and ties break on the printed form.
inline DefinableSets enumerate_definable(const Structure& s,
                                         const std::string& sort,
                                         const SynthesisBudget& budget,
                                         const SynthesisOptions& options = {}) {
  SortSize size = sort_size(s, sort, options.enum_limit);
  if (size.over_limit)
    throw error(errc::sort_too_large,
                "sort " + sort + " has " + size.count.str() +
                    " elements, over enumeration limit " +
                    std::to_string(options.enum_limit));
  detail::Search search(s, budget, options);
  std::uint8_t si = search.sort_index(sort);
  search.run();
  DefinableSets out;
  const auto& domain = search.domain(si);
  for (const auto& [ext, cand] : search.slot0_classes(si)) {
    std::vector<Element> set;
    for (size_t i = 0; i < domain.size(); ++i)
      if (ext[i]) set.push_back(domain[i]);
    out.sets.emplace(std::move(set),
                     DefinableEntry{cand->cost, cand->ast});
  }
  out.explored_classes = search.explored();
  return out;
}

// Minimal description length of one target set, stopping at the first level
// that defines it. The witness is re-checked against the evaluator before
// being returned.
inline ComplexityResult description_complexity(
    const Structure& s, const std::string& sort,
    std::vector<Element> target, const SynthesisBudget& budget,
    const SynthesisOptions& options = {}) {
  SortSize size = sort_size(s, sort, options.enum_limit);
  if (size.over_limit)
    throw error(errc::sort_too_large,
                "sort " + sort + " has " + size.count.str() +
                    " elements, over enumeration limit " +
                    std::to_string(options.enum_limit));
  std::sort(target.begin(), target.end());
  detail::Search search(s, budget, options);
  std::uint8_t si = search.sort_index(sort);
  const auto& domain = search.domain(si);
  std::vector<bool> want(domain.size());
  {
    size_t at = 0;
    for (const Element& e : target) {
      while (at < domain.size() && domain[at] < e) ++at;
      if (at == domain.size() || !(domain[at] == e))
        throw error(errc::type_mismatch,
                    "target set contains an element outside sort " + sort);
      want[at] = true;
    }
  }
  ComplexityResult result;
  search.run_until([&]() {
    auto classes = search.slot0_classes(si);
    auto it = classes.find(want);
    if (it == classes.end()) return false;
    result.length = it->second->cost;
    result.witness = it->second->ast;
    return true;
  });
  result.explored_classes = search.explored();
  if (result.witness) {
    // soundness gate: the witness must actually define the target
    auto check = defined_set(s, result.witness,
                             EvalOptions{options.enum_limit});
    std::sort(check.begin(), check.end());
    if (check != target)
      throw error(errc::internal_error,
                  "synthesized witness does not define the target set");
  }
  return result;
}

}  // namespace ra
