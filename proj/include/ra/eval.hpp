#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ra/error.hpp"
#include "ra/formula.hpp"
#include "ra/structure.hpp"

namespace ra {

struct EvalOptions {
  // largest sort a quantifier or defined_set may enumerate
  std::uint64_t enum_limit = std::uint64_t(1) << 20;
};

// Variable bindings, innermost last. Lookup walks backwards so shadowed
// bindings behave like the formula's scoping.
class Valuation {
 public:
  void bind(const std::string& name, Element value) {
    bindings_.emplace_back(name, std::move(value));
  }

  void unbind() { bindings_.pop_back(); }

  const Element* lookup(const std::string& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

 private:
  std::vector<std::pair<std::string, Element>> bindings_;
};

namespace detail {

inline Element resolve_term(const Structure& s, const Term& t,
                            const Valuation& v) {
  if (t.kind == TermKind::Constant) {
    auto it = s.constant_values.find(t.name);
    if (it == s.constant_values.end())
      throw error(errc::unknown_symbol,
                  "constant " + t.name + " has no value in this structure");
    return it->second;
  }
  const Element* bound = v.lookup(t.name);
  if (!bound)
    throw error(errc::unbound_variable,
                "variable " + t.name + " is not bound");
  return *bound;
}

}  // namespace detail

// Truth of phi in s under the given bindings. All free variables of phi
// must be bound. Quantified sorts are enumerated and must be within
// options.enum_limit.
inline bool eval(const Structure& s, const FormulaPtr& f, Valuation& v,
                 const EvalOptions& options = {}) {
  switch (f->kind) {
    case Formula::Kind::RelApp: {
      std::vector<Element> args;
      args.reserve(f->terms.size());
      for (const Term& t : f->terms)
        args.push_back(detail::resolve_term(s, t, v));
      return holds(s, f->rel, args);
    }
    case Formula::Kind::Eq:
      return detail::resolve_term(s, f->terms[0], v) ==
             detail::resolve_term(s, f->terms[1], v);
    case Formula::Kind::Neq:
      return detail::resolve_term(s, f->terms[0], v) !=
             detail::resolve_term(s, f->terms[1], v);
    case Formula::Kind::Not:
      return !eval(s, f->child, v, options);
    case Formula::Kind::And:
      return eval(s, f->left, v, options) && eval(s, f->right, v, options);
    case Formula::Kind::Or:
      return eval(s, f->left, v, options) || eval(s, f->right, v, options);
    case Formula::Kind::Implies:
      return !eval(s, f->left, v, options) || eval(s, f->right, v, options);
    case Formula::Kind::Iff:
      return eval(s, f->left, v, options) == eval(s, f->right, v, options);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::DottedExists:
    case Formula::Kind::DottedForall: {
      SortSize size = sort_size(s, f->var_sort, options.enum_limit);
      if (size.over_limit)
        throw error(errc::sort_too_large,
                    "cannot quantify over sort " + f->var_sort + " with " +
                        size.count.str() + " elements (limit " +
                        std::to_string(options.enum_limit) + ")");
      bool dotted = f->kind == Formula::Kind::DottedExists ||
                    f->kind == Formula::Kind::DottedForall;
      bool existential = f->kind == Formula::Kind::Exists ||
                         f->kind == Formula::Kind::DottedExists;
      // dotted quantifiers skip the values of the body's free variables of
      // the quantified sort, mirroring the desugared inequalities
      std::vector<Element> excluded;
      if (dotted) {
        for (const auto& [name, sort] : free_variables(f->child))
          if (name != f->var && sort == f->var_sort)
            excluded.push_back(detail::resolve_term(
                s, var(name, sort), v));
      }
      bool result = !existential;
      for_each_element(s, f->var_sort, [&](const Element& e) {
        if (dotted &&
            std::find(excluded.begin(), excluded.end(), e) != excluded.end())
          return true;
        v.bind(f->var, e);
        bool b = eval(s, f->child, v, options);
        v.unbind();
        if (b == existential) {
          result = existential;
          return false;
        }
        return true;
      });
      return result;
    }
  }
  throw error(errc::internal_error, "bad formula kind");
}

inline bool eval_closed(const Structure& s, const FormulaPtr& f,
                        const EvalOptions& options = {}) {
  Valuation v;
  return eval(s, f, v, options);
}

// The set phi defines: all elements of the free variable's sort satisfying
// phi. Requires exactly one free variable.
inline std::vector<Element> defined_set(const Structure& s, const FormulaPtr& f,
                                        const EvalOptions& options = {}) {
  auto frees = free_variables(f);
  if (frees.size() != 1) {
    std::string names;
    for (const auto& [name, sort] : frees) {
      if (!names.empty()) names += ", ";
      names += name;
    }
    throw error(errc::extra_free_variables,
                "defined_set needs exactly one free variable, found " +
                    (frees.empty() ? std::string("none") : names));
  }
  const auto& [name, sort] = *frees.begin();
  SortSize size = sort_size(s, sort, options.enum_limit);
  if (size.over_limit)
    throw error(errc::sort_too_large,
                "cannot enumerate sort " + sort + " with " +
                    size.count.str() + " elements (limit " +
                    std::to_string(options.enum_limit) + ")");
  std::vector<Element> out;
  Valuation v;
  for_each_element(s, sort, [&](const Element& e) {
    v.bind(name, e);
    if (eval(s, f, v, options)) out.push_back(e);
    v.unbind();
    return true;
  });
  return out;
}

}  // namespace ra
