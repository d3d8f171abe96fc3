#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ra/error.hpp"
#include "ra/vocabulary.hpp"

namespace ra {

enum class TermKind : std::uint8_t { Variable, Constant };

struct Term {
  TermKind kind = TermKind::Variable;
  std::string name;
  std::string sort;

  bool operator==(const Term&) const = default;
};

inline Term var(std::string name, std::string sort) {
  return {TermKind::Variable, std::move(name), std::move(sort)};
}

inline Term cons(std::string name, std::string sort) {
  return {TermKind::Constant, std::move(name), std::move(sort)};
}

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// One node of a formula. Which members are meaningful depends on kind:
// RelApp uses rel+terms; Eq/Neq use terms (exactly two); Not uses child;
// binary connectives use left+right; quantifiers use var, var_sort, child.
// Dotted quantifiers range over elements distinct from the values of the
// body's free variables of the quantified sort.
struct Formula {
  enum class Kind : std::uint8_t {
    RelApp,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Exists,
    Forall,
    DottedExists,
    DottedForall,
  };

  Kind kind = Kind::RelApp;
  std::string rel;
  std::vector<Term> terms;
  FormulaPtr child;
  FormulaPtr left, right;
  std::string var;
  std::string var_sort;
};

inline FormulaPtr rel(std::string name, std::vector<Term> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::RelApp;
  f->rel = std::move(name);
  f->terms = std::move(args);
  return f;
}

inline FormulaPtr eq(Term a, Term b) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Eq;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

inline FormulaPtr neq(Term a, Term b) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Neq;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

inline FormulaPtr neg(FormulaPtr inner) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Not;
  f->child = std::move(inner);
  return f;
}

inline FormulaPtr binary(Formula::Kind kind, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

inline FormulaPtr conj(FormulaPtr l, FormulaPtr r) {
  return binary(Formula::Kind::And, std::move(l), std::move(r));
}
inline FormulaPtr disj(FormulaPtr l, FormulaPtr r) {
  return binary(Formula::Kind::Or, std::move(l), std::move(r));
}
inline FormulaPtr implies(FormulaPtr l, FormulaPtr r) {
  return binary(Formula::Kind::Implies, std::move(l), std::move(r));
}
inline FormulaPtr iff(FormulaPtr l, FormulaPtr r) {
  return binary(Formula::Kind::Iff, std::move(l), std::move(r));
}

inline FormulaPtr quantifier(Formula::Kind kind, std::string v,
                             std::string sort, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->var = std::move(v);
  f->var_sort = std::move(sort);
  f->child = std::move(body);
  return f;
}

inline FormulaPtr exists(std::string v, std::string sort, FormulaPtr body) {
  return quantifier(Formula::Kind::Exists, std::move(v), std::move(sort),
                    std::move(body));
}
inline FormulaPtr forall(std::string v, std::string sort, FormulaPtr body) {
  return quantifier(Formula::Kind::Forall, std::move(v), std::move(sort),
                    std::move(body));
}
inline FormulaPtr dotted_exists(std::string v, std::string sort,
                                FormulaPtr body) {
  return quantifier(Formula::Kind::DottedExists, std::move(v),
                    std::move(sort), std::move(body));
}
inline FormulaPtr dotted_forall(std::string v, std::string sort,
                                FormulaPtr body) {
  return quantifier(Formula::Kind::DottedForall, std::move(v),
                    std::move(sort), std::move(body));
}

inline bool is_quantifier(Formula::Kind k) {
  return k == Formula::Kind::Exists || k == Formula::Kind::Forall ||
         k == Formula::Kind::DottedExists || k == Formula::Kind::DottedForall;
}

inline bool is_binary(Formula::Kind k) {
  return k == Formula::Kind::And || k == Formula::Kind::Or ||
         k == Formula::Kind::Implies || k == Formula::Kind::Iff;
}

// Symbol count: relation names, variables and constants are one symbol
// each, as are connectives, quantifiers and =/!=. Parentheses, commas, sort
// ascriptions and the dot cost nothing. A dotted quantifier counts like a
// plain one.
inline unsigned formula_length(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::RelApp:
      return 1 + static_cast<unsigned>(f->terms.size());
    case Formula::Kind::Eq:
    case Formula::Kind::Neq:
      return 3;
    case Formula::Kind::Not:
      return 1 + formula_length(f->child);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return 1 + formula_length(f->left) + formula_length(f->right);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::DottedExists:
    case Formula::Kind::DottedForall:
      return 2 + formula_length(f->child);
  }
  throw error(errc::internal_error, "bad formula kind");
}

inline unsigned quantifier_depth(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::RelApp:
    case Formula::Kind::Eq:
    case Formula::Kind::Neq:
      return 0;
    case Formula::Kind::Not:
      return quantifier_depth(f->child);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return std::max(quantifier_depth(f->left), quantifier_depth(f->right));
    default:
      return 1 + quantifier_depth(f->child);
  }
}

namespace detail {

inline void collect_free(const FormulaPtr& f,
                         std::vector<std::string>& bound,
                         std::map<std::string, std::string>& out) {
  auto is_bound = [&](const std::string& name) {
    return std::find(bound.begin(), bound.end(), name) != bound.end();
  };
  switch (f->kind) {
    case Formula::Kind::RelApp:
    case Formula::Kind::Eq:
    case Formula::Kind::Neq:
      for (const Term& t : f->terms)
        if (t.kind == TermKind::Variable && !is_bound(t.name))
          out.emplace(t.name, t.sort);
      return;
    case Formula::Kind::Not:
      collect_free(f->child, bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      collect_free(f->left, bound, out);
      collect_free(f->right, bound, out);
      return;
    default:
      bound.push_back(f->var);
      collect_free(f->child, bound, out);
      bound.pop_back();
      return;
  }
}

}  // namespace detail

inline std::map<std::string, std::string> free_variables(const FormulaPtr& f) {
  std::map<std::string, std::string> out;
  std::vector<std::string> bound;
  detail::collect_free(f, bound, out);
  return out;
}

inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::RelApp:
      return a->rel == b->rel && a->terms == b->terms;
    case Formula::Kind::Eq:
    case Formula::Kind::Neq:
      return a->terms == b->terms;
    case Formula::Kind::Not:
      return formula_equal(a->child, b->child);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return formula_equal(a->left, b->left) &&
             formula_equal(a->right, b->right);
    default:
      return a->var == b->var && a->var_sort == b->var_sort &&
             formula_equal(a->child, b->child);
  }
}

// Rewrites dotted quantifiers into plain ones with explicit inequalities
// over the body's free variables of the quantified sort, in name order.
// Exists: Ex(x != y1 & (... & body)); Forall: Ax((x != y1 & ...) -> body).
inline FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::RelApp:
    case Formula::Kind::Eq:
    case Formula::Kind::Neq:
      return f;
    case Formula::Kind::Not: {
      FormulaPtr c = desugar(f->child);
      return c == f->child ? f : neg(std::move(c));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      FormulaPtr l = desugar(f->left);
      FormulaPtr r = desugar(f->right);
      return l == f->left && r == f->right
                 ? f
                 : binary(f->kind, std::move(l), std::move(r));
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      FormulaPtr c = desugar(f->child);
      return c == f->child ? f : quantifier(f->kind, f->var, f->var_sort, c);
    }
    case Formula::Kind::DottedExists:
    case Formula::Kind::DottedForall: {
      FormulaPtr body = desugar(f->child);
      std::vector<std::string> others;
      for (const auto& [name, sort] : free_variables(body))
        if (name != f->var && sort == f->var_sort) others.push_back(name);
      std::sort(others.begin(), others.end());
      bool ex = f->kind == Formula::Kind::DottedExists;
      if (others.empty())
        return quantifier(ex ? Formula::Kind::Exists : Formula::Kind::Forall,
                          f->var, f->var_sort, body);
      Term x = var(f->var, f->var_sort);
      if (ex) {
        FormulaPtr chain = body;
        for (auto it = others.rbegin(); it != others.rend(); ++it)
          chain = conj(neq(x, var(*it, f->var_sort)), std::move(chain));
        return exists(f->var, f->var_sort, std::move(chain));
      }
      FormulaPtr guard;
      for (auto it = others.rbegin(); it != others.rend(); ++it) {
        FormulaPtr link = neq(x, var(*it, f->var_sort));
        guard = guard ? conj(std::move(link), std::move(guard))
                      : std::move(link);
      }
      return forall(f->var, f->var_sort,
                    implies(std::move(guard), std::move(body)));
    }
  }
  throw error(errc::internal_error, "bad formula kind");
}

// Concrete syntax emitter. Binary connectives are always parenthesized and
// quantifier bodies extend to the right, so parsing the output reproduces
// the tree exactly.
inline std::string pretty(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::RelApp: {
      std::string out = f->rel + "(";
      for (size_t i = 0; i < f->terms.size(); ++i) {
        if (i) out += ",";
        out += f->terms[i].name;
      }
      out += ")";
      return out;
    }
    case Formula::Kind::Eq:
      return f->terms[0].name + " = " + f->terms[1].name;
    case Formula::Kind::Neq:
      return f->terms[0].name + " != " + f->terms[1].name;
    case Formula::Kind::Not: {
      // equalities and quantifiers would swallow the trailing context
      bool wrap = f->child->kind == Formula::Kind::Eq ||
                  f->child->kind == Formula::Kind::Neq ||
                  is_quantifier(f->child->kind);
      return wrap ? "!(" + pretty(f->child) + ")" : "!" + pretty(f->child);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      // a bare quantifier operand would absorb the operator and everything
      // after it, so it gets its own parentheses
      auto operand = [](const FormulaPtr& g) {
        return is_quantifier(g->kind) ? "(" + pretty(g) + ")" : pretty(g);
      };
      const char* op = f->kind == Formula::Kind::And       ? " & "
                       : f->kind == Formula::Kind::Or      ? " | "
                       : f->kind == Formula::Kind::Implies ? " -> "
                                                           : " <-> ";
      return "(" + operand(f->left) + op + operand(f->right) + ")";
    }
    case Formula::Kind::Exists:
      return "exists " + f->var + ":" + f->var_sort + ". " + pretty(f->child);
    case Formula::Kind::Forall:
      return "forall " + f->var + ":" + f->var_sort + ". " + pretty(f->child);
    case Formula::Kind::DottedExists:
      return "exists* " + f->var + ":" + f->var_sort + ". " +
             pretty(f->child);
    case Formula::Kind::DottedForall:
      return "forall* " + f->var + ":" + f->var_sort + ". " +
             pretty(f->child);
  }
  throw error(errc::internal_error, "bad formula kind");
}

namespace detail {

struct Scope {
  std::vector<std::pair<std::string, std::string>> vars;  // name, sort

  const std::string* sort_of(const std::string& name) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
};

inline void check_node(const FormulaPtr& f, const Vocabulary& vocab,
                       Scope& scope,
                       std::map<std::string, std::string>& frees) {
  auto check_term = [&](const Term& t, const std::string& expected) {
    if (t.sort.empty())
      throw error(errc::type_error, "term " + t.name + " has no sort");
    if (!vocab.has_sort(t.sort))
      throw error(errc::unknown_symbol,
                  "sort " + t.sort + " of term " + t.name +
                      " is not declared");
    if (!expected.empty() && t.sort != expected)
      throw error(errc::type_error,
                  "term " + t.name + " has sort " + t.sort + " where sort " +
                      expected + " is required");
    if (t.kind == TermKind::Constant) {
      const ConstantDecl* c = vocab.find_constant(t.name);
      if (!c)
        throw error(errc::unknown_symbol,
                    "constant " + t.name + " is not declared");
      if (c->sort != t.sort)
        throw error(errc::type_error,
                    "constant " + t.name + " has sort " + c->sort + ", not " +
                        t.sort);
      return;
    }
    if (vocab.has_name(t.name))
      throw error(errc::type_error,
                  "variable " + t.name + " collides with a declared name");
    if (const std::string* s = scope.sort_of(t.name)) {
      if (*s != t.sort)
        throw error(errc::type_error,
                    "variable " + t.name + " is bound at sort " + *s +
                        " but used at sort " + t.sort);
    } else {
      auto [it, inserted] = frees.emplace(t.name, t.sort);
      if (!inserted && it->second != t.sort)
        throw error(errc::type_error,
                    "free variable " + t.name + " is used at sorts " +
                        it->second + " and " + t.sort);
    }
  };
  switch (f->kind) {
    case Formula::Kind::RelApp: {
      const RelationDecl* r = vocab.find_relation(f->rel);
      if (!r)
        throw error(errc::unknown_symbol,
                    "relation " + f->rel + " is not declared");
      if (r->arg_sorts.size() != f->terms.size())
        throw error(errc::arity_mismatch,
                    "relation " + f->rel + " has arity " +
                        std::to_string(r->arg_sorts.size()) + ", applied to " +
                        std::to_string(f->terms.size()) + " terms");
      for (size_t i = 0; i < f->terms.size(); ++i)
        check_term(f->terms[i], r->arg_sorts[i]);
      return;
    }
    case Formula::Kind::Eq:
    case Formula::Kind::Neq:
      check_term(f->terms[0], "");
      check_term(f->terms[1], "");
      if (f->terms[0].sort != f->terms[1].sort)
        throw error(errc::type_error,
                    "equality between sorts " + f->terms[0].sort + " and " +
                        f->terms[1].sort);
      return;
    case Formula::Kind::Not:
      check_node(f->child, vocab, scope, frees);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      check_node(f->left, vocab, scope, frees);
      check_node(f->right, vocab, scope, frees);
      return;
    default: {
      if (!vocab.has_sort(f->var_sort))
        throw error(errc::unknown_symbol,
                    "sort " + f->var_sort + " in quantifier over " + f->var +
                        " is not declared");
      if (vocab.has_name(f->var))
        throw error(errc::type_error,
                    "quantified variable " + f->var +
                        " collides with a declared name");
      scope.vars.emplace_back(f->var, f->var_sort);
      check_node(f->child, vocab, scope, frees);
      scope.vars.pop_back();
      return;
    }
  }
}

}  // namespace detail

// Full static check against a vocabulary: relations declared and applied at
// the right arity and sorts, equalities within one sort, every term sorted
// consistently. Returns the free variables with their sorts.
inline std::map<std::string, std::string> check_well_formed(
    const FormulaPtr& f, const Vocabulary& vocab) {
  detail::Scope scope;
  std::map<std::string, std::string> frees;
  detail::check_node(f, vocab, scope, frees);
  return frees;
}

}  // namespace ra
