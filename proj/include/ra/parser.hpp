#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ra/error.hpp"
#include "ra/formula.hpp"
#include "ra/vocabulary.hpp"

namespace ra {

struct ParseOptions {
  // Sort assigned to free variables whose sort inference leaves open.
  std::optional<std::string> default_free_sort;
};

namespace detail {

enum class Tok : std::uint8_t {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  Colon,
  Star,
  EqSign,
  NeqSign,
  Bang,
  Amp,
  Pipe,
  Arrow,
  IffSign,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  size_t pos = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  auto fail = [&](const std::string& why) -> error {
    return error(errc::syntax_error,
                 why + " at offset " + std::to_string(i));
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), start});
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
      case '.': out.push_back({Tok::Dot, ".", start}); ++i; break;
      case ':': out.push_back({Tok::Colon, ":", start}); ++i; break;
      case '*': out.push_back({Tok::Star, "*", start}); ++i; break;
      case '=': out.push_back({Tok::EqSign, "=", start}); ++i; break;
      case '&': out.push_back({Tok::Amp, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Pipe, "|", start}); ++i; break;
      case '!':
        if (i + 1 < src.size() && src[i + 1] == '=') {
          out.push_back({Tok::NeqSign, "!=", start});
          i += 2;
        } else {
          out.push_back({Tok::Bang, "!", start});
          ++i;
        }
        break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
        } else {
          throw fail("stray '-'");
        }
        break;
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          out.push_back({Tok::IffSign, "<->", start});
          i += 3;
        } else {
          throw fail("stray '<'");
        }
        break;
      default:
        throw fail(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

// The parser builds mutable nodes, runs sort inference over the free
// variables, then freezes the tree. Bound variables get their sort from the
// ascription at the binder; constants from the vocabulary.
class Parser {
 public:
  Parser(std::string_view src, const Vocabulary& vocab,
         const ParseOptions& options)
      : tokens_(tokenize(src)), vocab_(vocab), options_(options) {}

  FormulaPtr run() {
    std::shared_ptr<Formula> f = parse_iff();
    expect(Tok::End, "end of input");
    infer_free_sorts(f);
    FormulaPtr frozen = f;
    check_well_formed(frozen, vocab_);
    return frozen;
  }

 private:
  using Node = std::shared_ptr<Formula>;

  std::vector<Token> tokens_;
  size_t at_ = 0;
  const Vocabulary& vocab_;
  const ParseOptions& options_;
  std::vector<std::pair<std::string, std::string>> scope_;
  // inferred sorts for free variables; "" = not yet known
  std::map<std::string, std::string> free_sorts_;
  // equality links (free var name, free var name) pending inference
  std::vector<std::pair<std::string, std::string>> links_;

  const Token& peek(size_t ahead = 0) const {
    size_t i = at_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  Token take() { return tokens_[at_ < tokens_.size() - 1 ? at_++ : at_]; }

  [[noreturn]] void fail(const std::string& why, const Token& t) const {
    throw error(errc::syntax_error,
                why + " at offset " + std::to_string(t.pos));
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind)
      fail("expected " + what + ", found \"" + peek().text + "\"", peek());
    return take();
  }

  const std::string* scoped_sort(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  Node parse_iff() {
    Node l = parse_implies();
    while (peek().kind == Tok::IffSign) {
      take();
      Node r = parse_implies();
      Node f = std::make_shared<Formula>();
      f->kind = Formula::Kind::Iff;
      f->left = l;
      f->right = r;
      l = f;
    }
    return l;
  }

  Node parse_implies() {
    Node l = parse_or();
    if (peek().kind == Tok::Arrow) {
      take();
      Node r = parse_implies();  // right associative
      Node f = std::make_shared<Formula>();
      f->kind = Formula::Kind::Implies;
      f->left = l;
      f->right = r;
      return f;
    }
    return l;
  }

  Node parse_or() {
    Node l = parse_and();
    while (peek().kind == Tok::Pipe) {
      take();
      Node r = parse_and();
      Node f = std::make_shared<Formula>();
      f->kind = Formula::Kind::Or;
      f->left = l;
      f->right = r;
      l = f;
    }
    return l;
  }

  Node parse_and() {
    Node l = parse_unary();
    while (peek().kind == Tok::Amp) {
      take();
      Node r = parse_unary();
      Node f = std::make_shared<Formula>();
      f->kind = Formula::Kind::And;
      f->left = l;
      f->right = r;
      l = f;
    }
    return l;
  }

  Node parse_unary() {
    if (peek().kind == Tok::Bang) {
      take();
      Node inner = parse_unary();
      Node f = std::make_shared<Formula>();
      f->kind = Formula::Kind::Not;
      f->child = inner;
      return f;
    }
    if (peek().kind == Tok::Ident &&
        (peek().text == "exists" || peek().text == "forall"))
      return parse_quantifier();
    return parse_atom();
  }

  Node parse_quantifier() {
    Token kw = take();
    bool dotted = false;
    if (peek().kind == Tok::Star) {
      take();
      dotted = true;
    }
    Token name = expect(Tok::Ident, "variable name");
    if (vocab_.has_name(name.text))
      throw error(errc::type_error,
                  "quantified variable " + name.text +
                      " collides with a declared name (offset " +
                      std::to_string(name.pos) + ")");
    expect(Tok::Colon, "':' and a sort");
    Token sort = expect(Tok::Ident, "sort name");
    if (!vocab_.has_sort(sort.text))
      throw error(errc::unknown_symbol,
                  "sort " + sort.text + " is not declared (offset " +
                      std::to_string(sort.pos) + ")");
    expect(Tok::Dot, "'.'");
    scope_.emplace_back(name.text, sort.text);
    Node body = parse_iff();  // quantifier scope extends right
    scope_.pop_back();
    Node f = std::make_shared<Formula>();
    f->kind = kw.text == "exists"
                  ? (dotted ? Formula::Kind::DottedExists
                            : Formula::Kind::Exists)
                  : (dotted ? Formula::Kind::DottedForall
                            : Formula::Kind::Forall);
    f->var = name.text;
    f->var_sort = sort.text;
    f->child = body;
    return f;
  }

  Node parse_atom() {
    if (peek().kind == Tok::LParen) {
      take();
      Node f = parse_iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    Token first = expect(Tok::Ident, "an atom");
    if (peek().kind == Tok::LParen)
      return parse_relapp(first);
    Term lhs = make_term(first);
    Tok op = peek().kind;
    if (op != Tok::EqSign && op != Tok::NeqSign)
      fail("expected '=', '!=' or '(' after \"" + first.text + "\"", peek());
    take();
    Token second = expect(Tok::Ident, "a term");
    Term rhs = make_term(second);
    note_equality(lhs, rhs, first.pos);
    Node f = std::make_shared<Formula>();
    f->kind = op == Tok::EqSign ? Formula::Kind::Eq : Formula::Kind::Neq;
    f->terms = {lhs, rhs};
    return f;
  }

  Node parse_relapp(const Token& name) {
    const RelationDecl* decl = vocab_.find_relation(name.text);
    if (!decl)
      throw error(errc::unknown_symbol,
                  "relation " + name.text + " is not declared (offset " +
                      std::to_string(name.pos) + ")");
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    if (peek().kind != Tok::RParen) {
      while (true) {
        Token t = expect(Tok::Ident, "a term");
        args.push_back(make_term(t));
        if (peek().kind != Tok::Comma) break;
        take();
      }
    }
    Token close = expect(Tok::RParen, "')'");
    if (args.size() != decl->arg_sorts.size())
      throw error(errc::arity_mismatch,
                  "relation " + name.text + " has arity " +
                      std::to_string(decl->arg_sorts.size()) +
                      ", applied to " + std::to_string(args.size()) +
                      " terms (offset " + std::to_string(close.pos) + ")");
    for (size_t i = 0; i < args.size(); ++i)
      require_sort(args[i], decl->arg_sorts[i], name.pos);
    Node f = std::make_shared<Formula>();
    f->kind = Formula::Kind::RelApp;
    f->rel = name.text;
    f->terms = std::move(args);
    return f;
  }

  Term make_term(const Token& t) {
    if (const ConstantDecl* c = vocab_.find_constant(t.text))
      return cons(t.text, c->sort);
    if (vocab_.has_sort(t.text) || vocab_.find_relation(t.text))
      throw error(errc::type_error,
                  t.text + " names a sort or relation, not a term (offset " +
                      std::to_string(t.pos) + ")");
    if (const std::string* s = scoped_sort(t.text))
      return var(t.text, *s);
    free_sorts_.try_emplace(t.text, "");
    return var(t.text, "");  // free variable, sort inferred later
  }

  bool is_open_free(const Term& t) const {
    return t.kind == TermKind::Variable && t.sort.empty();
  }

  void require_sort(const Term& t, const std::string& sort, size_t pos) {
    if (!is_open_free(t)) return;
    std::string& known = free_sorts_[t.name];
    if (known.empty()) {
      known = sort;
    } else if (known != sort) {
      throw error(errc::type_error,
                  "free variable " + t.name + " is used at sorts " + known +
                      " and " + sort + " (offset " + std::to_string(pos) +
                      ")");
    }
  }

  void note_equality(const Term& a, const Term& b, size_t pos) {
    bool oa = is_open_free(a), ob = is_open_free(b);
    if (oa && ob) {
      links_.emplace_back(a.name, b.name);
    } else if (oa) {
      require_sort(a, b.sort, pos);
    } else if (ob) {
      require_sort(b, a.sort, pos);
    }
  }

  void infer_free_sorts(const Node& root) {
    // propagate equality links until stable
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, b] : links_) {
        std::string& sa = free_sorts_[a];
        std::string& sb = free_sorts_[b];
        if (!sa.empty() && sb.empty()) {
          sb = sa;
          changed = true;
        } else if (sa.empty() && !sb.empty()) {
          sa = sb;
          changed = true;
        }
      }
    }
    for (auto& [name, sort] : free_sorts_) {
      if (sort.empty() && options_.default_free_sort)
        sort = *options_.default_free_sort;
      if (sort.empty())
        throw error(errc::type_error,
                    "cannot infer a sort for free variable " + name);
      if (!vocab_.has_sort(sort))
        throw error(errc::unknown_symbol,
                    "sort " + sort + " of free variable " + name +
                        " is not declared");
    }
    patch(root);
  }

  // writes inferred sorts into free-variable occurrences, respecting
  // shadowing by inner binders
  void patch(const Node& f) {
    switch (f->kind) {
      case Formula::Kind::RelApp:
      case Formula::Kind::Eq:
      case Formula::Kind::Neq:
        for (Term& t : f->terms)
          if (t.kind == TermKind::Variable && t.sort.empty() &&
              !scoped_sort(t.name))
            t.sort = free_sorts_.at(t.name);
        return;
      case Formula::Kind::Not:
        patch(std::const_pointer_cast<Formula>(f->child));
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
      case Formula::Kind::Iff:
        patch(std::const_pointer_cast<Formula>(f->left));
        patch(std::const_pointer_cast<Formula>(f->right));
        return;
      default:
        scope_.emplace_back(f->var, f->var_sort);
        patch(std::const_pointer_cast<Formula>(f->child));
        scope_.pop_back();
        return;
    }
  }
};

}  // namespace detail

// Parses the concrete syntax: quantifiers `exists v:Sort.` / `forall
// v:Sort.` (star suffix for the distinct-from-free-variables forms),
// connectives ! & | -> <-> in decreasing binding order, atoms `R(t,...)`,
// `t = u`, `t != u`. Quantifier bodies extend as far right as possible.
// Identifiers are constants when the vocabulary declares them, variables
// otherwise; free-variable sorts are inferred from use.
inline FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab,
                                const ParseOptions& options = {}) {
  detail::Parser p(text, vocab, options);
  return p.run();
}

}  // namespace ra
