#pragma once

// Reference enumerator for the definability search. Generates every formula
// of the shared grammar within the budget, with no signature collapsing and
// no pruning, and computes extensions compositionally over one full valuation
// grid covering every variable slot at once. Exponentially wasteful and only
// fit for tiny structures; exists so tests can cross-check the production
// search against an independently coded enumeration.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ra/eval.hpp"
#include "ra/formula.hpp"
#include "ra/structure.hpp"
#include "ra/synthesis.hpp"

namespace testgen {

struct NaiveVar {
  size_t sort = 0;  // index into vocabulary sort order
  unsigned slot = 0;

  auto operator<=>(const NaiveVar&) const = default;
};

struct NaiveCand {
  unsigned cost = 0;
  unsigned depth = 0;
  std::vector<NaiveVar> fv;  // sorted, unique
  std::vector<bool> ext;     // over the full grid of all slots
  ra::FormulaPtr ast;
};

class NaiveEnum {
 public:
  NaiveEnum(const ra::Structure& s, const ra::SynthesisBudget& budget)
      : s_(s), budget_(budget),
        names_(ra::synthesis_variable_names(s.vocabulary, budget.max_vars)) {
    const auto& sorts = s_.vocabulary.sorts;
    domains_.resize(sorts.size());
    for (size_t i = 0; i < sorts.size(); ++i) {
      auto size = ra::sort_size(s_, sorts[i], enum_limit_);
      if (!size.over_limit)
        domains_[i] = ra::enumerate_elements(s_, sorts[i], enum_limit_);
    }
    // grid axes: every slot of every enumerable sort, outermost first
    for (size_t i = 0; i < sorts.size(); ++i) {
      if (domains_[i].empty()) continue;
      for (unsigned j = 0; j < budget_.max_vars; ++j)
        axes_.push_back(NaiveVar{i, j});
    }
    cells_ = 1;
    for (const NaiveVar& a : axes_) cells_ *= domains_[a.sort].size();
    strides_.assign(axes_.size(), 1);
    for (size_t i = axes_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * domains_[axes_[i].sort].size();
    bycost_.resize(budget_.max_length + 1);
  }

  void run() {
    for (unsigned cost = 2; cost <= budget_.max_length; ++cost) {
      make_atoms(cost);
      if (cost >= 3)
        for (const NaiveCand& c : bycost_[cost - 1]) make_not(c);
      if (cost >= 4)
        for (const NaiveCand& c : bycost_[cost - 2]) make_quantifiers(c);
      for (unsigned a = 2; a + 3 <= cost; ++a) {
        unsigned b = cost - 1 - a;
        if (b < 2) continue;
        const auto& la = bycost_[a];
        const auto& lb = bycost_[b];
        for (size_t i = 0; i < la.size(); ++i) {
          for (size_t j = 0; j < lb.size(); ++j) {
            if (a < b || (a == b && i <= j)) {
              make_binary(ra::Formula::Kind::And, la[i], lb[j]);
              make_binary(ra::Formula::Kind::Or, la[i], lb[j]);
              make_binary(ra::Formula::Kind::Iff, la[i], lb[j]);
            }
            make_binary(ra::Formula::Kind::Implies, la[i], lb[j]);
          }
        }
      }
    }
  }

  // minimal length per set definable by a formula whose single free
  // variable is slot 0 of the sort
  std::map<std::vector<ra::Element>, unsigned> definable(
      const std::string& sort) const {
    size_t si = sort_index(sort);
    std::map<std::vector<ra::Element>, unsigned> out;
    std::vector<NaiveVar> want = {NaiveVar{si, 0}};
    size_t axis = axis_index(NaiveVar{si, 0});
    for (const auto& level : bycost_) {
      for (const NaiveCand& c : level) {
        if (c.fv != want) continue;
        std::vector<ra::Element> set;
        for (size_t v = 0; v < domains_[si].size(); ++v)
          if (c.ext[strides_[axis] * v]) set.push_back(domains_[si][v]);
        auto it = out.find(set);
        if (it == out.end())
          out.emplace(std::move(set), c.cost);
        else if (c.cost < it->second)
          it->second = c.cost;
      }
    }
    return out;
  }

  const std::vector<std::vector<NaiveCand>>& levels() const { return bycost_; }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& level : bycost_) n += level.size();
    return n;
  }

  // the valuation a grid cell denotes, binding every slot
  ra::Valuation cell_valuation(std::uint64_t cell) const {
    ra::Valuation v;
    for (size_t i = 0; i < axes_.size(); ++i) {
      std::uint64_t coord = (cell / strides_[i]) % domains_[axes_[i].sort].size();
      v.bind(names_[axes_[i].sort][axes_[i].slot],
             domains_[axes_[i].sort][coord]);
    }
    return v;
  }

  std::uint64_t cells() const { return cells_; }

 private:
  const ra::Structure& s_;
  ra::SynthesisBudget budget_;
  std::uint64_t enum_limit_ = std::uint64_t(1) << 20;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<ra::Element>> domains_;
  std::vector<NaiveVar> axes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t cells_ = 1;
  std::vector<std::vector<NaiveCand>> bycost_;

  size_t sort_index(const std::string& sort) const {
    const auto& sorts = s_.vocabulary.sorts;
    for (size_t i = 0; i < sorts.size(); ++i)
      if (sorts[i] == sort) return i;
    return sorts.size();
  }

  size_t axis_index(NaiveVar v) const {
    for (size_t i = 0; i < axes_.size(); ++i)
      if (axes_[i] == v) return i;
    return axes_.size();
  }

  struct NaiveTerm {
    ra::Term term;
    bool is_var = false;
    NaiveVar ref;
    ra::Element value;
  };

  // variables first, mirroring the production search's term order
  std::vector<NaiveTerm> terms_of(const std::string& sort) const {
    std::vector<NaiveTerm> out;
    size_t si = sort_index(sort);
    if (!domains_[si].empty())
      for (unsigned j = 0; j < budget_.max_vars; ++j)
        out.push_back({ra::var(names_[si][j], sort), true, NaiveVar{si, j},
                       {}});
    for (const auto& c : s_.vocabulary.constants)
      if (c.sort == sort)
        out.push_back({ra::cons(c.name, c.sort), false, {},
                       s_.constant_values.at(c.name)});
    return out;
  }

  static std::vector<NaiveVar> merge(const std::vector<NaiveVar>& a,
                                     const std::vector<NaiveVar>& b) {
    std::vector<NaiveVar> out = a;
    for (const NaiveVar& v : b)
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  void keep(NaiveCand&& c) { bycost_[c.cost].push_back(std::move(c)); }

  ra::Element term_value(const NaiveTerm& t, std::uint64_t cell) const {
    if (!t.is_var) return t.value;
    size_t axis = axis_index(t.ref);
    std::uint64_t coord = (cell / strides_[axis]) % domains_[t.ref.sort].size();
    return domains_[t.ref.sort][coord];
  }

  void make_atoms(unsigned cost) {
    for (const auto& decl : s_.vocabulary.relations) {
      if (1 + decl.arg_sorts.size() != cost) continue;
      std::vector<std::vector<NaiveTerm>> per_arg;
      bool ok = true;
      for (const auto& sort : decl.arg_sorts) {
        per_arg.push_back(terms_of(sort));
        ok = ok && !per_arg.back().empty();
      }
      if (!ok) continue;
      std::vector<size_t> pick(per_arg.size(), 0);
      bool done = false;
      while (!done) {
        std::vector<NaiveTerm> chosen;
        for (size_t i = 0; i < pick.size(); ++i)
          chosen.push_back(per_arg[i][pick[i]]);
        emit_atom(decl.name, chosen);
        done = true;
        for (size_t i = pick.size(); i-- > 0;) {
          if (++pick[i] < per_arg[i].size()) {
            done = false;
            break;
          }
          pick[i] = 0;
        }
      }
    }
    if (cost != 3) return;
    for (const auto& sort : s_.vocabulary.sorts) {
      std::vector<NaiveTerm> terms = terms_of(sort);
      for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = i; j < terms.size(); ++j) {
          emit_atom("", {terms[i], terms[j]}, ra::Formula::Kind::Eq);
          if (i != j) emit_atom("", {terms[i], terms[j]}, ra::Formula::Kind::Neq);
        }
    }
  }

  void emit_atom(const std::string& relname, const std::vector<NaiveTerm>& ts,
                 ra::Formula::Kind eqkind = ra::Formula::Kind::RelApp) {
    std::vector<NaiveVar> fv;
    for (const NaiveTerm& t : ts)
      if (t.is_var) fv = merge(fv, {t.ref});
    if (fv.size() > budget_.max_vars) return;
    ra::FormulaPtr ast;
    if (eqkind == ra::Formula::Kind::RelApp) {
      std::vector<ra::Term> args;
      for (const NaiveTerm& t : ts) args.push_back(t.term);
      ast = ra::rel(relname, args);
    } else if (eqkind == ra::Formula::Kind::Eq) {
      ast = ra::eq(ts[0].term, ts[1].term);
    } else {
      ast = ra::neq(ts[0].term, ts[1].term);
    }
    std::vector<bool> ext(cells_);
    std::vector<ra::Element> args(ts.size());
    for (std::uint64_t cell = 0; cell < cells_; ++cell) {
      for (size_t i = 0; i < ts.size(); ++i) args[i] = term_value(ts[i], cell);
      if (eqkind == ra::Formula::Kind::RelApp)
        ext[cell] = ra::holds(s_, relname, args);
      else if (eqkind == ra::Formula::Kind::Eq)
        ext[cell] = args[0] == args[1];
      else
        ext[cell] = args[0] != args[1];
    }
    keep(NaiveCand{ra::formula_length(ast), 0, std::move(fv), std::move(ext),
                   std::move(ast)});
  }

  void make_not(const NaiveCand& c) {
    std::vector<bool> ext = c.ext;
    ext.flip();
    keep(NaiveCand{c.cost + 1, c.depth, c.fv, std::move(ext), ra::neg(c.ast)});
  }

  void make_binary(ra::Formula::Kind kind, const NaiveCand& a,
                   const NaiveCand& b) {
    std::vector<NaiveVar> fv = merge(a.fv, b.fv);
    if (fv.size() > budget_.max_vars) return;
    std::vector<bool> ext(cells_);
    for (std::uint64_t cell = 0; cell < cells_; ++cell) {
      bool va = a.ext[cell], vb = b.ext[cell];
      switch (kind) {
        case ra::Formula::Kind::And: ext[cell] = va && vb; break;
        case ra::Formula::Kind::Or: ext[cell] = va || vb; break;
        case ra::Formula::Kind::Implies: ext[cell] = !va || vb; break;
        default: ext[cell] = va == vb; break;
      }
    }
    keep(NaiveCand{1 + a.cost + b.cost, std::max(a.depth, b.depth),
                   std::move(fv), std::move(ext),
                   ra::binary(kind, a.ast, b.ast)});
  }

  // all four quantifier kinds over every variable free in the body; a dotted
  // quantifier without same-sort company coincides with the plain one and is
  // generated anyway, which cannot change any minimal length
  void make_quantifiers(const NaiveCand& c) {
    if (c.depth + 1 > budget_.max_quantifier_depth) return;
    for (const NaiveVar& bound : c.fv) {
      std::vector<NaiveVar> fv;
      for (const NaiveVar& v : c.fv)
        if (!(v == bound)) fv.push_back(v);
      std::vector<NaiveVar> same_sort;
      for (const NaiveVar& v : fv)
        if (v.sort == bound.sort) same_sort.push_back(v);
      size_t axis = axis_index(bound);
      size_t n = domains_[bound.sort].size();
      std::vector<bool> pe(cells_), pa(cells_), de(cells_), da(cells_);
      for (std::uint64_t cell = 0; cell < cells_; ++cell) {
        // normalize the bound coordinate to zero, then scan its axis
        std::uint64_t coord = (cell / strides_[axis]) % n;
        std::uint64_t base = cell - coord * strides_[axis];
        bool e = false, a = true, dex = false, dall = true;
        for (std::uint64_t v = 0; v < n; ++v) {
          bool b = c.ext[base + v * strides_[axis]];
          e = e || b;
          a = a && b;
          bool excluded = false;
          for (const NaiveVar& u : same_sort) {
            size_t ua = axis_index(u);
            excluded = excluded || ((cell / strides_[ua]) % n) == v;
          }
          if (!excluded) {
            dex = dex || b;
            dall = dall && b;
          }
        }
        pe[cell] = e;
        pa[cell] = a;
        de[cell] = dex;
        da[cell] = dall;
      }
      const std::string& name = names_[bound.sort][bound.slot];
      const std::string& sort = s_.vocabulary.sorts[bound.sort];
      auto emit = [&](ra::Formula::Kind kind, std::vector<bool>&& ext) {
        keep(NaiveCand{c.cost + 2, c.depth + 1, fv, std::move(ext),
                       ra::quantifier(kind, name, sort, c.ast)});
      };
      emit(ra::Formula::Kind::Exists, std::move(pe));
      emit(ra::Formula::Kind::Forall, std::move(pa));
      emit(ra::Formula::Kind::DottedExists, std::move(de));
      emit(ra::Formula::Kind::DottedForall, std::move(da));
    }
  }
};

}  // namespace testgen
