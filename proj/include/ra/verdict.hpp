#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ra/error.hpp"
#include "ra/eval.hpp"
#include "ra/formula.hpp"
#include "ra/probability.hpp"
#include "ra/rational.hpp"
#include "ra/structure.hpp"
#include "ra/synthesis.hpp"

namespace ra {

// The trial actually executed: which innate distributions are admitted, and
// how outcomes live inside the structure.
struct TrialSpec {
  TrialModel model;
  std::string outcome_sort;
  // element of the function-value sort counted as a success (independent
  // positions models)
  std::string success_value;
  // sort whose members count as successes inside a drawn pool (subset-draw
  // models)
  std::string marked_sort;
};

// A focal event carries two specifications of the same set of outcomes: a
// formula (whose length is what the budget judges) and a computable
// probability spec. The check procedure cross-checks their agreement
// whenever the outcome space is small enough to enumerate.
struct FocalEvent {
  FormulaPtr formula;
  std::string formula_text;
  EventSpec prob_spec;
};

struct Scenario {
  std::string name;
  Rational threshold;                       // 0 < threshold < 1
  std::optional<unsigned> complexity_budget;
  Structure structure;
  TrialSpec trial;
  FocalEvent focal;
  std::string actual_outcome;               // canonical element text
  std::string background_notes;
};

// Used when a scenario does not set its own budget. Covers the bundled case
// formulas (the longest is 17) with slack. An artifact default: reports flag
// it so nobody mistakes it for a sourced constant.
constexpr unsigned kDefaultComplexityBudget = 20;

enum class CrossCheck : std::uint8_t { Passed, Failed, Skipped };

inline const char* cross_check_text(CrossCheck c) {
  switch (c) {
    case CrossCheck::Passed: return "PASSED";
    case CrossCheck::Failed: return "FAILED";
    case CrossCheck::Skipped: return "SKIPPED";
  }
  return "?";
}

struct Report {
  std::string name;
  ProbabilityBound bound;
  Rational threshold;
  bool negligible = false;
  unsigned description_length = 0;
  unsigned budget = kDefaultComplexityBudget;
  bool budget_defaulted = true;
  bool within_budget = false;
  bool outcome_in_event = false;
  CrossCheck cross_check = CrossCheck::Skipped;
  std::string cross_check_note;
  bool impugned = false;
  std::vector<std::string> reasons;  // every failed condition, none omitted
};

struct CheckOptions {
  // map computation errors into a NOT_IMPUGNED report instead of throwing
  bool lenient = false;
  EvalOptions eval;
};

inline std::vector<ValidationIssue> scenario_issues(const Scenario& sc) {
  std::vector<ValidationIssue> issues;
  auto push = [&](errc code, std::string subject, std::string message) {
    issues.push_back({code, std::move(subject), "scenario " + sc.name,
                      std::move(message)});
  };

  if (!(sc.threshold > 0 && sc.threshold < 1))
    push(errc::validation_error, "threshold",
         "threshold out of range: need 0 < threshold < 1, got " +
             to_fraction_string(sc.threshold));

  if (!sc.structure.vocabulary.has_sort(sc.trial.outcome_sort)) {
    push(errc::unknown_sort, sc.trial.outcome_sort,
         "outcome sort is not declared");
    return issues;  // nothing below is checkable
  }

  if (!sc.focal.formula) {
    push(errc::validation_error, "focal_event", "no focal formula");
    return issues;
  }
  try {
    auto frees = check_well_formed(sc.focal.formula, sc.structure.vocabulary);
    if (frees.size() != 1) {
      std::string names;
      for (const auto& [n, s] : frees) {
        if (!names.empty()) names += ", ";
        names += n;
      }
      push(errc::extra_free_variables, "focal_event",
           "the focal formula needs exactly one free variable, found " +
               std::to_string(frees.size()) +
               (names.empty() ? "" : " (" + names + ")"));
    } else if (frees.begin()->second != sc.trial.outcome_sort) {
      push(errc::type_error, frees.begin()->first,
           "the focal formula's free variable ranges over " +
               frees.begin()->second + ", not the outcome sort " +
               sc.trial.outcome_sort);
    }
  } catch (const error& e) {
    push(e.code(), "focal_event", e.what());
  }

  try {
    parse_element(sc.structure, sc.trial.outcome_sort, sc.actual_outcome);
  } catch (const error& e) {
    push(e.code(), sc.actual_outcome,
         std::string("actual outcome is not a valid element: ") + e.what());
  }

  const SortCarrier& outcome = sc.structure.carrier(sc.trial.outcome_sort);
  if (const auto* w = std::get_if<WeightedCategorical>(&sc.trial.model)) {
    if (outcome.kind != SortCarrier::Kind::Explicit) {
      push(errc::type_mismatch, sc.trial.outcome_sort,
           "a weighted single-draw trial needs an explicit outcome sort");
    } else {
      for (const auto& [id, weight] : w->weights)
        if (std::find(outcome.elements.begin(), outcome.elements.end(), id) ==
            outcome.elements.end())
          push(errc::type_mismatch, id,
               "weight listed for an id outside the outcome sort");
      for (const auto& id : outcome.elements)
        if (!w->weights.count(id))
          push(errc::validation_error, id, "outcome carries no weight");
    }
  } else if (const auto* u = std::get_if<UniformKSubset>(&sc.trial.model)) {
    if (outcome.kind != SortCarrier::Kind::Subsets) {
      push(errc::type_mismatch, sc.trial.outcome_sort,
           "a subset-draw trial needs a subset outcome sort");
    } else {
      Integer base = carrier_count(
          sc.structure, sc.structure.carrier(outcome.base_sort));
      if (Integer(u->population) != base)
        push(errc::parameter_out_of_range, "population",
             "population " + std::to_string(u->population) +
                 " does not match the base sort size " + base.str());
      if (u->pool != outcome.subset_k)
        push(errc::parameter_out_of_range, "pool",
             "pool size " + std::to_string(u->pool) +
                 " does not match the subset size " +
                 std::to_string(outcome.subset_k));
      if (sc.trial.marked_sort.empty() ||
          !sc.structure.vocabulary.has_sort(sc.trial.marked_sort)) {
        push(errc::unknown_sort, sc.trial.marked_sort,
             "subset-draw trials need a declared marked sort");
      } else {
        Integer marked = carrier_count(
            sc.structure, sc.structure.carrier(sc.trial.marked_sort));
        if (Integer(u->marked) != marked)
          push(errc::parameter_out_of_range, "marked",
               "marked count " + std::to_string(u->marked) +
                   " does not match the size of sort " + sc.trial.marked_sort);
      }
    }
  } else if (const auto* b = std::get_if<IndependentBinary>(&sc.trial.model)) {
    if (outcome.kind != SortCarrier::Kind::Functions) {
      push(errc::type_mismatch, sc.trial.outcome_sort,
           "an independent-positions trial needs a function outcome sort");
    } else {
      std::uint64_t positions =
          sc.structure.explicit_size(sc.structure.carrier(outcome.index_sort));
      if (b->lo.size() != positions || b->hi.size() != positions)
        push(errc::parameter_out_of_range, "positions",
             "per-position bounds count " + std::to_string(b->lo.size()) +
                 "/" + std::to_string(b->hi.size()) +
                 " does not match the index sort size " +
                 std::to_string(positions));
      try {
        sc.structure.element_index(outcome.value_sort, sc.trial.success_value);
      } catch (const error& e) {
        push(e.code(), sc.trial.success_value,
             "success value is not an element of the value sort");
      }
    }
  }

  return issues;
}

inline void validate_scenario(const Scenario& sc) {
  auto issues = scenario_issues(sc);
  if (!issues.empty()) throw validation_failure(issues);
}

namespace detail {

// successes inside one outcome, under the trial's counting convention
inline std::uint64_t outcome_success_count(const Scenario& sc,
                                           const Element& outcome) {
  const SortCarrier& carrier = sc.structure.carrier(sc.trial.outcome_sort);
  if (std::holds_alternative<IndependentBinary>(sc.trial.model)) {
    std::uint32_t success = sc.structure.element_index(
        carrier.value_sort, sc.trial.success_value);
    std::uint64_t n = 0;
    for (std::uint32_t part : outcome.parts) n += part == success;
    return n;
  }
  if (std::holds_alternative<UniformKSubset>(sc.trial.model)) {
    const RelationDecl* membership = nullptr;
    for (const auto& decl : sc.structure.vocabulary.relations)
      if (decl.builtin == BuiltinKind::Membership &&
          decl.arg_sorts.size() == 2 &&
          decl.arg_sorts[0] == sc.trial.marked_sort &&
          decl.arg_sorts[1] == sc.trial.outcome_sort)
        membership = &decl;
    if (!membership)
      throw error(errc::unknown_relation,
                  "no membership relation connects " + sc.trial.marked_sort +
                      " to " + sc.trial.outcome_sort);
    std::uint64_t n = 0;
    for_each_element(sc.structure, sc.trial.marked_sort,
                     [&](const Element& m) {
                       Element args[2] = {m, outcome};
                       n += holds(sc.structure, membership->name, args);
                       return true;
                     });
    return n;
  }
  throw error(errc::unsupported_supremum,
              "success counts are undefined for single-draw trials");
}

inline bool count_event_holds(const CountEvent& event, std::uint64_t n) {
  switch (event.cmp) {
    case Comparator::GreaterEqual: return n >= event.k;
    case Comparator::LessEqual: return n <= event.k;
    case Comparator::Equal: return n == event.k;
  }
  return false;
}

// The dual-specification rule: the formula and the probability spec must
// pick out the same outcomes. Verified by full enumeration when the outcome
// sort fits the limit, otherwise reported as skipped.
inline void run_cross_check(const Scenario& sc, Report& r,
                            const CheckOptions& options) {
  SortSize size =
      sort_size(sc.structure, sc.trial.outcome_sort, options.eval.enum_limit);
  if (size.over_limit) {
    r.cross_check = CrossCheck::Skipped;
    r.cross_check_note = "outcome sort " + sc.trial.outcome_sort + " has " +
                         size.count.str() + " elements, over the limit " +
                         std::to_string(options.eval.enum_limit);
    return;
  }

  auto frees = free_variables(sc.focal.formula);
  const std::string& fv = frees.begin()->first;
  const FormulaPtr* spec_formula = nullptr;
  if (const auto* ext = std::get_if<ExtensionalEvent>(&sc.focal.prob_spec))
    spec_formula = &ext->formula;
  const CountEvent* count = std::get_if<CountEvent>(&sc.focal.prob_spec);

  std::string disagreement;
  Valuation v;
  for_each_element(sc.structure, sc.trial.outcome_sort, [&](const Element& e) {
    v.bind(fv, e);
    bool by_formula = eval(sc.structure, sc.focal.formula, v, options.eval);
    v.unbind();
    bool by_spec;
    if (count) {
      by_spec = count_event_holds(*count, outcome_success_count(sc, e));
    } else {
      auto spec_frees = free_variables(*spec_formula);
      Valuation sv;
      sv.bind(spec_frees.begin()->first, e);
      by_spec = eval(sc.structure, *spec_formula, sv, options.eval);
    }
    if (by_formula != by_spec) {
      disagreement = sc.structure.element_text(sc.trial.outcome_sort, e);
      return false;
    }
    return true;
  });

  if (disagreement.empty()) {
    r.cross_check = CrossCheck::Passed;
    r.cross_check_note =
        "formula and probability spec agree on all " + size.count.str() +
        " outcomes";
  } else {
    r.cross_check = CrossCheck::Failed;
    r.cross_check_note =
        "specifications disagree at outcome " + disagreement;
  }
}

}  // namespace detail

// The full procedure: probability bound, negligibility against the
// threshold, description-length budget, membership of the actual outcome,
// and the dual-specification cross-check. The verdict is the conjunction;
// a failed cross-check always blocks impugning, and a skipped one never
// does. Every failed condition is reported, never just the first.
inline Report check(const Scenario& sc, const CheckOptions& options = {}) {
  Report r;
  r.name = sc.name;
  r.threshold = sc.threshold;
  r.budget = sc.complexity_budget.value_or(kDefaultComplexityBudget);
  r.budget_defaulted = !sc.complexity_budget.has_value();

  try {
    validate_scenario(sc);

    r.description_length = formula_length(sc.focal.formula);
    r.within_budget = r.description_length <= r.budget;

    OutcomeSpace space{&sc.structure, sc.trial.outcome_sort,
                       sc.trial.success_value};
    r.bound = event_probability_sup(sc.trial.model, sc.focal.prob_spec,
                                    &space, options.eval);
    r.negligible = r.bound.sup < sc.threshold;

    Element actual = parse_element(sc.structure, sc.trial.outcome_sort,
                                   sc.actual_outcome);
    auto frees = free_variables(sc.focal.formula);
    Valuation v;
    v.bind(frees.begin()->first, actual);
    r.outcome_in_event = eval(sc.structure, sc.focal.formula, v, options.eval);

    detail::run_cross_check(sc, r, options);
  } catch (const error& e) {
    if (!options.lenient) throw;
    r.impugned = false;
    r.reasons.push_back(std::string("could not complete the check: ") +
                        e.what());
    return r;
  }

  if (!r.negligible)
    r.reasons.push_back(
        "not negligible: the supremum probability " +
        to_decimal_string(r.bound.sup) + " (exactly " +
        to_fraction_string(r.bound.sup) + ") is not below the threshold " +
        to_decimal_string(r.threshold));
  if (!r.within_budget)
    r.reasons.push_back("description too long: length " +
                        std::to_string(r.description_length) +
                        " exceeds the budget " + std::to_string(r.budget));
  if (!r.outcome_in_event)
    r.reasons.push_back("the actual outcome is not in the focal event");
  if (r.cross_check == CrossCheck::Failed)
    r.reasons.push_back("focal event specifications disagree: " +
                        r.cross_check_note);

  r.impugned = r.reasons.empty();
  return r;
}

// Outcome of comparing the supplied description against the shortest one
// the search can build.
struct DescriptionAudit {
  unsigned supplied_length = 0;
  std::optional<unsigned> synthesized_min_length;
  std::optional<int> gap;  // supplied - synthesized, when both known
  FormulaPtr witness;
  bool skipped = false;
  std::string note;
};

inline DescriptionAudit audit_description(const Scenario& sc,
                                          const SynthesisBudget& budget,
                                          const CheckOptions& options = {}) {
  validate_scenario(sc);
  DescriptionAudit audit;
  audit.supplied_length = formula_length(sc.focal.formula);

  SortSize size =
      sort_size(sc.structure, sc.trial.outcome_sort, options.eval.enum_limit);
  if (size.over_limit) {
    audit.skipped = true;
    audit.note = "SortTooLarge: outcome sort " + sc.trial.outcome_sort +
                 " has " + size.count.str() +
                 " elements; the focal set cannot be enumerated";
    return audit;
  }

  auto target = defined_set(sc.structure, sc.focal.formula, options.eval);
  SynthesisOptions sopt;
  sopt.enum_limit = options.eval.enum_limit;
  ComplexityResult found = description_complexity(
      sc.structure, sc.trial.outcome_sort, std::move(target), budget, sopt);
  if (found.length) {
    audit.synthesized_min_length = *found.length;
    audit.gap = static_cast<int>(audit.supplied_length) -
                static_cast<int>(*found.length);
    audit.witness = found.witness;
    audit.note = audit.gap > 0
                     ? "a shorter description exists within the budget"
                     : "the supplied description is minimal within the budget";
  } else {
    audit.note = "no description found within the synthesis budget (up to "
                 "length " + std::to_string(budget.max_length) + ")";
  }
  return audit;
}

// Text rendering. Decimal renderings always sit beside the exact rational:
// the deciding quantity is never presented lossily.
inline std::string render_report(const Report& r) {
  std::string out;
  out += "scenario: " + r.name + "\n";
  out += "sup probability = " + to_decimal_string(r.bound.sup) + " (exactly " +
         to_fraction_string(r.bound.sup) + ")\n";
  out += "  attained at: " + r.bound.sup_attained_at + "\n";
  out += "threshold = " + to_decimal_string(r.threshold) + " (exactly " +
         to_fraction_string(r.threshold) + ")\n";
  out += std::string("negligible: ") + (r.negligible ? "yes" : "no") + "\n";
  out += "description length " + std::to_string(r.description_length) +
         ", budget " + std::to_string(r.budget) +
         (r.budget_defaulted ? " (artifact default, not a sourced value)"
                             : "") +
         ", within budget: " + (r.within_budget ? "yes" : "no") + "\n";
  out += std::string("actual outcome in event: ") +
         (r.outcome_in_event ? "yes" : "no") + "\n";
  out += std::string("cross-check: ") + cross_check_text(r.cross_check);
  if (!r.cross_check_note.empty()) out += " (" + r.cross_check_note + ")";
  out += "\n";
  out += "note: the budget check stands in for independence of the "
         "specification; succinctness is what makes an after-the-fact "
         "description admissible\n";
  if (r.impugned) {
    out += "verdict: IMPUGNED (the null hypothesis of a fair trial is "
           "impugned)\n";
  } else {
    out += "verdict: NOT_IMPUGNED\n";
    for (const auto& reason : r.reasons) out += "  - " + reason + "\n";
  }
  return out;
}

inline std::string render_audit(const DescriptionAudit& audit) {
  std::string out;
  out += "supplied description length: " +
         std::to_string(audit.supplied_length) + "\n";
  if (audit.skipped) {
    out += "audit skipped: " + audit.note + "\n";
    return out;
  }
  if (audit.synthesized_min_length) {
    out += "shortest synthesized description: " +
           std::to_string(*audit.synthesized_min_length);
    if (audit.witness) out += "  witness: " + pretty(audit.witness);
    out += "\n";
    out += "gap: " + std::to_string(*audit.gap) + "\n";
  }
  out += audit.note + "\n";
  return out;
}

}  // namespace ra
