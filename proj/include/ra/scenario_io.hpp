#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ra/error.hpp"
#include "ra/parser.hpp"
#include "ra/verdict.hpp"

namespace ra {

using nlohmann::json;

struct LoadOptions {
  // strict by default: unknown keys are errors. Scenario files are evidence
  // artifacts; silently tolerating typos is dangerous. Lenient mode
  // downgrades unknown keys to warnings.
  bool lenient = false;
};

struct LoadedScenario {
  Scenario scenario;
  std::vector<std::string> warnings;
};

namespace ioimpl {

inline void check_keys(const json& j, const std::string& where,
                       std::initializer_list<const char*> allowed,
                       const LoadOptions& options,
                       std::vector<std::string>* warnings) {
  if (!j.is_object())
    throw error(errc::parse_error, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (known) continue;
    std::string msg = "unknown key \"" + key + "\" at " + where;
    if (!options.lenient) throw error(errc::parse_error, msg);
    if (warnings) warnings->push_back(msg);
  }
}

inline const json& require(const json& j, const char* key,
                           const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw error(errc::parse_error,
                "missing key \"" + std::string(key) + "\" at " + where);
  return *it;
}

inline std::string text_of(const json& j, const std::string& where) {
  if (!j.is_string())
    throw error(errc::parse_error, where + " must be a string");
  return j.get<std::string>();
}

// Exact numbers only. Accepts rational strings ("1/100", "0.05", "3") and
// JSON integers; rejects JSON floats, whose binary rounding would silently
// corrupt the deciding quantities.
inline Rational rational_of(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  if (j.is_number_float())
    throw error(errc::parse_error,
                where + " must be an exact rational string, not a float");
  throw error(errc::parse_error, where + " must be a rational");
}

inline std::uint64_t natural_of(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw error(errc::parse_error, where + " must be a nonnegative integer");
}

inline Vocabulary vocabulary_of(const json& j, const LoadOptions& options,
                                std::vector<std::string>* warnings) {
  check_keys(j, "vocabulary", {"sorts", "relations", "constants"}, options,
             warnings);
  Vocabulary v;
  for (const auto& s : require(j, "sorts", "vocabulary"))
    v.sorts.push_back(text_of(s, "vocabulary.sorts entry"));
  if (auto it = j.find("relations"); it != j.end()) {
    for (const auto& r : *it) {
      check_keys(r, "vocabulary.relations entry",
                 {"name", "args", "builtin", "success_value"}, options,
                 warnings);
      RelationDecl decl;
      decl.name = text_of(require(r, "name", "relation"), "relation name");
      for (const auto& a : require(r, "args", "relation " + decl.name))
        decl.arg_sorts.push_back(text_of(a, "relation argument sort"));
      if (auto b = r.find("builtin"); b != r.end()) {
        std::string kind = text_of(*b, "builtin kind");
        if (kind == "membership")
          decl.builtin = BuiltinKind::Membership;
        else if (kind == "application")
          decl.builtin = BuiltinKind::Application;
        else
          throw error(errc::parse_error,
                      "unknown builtin kind \"" + kind + "\" on relation " +
                          decl.name);
      }
      if (auto sv = r.find("success_value"); sv != r.end())
        decl.success_value = text_of(*sv, "success_value");
      v.relations.push_back(std::move(decl));
    }
  }
  if (auto it = j.find("constants"); it != j.end()) {
    for (const auto& c : *it) {
      check_keys(c, "vocabulary.constants entry", {"name", "sort"}, options,
                 warnings);
      v.constants.push_back(
          {text_of(require(c, "name", "constant"), "constant name"),
           text_of(require(c, "sort", "constant"), "constant sort")});
    }
  }
  return v;
}

inline SortCarrier carrier_of(const json& j, const std::string& sort,
                              const LoadOptions& options,
                              std::vector<std::string>* warnings) {
  const std::string where = "structure.carriers." + sort;
  check_keys(j, where,
             {"kind", "elements", "lo", "hi", "index_sort", "value_sort",
              "base_sort", "k"},
             options, warnings);
  SortCarrier c;
  std::string kind = text_of(require(j, "kind", where), where + ".kind");
  if (kind == "explicit") {
    c.kind = SortCarrier::Kind::Explicit;
    for (const auto& e : require(j, "elements", where))
      c.elements.push_back(text_of(e, where + " element"));
  } else if (kind == "int_range") {
    c.kind = SortCarrier::Kind::IntRange;
    c.lo = static_cast<std::int64_t>(natural_of(require(j, "lo", where),
                                                where + ".lo"));
    c.hi = static_cast<std::int64_t>(natural_of(require(j, "hi", where),
                                                where + ".hi"));
  } else if (kind == "functions") {
    c.kind = SortCarrier::Kind::Functions;
    c.index_sort = text_of(require(j, "index_sort", where), where);
    c.value_sort = text_of(require(j, "value_sort", where), where);
  } else if (kind == "subsets") {
    c.kind = SortCarrier::Kind::Subsets;
    c.base_sort = text_of(require(j, "base_sort", where), where);
    c.subset_k = static_cast<std::uint32_t>(
        natural_of(require(j, "k", where), where + ".k"));
  } else {
    throw error(errc::parse_error,
                "unknown carrier kind \"" + kind + "\" at " + where);
  }
  return c;
}

inline Structure structure_of(const json& j, const Vocabulary& vocab,
                              const LoadOptions& options,
                              std::vector<std::string>* warnings) {
  check_keys(j, "structure", {"carriers", "relation_tuples", "constant_values"},
             options, warnings);
  RawStructure raw;
  for (const auto& [sort, cj] : require(j, "carriers", "structure").items())
    raw.carriers.emplace(sort, carrier_of(cj, sort, options, warnings));
  if (auto it = j.find("relation_tuples"); it != j.end()) {
    for (const auto& [name, tuples] : it->items()) {
      auto& list = raw.relation_tuples[name];
      for (const auto& tuple : tuples) {
        std::vector<std::string> ids;
        for (const auto& id : tuple)
          ids.push_back(text_of(id, "tuple of relation " + name));
        list.push_back(std::move(ids));
      }
    }
  }
  if (auto it = j.find("constant_values"); it != j.end())
    for (const auto& [name, value] : it->items())
      raw.constant_values.emplace(
          name, text_of(value, "value of constant " + name));
  return validate_or_throw(vocab, raw);
}

inline std::vector<Rational> bounds_of(const json& j, const std::string& where,
                                       std::uint64_t positions) {
  std::vector<Rational> out;
  if (j.is_array()) {
    for (const auto& p : j) out.push_back(rational_of(p, where + " entry"));
    return out;
  }
  // scalar shorthand: one bound replicated across every position
  Rational r = rational_of(j, where);
  out.assign(positions, r);
  return out;
}

inline TrialSpec trial_of(const json& j, const Structure& s,
                          const LoadOptions& options,
                          std::vector<std::string>* warnings) {
  check_keys(j, "trial", {"outcome_sort", "model", "success_value",
                          "marked_sort"},
             options, warnings);
  TrialSpec t;
  t.outcome_sort = text_of(require(j, "outcome_sort", "trial"),
                           "trial.outcome_sort");
  if (auto it = j.find("success_value"); it != j.end())
    t.success_value = text_of(*it, "trial.success_value");
  if (auto it = j.find("marked_sort"); it != j.end())
    t.marked_sort = text_of(*it, "trial.marked_sort");

  const json& m = require(j, "model", "trial");
  check_keys(m, "trial.model",
             {"kind", "weights", "population", "pool", "marked", "lo", "hi",
              "positions"},
             options, warnings);
  std::string kind = text_of(require(m, "kind", "trial.model"), "model kind");
  if (kind == "weighted_categorical") {
    WeightedCategorical w;
    for (const auto& [id, weight] :
         require(m, "weights", "trial.model").items())
      w.weights.emplace(id, rational_of(weight, "weight of " + id));
    t.model = std::move(w);
  } else if (kind == "uniform_k_subset") {
    UniformKSubset u;
    u.population = natural_of(require(m, "population", "trial.model"),
                              "model.population");
    u.pool = natural_of(require(m, "pool", "trial.model"), "model.pool");
    u.marked = natural_of(require(m, "marked", "trial.model"), "model.marked");
    t.model = u;
  } else if (kind == "independent_binary") {
    std::uint64_t positions = 0;
    if (auto it = m.find("positions"); it != m.end()) {
      positions = natural_of(*it, "model.positions");
    } else if (s.vocabulary.has_sort(t.outcome_sort)) {
      const SortCarrier& c = s.carrier(t.outcome_sort);
      if (c.kind == SortCarrier::Kind::Functions)
        positions = s.explicit_size(s.carrier(c.index_sort));
    }
    IndependentBinary b;
    b.lo = bounds_of(require(m, "lo", "trial.model"), "model.lo", positions);
    b.hi = bounds_of(require(m, "hi", "trial.model"), "model.hi", positions);
    t.model = std::move(b);
  } else {
    throw error(errc::parse_error,
                "unknown trial model kind \"" + kind + "\"");
  }
  return t;
}

inline EventSpec prob_spec_of(const json& j, const Structure& s,
                              const std::string& outcome_sort,
                              const LoadOptions& options,
                              std::vector<std::string>* warnings) {
  check_keys(j, "focal_event.prob_spec", {"kind", "cmp", "k", "formula"},
             options, warnings);
  std::string kind = text_of(require(j, "kind", "prob_spec"),
                             "prob_spec.kind");
  if (kind == "count") {
    CountEvent e;
    std::string cmp = text_of(require(j, "cmp", "prob_spec"),
                              "prob_spec.cmp");
    if (cmp == ">=")
      e.cmp = Comparator::GreaterEqual;
    else if (cmp == "<=")
      e.cmp = Comparator::LessEqual;
    else if (cmp == "==")
      e.cmp = Comparator::Equal;
    else
      throw error(errc::parse_error,
                  "unknown comparator \"" + cmp + "\"; use >=, <= or ==");
    e.k = natural_of(require(j, "k", "prob_spec"), "prob_spec.k");
    return e;
  }
  if (kind == "extensional") {
    ParseOptions popt;
    popt.default_free_sort = outcome_sort;
    ExtensionalEvent e;
    e.formula = parse_formula(
        text_of(require(j, "formula", "prob_spec"), "prob_spec.formula"),
        s.vocabulary, popt);
    return e;
  }
  throw error(errc::parse_error,
              "unknown prob_spec kind \"" + kind + "\"; use count or "
              "extensional");
}

}  // namespace ioimpl

inline LoadedScenario scenario_from_json(const json& j,
                                         const LoadOptions& options = {}) {
  using namespace ioimpl;
  LoadedScenario out;
  Scenario& sc = out.scenario;
  check_keys(j, "scenario",
             {"name", "threshold", "complexity_budget", "vocabulary",
              "structure", "trial", "focal_event", "actual_outcome",
              "background_notes"},
             options, &out.warnings);
  sc.name = text_of(require(j, "name", "scenario"), "name");
  sc.threshold = rational_of(require(j, "threshold", "scenario"), "threshold");
  if (auto it = j.find("complexity_budget"); it != j.end())
    sc.complexity_budget = static_cast<unsigned>(
        natural_of(*it, "complexity_budget"));
  if (auto it = j.find("background_notes"); it != j.end())
    sc.background_notes = text_of(*it, "background_notes");

  Vocabulary vocab = vocabulary_of(require(j, "vocabulary", "scenario"),
                                   options, &out.warnings);
  sc.structure = structure_of(require(j, "structure", "scenario"), vocab,
                              options, &out.warnings);
  sc.trial = trial_of(require(j, "trial", "scenario"), sc.structure, options,
                      &out.warnings);

  const json& focal = require(j, "focal_event", "scenario");
  check_keys(focal, "focal_event", {"formula", "prob_spec"}, options,
             &out.warnings);
  sc.focal.formula_text = text_of(require(focal, "formula", "focal_event"),
                                  "focal_event.formula");
  ParseOptions popt;
  popt.default_free_sort = sc.trial.outcome_sort;
  sc.focal.formula = parse_formula(sc.focal.formula_text,
                                   sc.structure.vocabulary, popt);
  sc.focal.prob_spec =
      prob_spec_of(require(focal, "prob_spec", "focal_event"), sc.structure,
                   sc.trial.outcome_sort, options, &out.warnings);

  sc.actual_outcome = text_of(require(j, "actual_outcome", "scenario"),
                              "actual_outcome");
  validate_scenario(sc);
  return out;
}

inline LoadedScenario load_scenario(const std::string& path,
                                    const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in)
    throw error(errc::io_error, "cannot open scenario file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw error(errc::parse_error,
                path + ": " + e.what());  // carries line and column
  }
  try {
    return scenario_from_json(j, options);
  } catch (const error& e) {
    throw error(e.code(), path + ": " + e.what());
  }
}

inline json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["threshold"] = to_fraction_string(sc.threshold);
  if (sc.complexity_budget) j["complexity_budget"] = *sc.complexity_budget;
  if (!sc.background_notes.empty())
    j["background_notes"] = sc.background_notes;

  const Vocabulary& v = sc.structure.vocabulary;
  json vocab;
  vocab["sorts"] = v.sorts;
  if (!v.relations.empty()) {
    json rels = json::array();
    for (const auto& decl : v.relations) {
      json r;
      r["name"] = decl.name;
      r["args"] = decl.arg_sorts;
      if (decl.builtin == BuiltinKind::Membership) r["builtin"] = "membership";
      if (decl.builtin == BuiltinKind::Application) {
        r["builtin"] = "application";
        r["success_value"] = decl.success_value;
      }
      rels.push_back(std::move(r));
    }
    vocab["relations"] = std::move(rels);
  }
  if (!v.constants.empty()) {
    json cons = json::array();
    for (const auto& c : v.constants)
      cons.push_back({{"name", c.name}, {"sort", c.sort}});
    vocab["constants"] = std::move(cons);
  }
  j["vocabulary"] = std::move(vocab);

  json carriers;
  for (const auto& sort : v.sorts) {
    const SortCarrier& c = sc.structure.carrier(sort);
    json cj;
    switch (c.kind) {
      case SortCarrier::Kind::Explicit:
        cj["kind"] = "explicit";
        cj["elements"] = c.elements;
        break;
      case SortCarrier::Kind::IntRange:
        cj["kind"] = "int_range";
        cj["lo"] = c.lo;
        cj["hi"] = c.hi;
        break;
      case SortCarrier::Kind::Functions:
        cj["kind"] = "functions";
        cj["index_sort"] = c.index_sort;
        cj["value_sort"] = c.value_sort;
        break;
      case SortCarrier::Kind::Subsets:
        cj["kind"] = "subsets";
        cj["base_sort"] = c.base_sort;
        cj["k"] = c.subset_k;
        break;
    }
    carriers[sort] = std::move(cj);
  }
  json structure;
  structure["carriers"] = std::move(carriers);
  json tuples;
  for (const auto& decl : v.relations) {
    if (decl.builtin != BuiltinKind::None) continue;
    auto it = sc.structure.extensions.find(decl.name);
    if (it == sc.structure.extensions.end()) continue;
    json list = json::array();
    for (const auto& tuple : it->second) {
      json ids = json::array();
      for (size_t i = 0; i < tuple.size(); ++i)
        ids.push_back(sc.structure.element_id(decl.arg_sorts[i], tuple[i]));
      list.push_back(std::move(ids));
    }
    if (!list.empty()) tuples[decl.name] = std::move(list);
  }
  if (!tuples.empty()) structure["relation_tuples"] = std::move(tuples);
  if (!sc.structure.constant_values.empty()) {
    json values;
    for (const auto& c : v.constants)
      values[c.name] = sc.structure.element_text(
          c.sort, sc.structure.constant_values.at(c.name));
    structure["constant_values"] = std::move(values);
  }
  j["structure"] = std::move(structure);

  json trial;
  trial["outcome_sort"] = sc.trial.outcome_sort;
  if (!sc.trial.success_value.empty())
    trial["success_value"] = sc.trial.success_value;
  if (!sc.trial.marked_sort.empty()) trial["marked_sort"] = sc.trial.marked_sort;
  json model;
  if (const auto* w = std::get_if<WeightedCategorical>(&sc.trial.model)) {
    model["kind"] = "weighted_categorical";
    json weights;
    for (const auto& [id, weight] : w->weights)
      weights[id] = to_fraction_string(weight);
    model["weights"] = std::move(weights);
  } else if (const auto* u = std::get_if<UniformKSubset>(&sc.trial.model)) {
    model["kind"] = "uniform_k_subset";
    model["population"] = u->population;
    model["pool"] = u->pool;
    model["marked"] = u->marked;
  } else {
    const auto& b = std::get<IndependentBinary>(sc.trial.model);
    model["kind"] = "independent_binary";
    json lo = json::array(), hi = json::array();
    for (const auto& p : b.lo) lo.push_back(to_fraction_string(p));
    for (const auto& p : b.hi) hi.push_back(to_fraction_string(p));
    model["lo"] = std::move(lo);
    model["hi"] = std::move(hi);
  }
  trial["model"] = std::move(model);
  j["trial"] = std::move(trial);

  json focal;
  focal["formula"] = sc.focal.formula_text.empty()
                         ? pretty(sc.focal.formula)
                         : sc.focal.formula_text;
  json spec;
  if (const auto* count = std::get_if<CountEvent>(&sc.focal.prob_spec)) {
    spec["kind"] = "count";
    spec["cmp"] = comparator_text(count->cmp);
    spec["k"] = count->k;
  } else {
    spec["kind"] = "extensional";
    spec["formula"] = pretty(std::get<ExtensionalEvent>(sc.focal.prob_spec)
                                 .formula);
  }
  focal["prob_spec"] = std::move(spec);
  j["focal_event"] = std::move(focal);

  j["actual_outcome"] = sc.actual_outcome;
  return j;
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw error(errc::io_error, "cannot write scenario file " + path);
  out << scenario_to_json(sc).dump(2) << "\n";
}

// Structured report document. The key set is stable; consumers may rely on
// exactly these fields.
inline json report_to_json(const Report& r) {
  json j;
  j["name"] = r.name;
  j["sup"] = to_decimal_string(r.bound.sup);
  j["sup_exact"] = to_fraction_string(r.bound.sup);
  j["negligible"] = r.negligible;
  j["formula_length"] = r.description_length;
  j["budget"] = r.budget;
  j["within_budget"] = r.within_budget;
  j["outcome_in_event"] = r.outcome_in_event;
  std::string cross = cross_check_text(r.cross_check);
  if (r.cross_check != CrossCheck::Passed && !r.cross_check_note.empty())
    cross += "(" + r.cross_check_note + ")";
  j["cross_check"] = std::move(cross);
  j["verdict"] = r.impugned ? "IMPUGNED" : "NOT_IMPUGNED";
  j["reasons"] = r.reasons;
  return j;
}

}  // namespace ra
