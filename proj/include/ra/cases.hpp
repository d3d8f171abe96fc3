#pragma once

// Bundled case studies. Each is a complete scenario built in code, so the
// library carries its own worked examples and the command-line tool can
// materialize them as files. Background notes tell the story in neutral
// terms; every number that is a round illustrative figure says so.

#include <string>
#include <vector>

#include "ra/parser.hpp"
#include "ra/verdict.hpp"

namespace ra {

namespace caseimpl {

inline FormulaPtr focal_parse(const Scenario& sc, const std::string& text) {
  ParseOptions options;
  options.default_free_sort = sc.trial.outcome_sort;
  return parse_formula(text, sc.structure.vocabulary, options);
}

// A winner closely connected to the draw's organizer. Ten million tickets;
// the organizer's circle holds fifteen of them. Ticket counts are
// illustrative placeholders, not sourced records.
inline Scenario lottery_case() {
  Scenario sc;
  sc.name = "lottery";
  sc.threshold = Rational(1, 100000);
  sc.complexity_budget = 20;

  Vocabulary v;
  v.sorts = {"Person"};
  v.relations = {{"CloseRelativeOfJohn", {"Person"}},
                 {"CloseFriendOfJohn", {"Person"}}};
  v.constants = {{"John", "Person"}};
  RawStructure raw;
  SortCarrier persons;
  persons.kind = SortCarrier::Kind::Explicit;
  persons.elements = {"John", "Donna", "rel2", "rel3", "fr1",
                      "fr2",  "fr3",   "oth1", "oth2", "oth3"};
  raw.carriers = {{"Person", persons}};
  raw.relation_tuples["CloseRelativeOfJohn"] = {{"Donna"}, {"rel2"}, {"rel3"}};
  raw.relation_tuples["CloseFriendOfJohn"] = {{"fr1"}, {"fr2"}, {"fr3"}};
  raw.constant_values = {{"John", "John"}};
  sc.structure = validate_or_throw(v, raw);

  sc.trial.outcome_sort = "Person";
  WeightedCategorical w;
  w.weights = {{"John", Rational(0)},        {"Donna", Rational(3)},
               {"rel2", Rational(2)},        {"rel3", Rational(1)},
               {"fr1", Rational(4)},         {"fr2", Rational(3)},
               {"fr3", Rational(2)},         {"oth1", Rational(3999994)},
               {"oth2", Rational(3999991)},  {"oth3", Rational(2000000)}};
  sc.trial.model = std::move(w);

  sc.focal.formula_text =
      "(CloseRelativeOfJohn(w) | CloseFriendOfJohn(w))";
  sc.focal.formula = focal_parse(sc, sc.focal.formula_text);
  ExtensionalEvent spec;
  spec.formula = focal_parse(sc, sc.focal.formula_text);
  sc.focal.prob_spec = std::move(spec);

  sc.actual_outcome = "Donna";
  sc.background_notes =
      "A draw over ten million tickets is won by the spouse of the person "
      "who ran it. Each weight counts one player's tickets; the organizer's "
      "close relatives and close friends hold fifteen tickets between them. "
      "All ticket counts are round illustrative figures, and three bulk "
      "entries stand in for the rest of the field.";
  return sc;
}

// Two family members of the presiding official land in a jury pool of 50
// drawn from a million residents. Population and acquaintance counts are
// round illustrative figures.
inline Scenario jury_case() {
  Scenario sc;
  sc.name = "jury";
  sc.threshold = Rational(1, 10000);
  sc.complexity_budget = 20;

  Vocabulary v;
  v.sorts = {"Person", "Member", "Pool"};
  RelationDecl in;
  in.name = "In";
  in.arg_sorts = {"Member", "Pool"};
  in.builtin = BuiltinKind::Membership;
  v.relations = {in};
  RawStructure raw;
  SortCarrier persons;
  persons.kind = SortCarrier::Kind::IntRange;
  persons.lo = 1;
  persons.hi = 1000000;
  SortCarrier members;
  members.kind = SortCarrier::Kind::IntRange;
  members.lo = 1;
  members.hi = 100;
  SortCarrier pools;
  pools.kind = SortCarrier::Kind::Subsets;
  pools.base_sort = "Person";
  pools.subset_k = 50;
  raw.carriers = {{"Person", persons}, {"Member", members}, {"Pool", pools}};
  sc.structure = validate_or_throw(v, raw);

  sc.trial.outcome_sort = "Pool";
  sc.trial.marked_sort = "Member";
  UniformKSubset u;
  u.population = 1000000;
  u.pool = 50;
  u.marked = 100;
  sc.trial.model = u;

  sc.focal.formula_text =
      "exists m1:Member. exists m2:Member. (m1 != m2 & (In(m1,p) & In(m2,p)))";
  sc.focal.formula = focal_parse(sc, sc.focal.formula_text);
  sc.focal.prob_spec = CountEvent{Comparator::GreaterEqual, 2};

  // seven marked members plus 43 unconnected residents
  std::string pool = "{";
  for (int i = 1; i <= 7; ++i) pool += std::to_string(i) + ",";
  for (int i = 101; i <= 143; ++i)
    pool += std::to_string(i) + (i == 143 ? "" : ",");
  pool += "}";
  sc.actual_outcome = pool;

  sc.background_notes =
      "A pool of fifty is drawn from a million eligible residents, and two "
      "or more of the hundred people connected to the presiding official "
      "turn up in it. The counts (a million residents, a hundred "
      "connections, seven in the drawn pool) are round illustrative "
      "figures.";
  return sc;
}

// One person keeps appearing at the restaurant another frequents: five
// encounters in ten nights, each night's chance encounter bounded by 1/100.
inline Scenario stalking_case() {
  Scenario sc;
  sc.name = "stalking";
  sc.threshold = Rational(1, 1000);
  sc.complexity_budget = 20;

  Vocabulary v;
  v.sorts = {"Night", "Bit", "Outcome"};
  RelationDecl app;
  app.name = "R";
  app.arg_sorts = {"Outcome", "Night"};
  app.builtin = BuiltinKind::Application;
  app.success_value = "1";
  v.relations = {app};
  RawStructure raw;
  SortCarrier nights;
  nights.kind = SortCarrier::Kind::IntRange;
  nights.lo = 1;
  nights.hi = 10;
  SortCarrier bits;
  bits.kind = SortCarrier::Kind::Explicit;
  bits.elements = {"0", "1"};
  SortCarrier outcomes;
  outcomes.kind = SortCarrier::Kind::Functions;
  outcomes.index_sort = "Night";
  outcomes.value_sort = "Bit";
  raw.carriers = {{"Night", nights}, {"Bit", bits}, {"Outcome", outcomes}};
  sc.structure = validate_or_throw(v, raw);

  sc.trial.outcome_sort = "Outcome";
  sc.trial.success_value = "1";
  IndependentBinary b;
  b.lo.assign(10, Rational(0));
  b.hi.assign(10, Rational(1, 100));
  sc.trial.model = std::move(b);

  sc.focal.formula_text =
      "exists n1:Night. exists n2:Night. (n1 != n2 & (R(f,n1) & R(f,n2)))";
  sc.focal.formula = focal_parse(sc, sc.focal.formula_text);
  sc.focal.prob_spec = CountEvent{Comparator::GreaterEqual, 2};

  sc.actual_outcome = "1010101010";
  sc.background_notes =
      "Ten nights out, five chance encounters with the same person. Each "
      "night an encounter happens with probability at most 1/100, "
      "independently. Two encounters are already suspicious to the eye, "
      "but their worst-case probability is not negligible at the chosen "
      "threshold, so the verdict stops short of impugning. The per-night "
      "bound and the night count are illustrative figures.";
  return sc;
}

inline Structure ballot_structure() {
  Vocabulary v;
  v.sorts = {"Drawing", "Party", "Outcome"};
  RelationDecl app;
  app.name = "R";
  app.arg_sorts = {"Outcome", "Drawing", "Party"};
  app.builtin = BuiltinKind::Application;
  v.relations = {app};
  v.constants = {{"D", "Party"}, {"N", "Party"}};
  RawStructure raw;
  SortCarrier d;
  d.kind = SortCarrier::Kind::IntRange;
  d.lo = 1;
  d.hi = 41;
  SortCarrier party;
  party.kind = SortCarrier::Kind::Explicit;
  party.elements = {"D", "N"};
  SortCarrier outcomes;
  outcomes.kind = SortCarrier::Kind::Functions;
  outcomes.index_sort = "Drawing";
  outcomes.value_sort = "Party";
  raw.carriers = {{"Drawing", d}, {"Party", party}, {"Outcome", outcomes}};
  raw.constant_values = {{"D", "D"}, {"N", "N"}};
  return validate_or_throw(v, raw);
}

// Forty-one seasons of drawing lots for the favored ballot position; one
// party loses the draw exactly once. Leaves the complexity budget unset to
// show the artifact default in reports.
inline Scenario ballot_case() {
  Scenario sc;
  sc.name = "ballot";
  sc.threshold = Rational(1, 1000000);
  sc.structure = ballot_structure();

  sc.trial.outcome_sort = "Outcome";
  sc.trial.success_value = "N";
  IndependentBinary b;
  b.lo.assign(41, Rational(1, 2));
  b.hi.assign(41, Rational(1, 2));
  sc.trial.model = std::move(b);

  sc.focal.formula_text =
      "forall i:Drawing. forall j:Drawing. ((R(f,i,N) & R(f,j,N)) -> i = j)";
  sc.focal.formula = focal_parse(sc, sc.focal.formula_text);
  sc.focal.prob_spec = CountEvent{Comparator::LessEqual, 1};

  std::string outcome(41, 'D');
  outcome[22] = 'N';
  sc.actual_outcome = outcome;

  sc.background_notes =
      "Each season, a drawing decides which party's candidates head the "
      "ballot, nominally by a fair coin. Over forty-one seasons one party "
      "heads the ballot every time but once. The season count and the "
      "position of the single loss are round illustrative figures.";
  return sc;
}

// The same drawings, but the null hypothesis concedes the procedure may
// lean either way: each drawing's probability only lies in [2/5, 3/5].
// Even the most favorable innate distribution leaves the run negligible.
inline Scenario ballot_interval_case() {
  Scenario sc = ballot_case();
  sc.name = "ballot_interval";
  IndependentBinary b;
  b.lo.assign(41, Rational(2, 5));
  b.hi.assign(41, Rational(3, 5));
  sc.trial.model = std::move(b);
  sc.background_notes =
      "The coin-flip drawings again, with the null hypothesis weakened: "
      "each drawing favors either party by at most three to two, so every "
      "per-drawing probability lies in [2/5, 3/5]. The supremum over that "
      "whole family is still negligible. The interval width is an "
      "illustrative figure.";
  return sc;
}

}  // namespace caseimpl

inline std::vector<std::string> bundled_case_names() {
  return {"lottery", "jury", "stalking", "ballot", "ballot_interval"};
}

inline Scenario bundled_case(const std::string& name) {
  if (name == "lottery") return caseimpl::lottery_case();
  if (name == "jury") return caseimpl::jury_case();
  if (name == "stalking") return caseimpl::stalking_case();
  if (name == "ballot") return caseimpl::ballot_case();
  if (name == "ballot_interval") return caseimpl::ballot_interval_case();
  throw error(errc::unknown_symbol, "no bundled case named \"" + name + "\"");
}

}  // namespace ra
