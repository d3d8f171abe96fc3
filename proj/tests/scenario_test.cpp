#include "ra/scenario_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "ra/cases.hpp"

using namespace ra;

namespace {

json lottery_json() { return scenario_to_json(bundled_case("lottery")); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

errc load_error(const json& j, const LoadOptions& options = {}) {
  try {
    scenario_from_json(j, options);
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a load failure";
  return errc::internal_error;
}

TEST(ScenarioJson, BundledCasesRoundTripExactly) {
  for (const auto& name : bundled_case_names()) {
    Scenario original = bundled_case(name);
    json first = scenario_to_json(original);
    LoadedScenario loaded = scenario_from_json(first);
    EXPECT_TRUE(loaded.warnings.empty()) << name;
    // the reloaded scenario must be indistinguishable: same structure, same
    // serialization, same verdict
    EXPECT_TRUE(loaded.scenario.structure == original.structure) << name;
    EXPECT_EQ(loaded.scenario.threshold, original.threshold) << name;
    EXPECT_EQ(scenario_to_json(loaded.scenario), first) << name;
    EXPECT_EQ(check(loaded.scenario).impugned, check(original).impugned)
        << name;
  }
}

TEST(ScenarioJson, SaveAndLoadThroughAFile) {
  auto path = temp_file("roundtrip.scenario.json");
  Scenario sc = bundled_case("stalking");
  save_scenario(sc, path.string());
  LoadedScenario loaded = load_scenario(path.string());
  EXPECT_EQ(loaded.scenario.name, "stalking");
  EXPECT_EQ(scenario_to_json(loaded.scenario), scenario_to_json(sc));
  std::filesystem::remove(path);
}

TEST(ScenarioJson, MissingFilesAndMalformedJsonNameThePath) {
  try {
    load_scenario("/nonexistent/nowhere.json");
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::io_error);
    EXPECT_NE(std::string(e.what()).find("nowhere.json"), std::string::npos);
  }

  auto path = temp_file("broken.scenario.json");
  std::ofstream(path) << "{ not json";
  try {
    load_scenario(path.string());
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::parse_error);
    std::string what = e.what();
    EXPECT_NE(what.find(path.string()), std::string::npos);
    // the position of the defect is preserved
    EXPECT_NE(what.find("line 1"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(ScenarioJson, UnknownKeysAreErrorsWhenStrict) {
  {
    json j = lottery_json();
    j["extra"] = 1;
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["vocabulary"]["extra"] = 1;
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["structure"]["carriers"]["Person"]["extra"] = 1;
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["trial"]["model"]["extra"] = 1;
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["focal_event"]["prob_spec"]["extra"] = 1;
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
}

TEST(ScenarioJson, UnknownKeysBecomeWarningsWhenLenient) {
  json j = lottery_json();
  j["extra"] = 1;
  j["trial"]["model"]["stray"] = "x";
  LoadOptions lenient;
  lenient.lenient = true;
  LoadedScenario loaded = scenario_from_json(j, lenient);
  ASSERT_EQ(loaded.warnings.size(), 2u);
  EXPECT_NE(loaded.warnings[0].find("unknown key"), std::string::npos);
  EXPECT_EQ(check(loaded.scenario).impugned, true);
}

TEST(ScenarioJson, FloatsAreRejectedAsLossy) {
  {
    json j = lottery_json();
    j["threshold"] = 0.00001;
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["structure"];  // keep shape, poison one weight
    j["trial"]["model"]["weights"]["Donna"] = 3.0;
    try {
      scenario_from_json(j);
      FAIL();
    } catch (const error& e) {
      EXPECT_NE(std::string(e.what()).find("not a float"), std::string::npos);
    }
  }
  // exact forms of the same numbers load fine
  json j = lottery_json();
  j["threshold"] = "0.00001";
  EXPECT_EQ(scenario_from_json(j).scenario.threshold, Rational(1, 100000));
  j["threshold"] = 1;  // integers are exact, only fractions need strings
  EXPECT_EQ(load_error(j), errc::validation_error);  // but 1 is out of range
}

TEST(ScenarioJson, MissingRequiredKeysAreNamed) {
  for (const char* key : {"name", "threshold", "vocabulary", "structure",
                          "trial", "focal_event", "actual_outcome"}) {
    json j = lottery_json();
    j.erase(key);
    try {
      scenario_from_json(j);
      FAIL() << "missing " << key;
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::parse_error) << key;
      EXPECT_NE(std::string(e.what()).find("\"" + std::string(key) + "\""),
                std::string::npos)
          << key;
    }
  }
}

TEST(ScenarioJson, UnknownKindsAndComparatorsAreRejected) {
  {
    json j = lottery_json();
    j["structure"]["carriers"]["Person"]["kind"] = "mystery";
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["trial"]["model"]["kind"] = "mystery";
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = lottery_json();
    j["focal_event"]["prob_spec"] = {{"kind", "mystery"}};
    EXPECT_EQ(load_error(j), errc::parse_error);
  }
  {
    json j = scenario_to_json(bundled_case("stalking"));
    j["focal_event"]["prob_spec"] = {{"kind", "count"}, {"cmp", "<"},
                                     {"k", 2}};
    try {
      scenario_from_json(j);
      FAIL();
    } catch (const error& e) {
      EXPECT_NE(std::string(e.what()).find("use >=, <= or =="),
                std::string::npos);
    }
  }
}

TEST(ScenarioJson, FormulaProblemsSurfaceWithPositions) {
  {
    json j = lottery_json();
    j["focal_event"]["formula"] = "(CloseRelativeOfJohn(w) | ";
    try {
      scenario_from_json(j);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::syntax_error);
      EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
    }
  }
  {
    json j = lottery_json();
    j["focal_event"]["formula"] = "Knows(w)";
    try {
      scenario_from_json(j);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::unknown_symbol);
      EXPECT_NE(std::string(e.what()).find("Knows"), std::string::npos);
    }
  }
}

TEST(ScenarioJson, UndeclaredRelationTuplesAreRejected) {
  json j = lottery_json();
  j["structure"]["relation_tuples"]["Knows"] = {{"John", "Donna"}};
  EXPECT_EQ(load_error(j), errc::validation_error);
}

TEST(ScenarioJson, OutOfRangeThresholdFailsValidationOnLoad) {
  json j = lottery_json();
  j["threshold"] = "0";
  EXPECT_EQ(load_error(j), errc::validation_error);
}

TEST(ScenarioJson, ScalarBoundsReplicateAcrossPositions) {
  json j = scenario_to_json(bundled_case("stalking"));
  j["trial"]["model"]["lo"] = "0";
  j["trial"]["model"]["hi"] = "1/100";
  LoadedScenario loaded = scenario_from_json(j);
  const auto& model = std::get<IndependentBinary>(loaded.scenario.trial.model);
  EXPECT_EQ(model.lo.size(), 10u);
  EXPECT_EQ(model.hi.size(), 10u);
  // identical to the array form
  EXPECT_EQ(scenario_to_json(loaded.scenario),
            scenario_to_json(bundled_case("stalking")));
}

TEST(ReportJson, CarriesExactlyTheStableKeySet) {
  Report r = check(bundled_case("lottery"));
  json j = report_to_json(r);
  std::set<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.insert(key);
  std::set<std::string> expected = {
      "name",       "sup",           "sup_exact",        "negligible",
      "formula_length", "budget",    "within_budget",    "outcome_in_event",
      "cross_check", "verdict",      "reasons"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["name"], "lottery");
  EXPECT_EQ(j["sup"], "1.50000e-06");
  EXPECT_EQ(j["sup_exact"], "3/2000000");
  EXPECT_EQ(j["negligible"], true);
  EXPECT_EQ(j["formula_length"], 5);
  EXPECT_EQ(j["budget"], 20);
  EXPECT_EQ(j["within_budget"], true);
  EXPECT_EQ(j["outcome_in_event"], true);
  EXPECT_EQ(j["cross_check"], "PASSED");
  EXPECT_EQ(j["verdict"], "IMPUGNED");
  EXPECT_TRUE(j["reasons"].empty());
}

TEST(ReportJson, FailureReasonsAndNotesSurvive) {
  Report r = check(bundled_case("stalking"));
  json j = report_to_json(r);
  EXPECT_EQ(j["verdict"], "NOT_IMPUGNED");
  ASSERT_EQ(j["reasons"].size(), 1u);
  EXPECT_NE(j["reasons"][0].get<std::string>().find("not negligible"),
            std::string::npos);

  Report skipped = check(bundled_case("jury"));
  json js = report_to_json(skipped);
  std::string cross = js["cross_check"].get<std::string>();
  EXPECT_EQ(cross.find("SKIPPED("), 0u);
}

}  // namespace
