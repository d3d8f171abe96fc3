// Command-line driver. Subcommands:
//   check FILE      run the full procedure, print the report
//   prob FILE       print only the probability bound
//   describe FILE   compare the supplied description against synthesis
//   eval FILE       evaluate an ad-hoc formula over the scenario's world
//   cases           list or materialize the bundled case studies
// Exit codes: 0 impugned (or success for non-verdict commands),
// 1 not impugned, 2 any error or usage problem.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ra/cases.hpp"
#include "ra/scenario_io.hpp"
#include "ra/synthesis.hpp"
#include "ra/verdict.hpp"

namespace {

constexpr int kExitImpugned = 0;
constexpr int kExitNotImpugned = 1;
constexpr int kExitError = 2;

std::uint64_t enum_limit_from_env() {
  const char* env = std::getenv("RA_ENUM_LIMIT");
  if (!env || !*env) return ra::EvalOptions{}.enum_limit;
  char* end = nullptr;
  unsigned long long value = std::strtoull(env, &end, 10);
  if (!end || *end != '\0' || value == 0)
    throw ra::error(ra::errc::parameter_out_of_range,
                    "RA_ENUM_LIMIT must be a positive integer, got \"" +
                        std::string(env) + "\"");
  return value;
}

ra::LoadedScenario load(const std::string& path, bool lenient) {
  ra::LoadOptions options;
  options.lenient = lenient;
  ra::LoadedScenario loaded = ra::load_scenario(path, options);
  for (const auto& warning : loaded.warnings)
    std::cerr << "warning: " << warning << "\n";
  return loaded;
}

int run_check(const std::string& path, const std::string& format,
              bool lenient) {
  ra::CheckOptions options;
  options.lenient = lenient;
  options.eval.enum_limit = enum_limit_from_env();
  ra::Report report = ra::check(load(path, lenient).scenario, options);
  if (format == "structured")
    std::cout << ra::report_to_json(report).dump(2) << "\n";
  else
    std::cout << ra::render_report(report);
  return report.impugned ? kExitImpugned : kExitNotImpugned;
}

int run_prob(const std::string& path, bool lenient) {
  ra::Scenario sc = load(path, lenient).scenario;
  ra::EvalOptions eval;
  eval.enum_limit = enum_limit_from_env();
  ra::OutcomeSpace space{&sc.structure, sc.trial.outcome_sort,
                         sc.trial.success_value};
  ra::ProbabilityBound bound =
      ra::event_probability_sup(sc.trial.model, sc.focal.prob_spec, &space,
                                eval);
  std::cout << "sup = " << ra::to_decimal_string(bound.sup) << " (exactly "
            << ra::to_fraction_string(bound.sup) << ")\n";
  std::cout << "  attained at: " << bound.sup_attained_at << "\n";
  std::cout << "inf = " << ra::to_decimal_string(bound.inf) << " (exactly "
            << ra::to_fraction_string(bound.inf) << ")\n";
  return kExitImpugned;
}

ra::SynthesisBudget parse_budget(const std::string& text) {
  ra::SynthesisBudget budget;
  if (text.empty()) return budget;
  unsigned parts[3] = {budget.max_length, budget.max_vars,
                       budget.max_quantifier_depth};
  size_t start = 0;
  int i = 0;
  for (; i < 3; ++i) {
    size_t comma = text.find(',', start);
    std::string piece = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      parts[i] = static_cast<unsigned>(std::stoul(piece));
    } catch (...) {
      throw ra::error(ra::errc::parse_error,
                      "--budget wants L,V,D (three integers), got \"" + text +
                          "\"");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (i != 2)
    throw ra::error(ra::errc::parse_error,
                    "--budget wants L,V,D (three integers), got \"" + text +
                        "\"");
  budget.max_length = parts[0];
  budget.max_vars = parts[1];
  budget.max_quantifier_depth = parts[2];
  return budget;
}

int run_describe(const std::string& path, const std::string& budget_text,
                 bool lenient) {
  ra::Scenario sc = load(path, lenient).scenario;
  ra::CheckOptions options;
  options.eval.enum_limit = enum_limit_from_env();
  ra::DescriptionAudit audit =
      ra::audit_description(sc, parse_budget(budget_text), options);
  std::cout << ra::render_audit(audit);
  return kExitImpugned;
}

int run_eval(const std::string& path, const std::string& formula_text,
             const std::string& at, bool lenient) {
  ra::Scenario sc = load(path, lenient).scenario;
  ra::EvalOptions eval;
  eval.enum_limit = enum_limit_from_env();
  ra::ParseOptions popt;
  popt.default_free_sort = sc.trial.outcome_sort;
  ra::FormulaPtr f =
      ra::parse_formula(formula_text, sc.structure.vocabulary, popt);
  auto frees = ra::free_variables(f);

  if (!at.empty()) {
    if (frees.size() != 1)
      throw ra::error(ra::errc::extra_free_variables,
                      "--at needs a formula with exactly one free variable");
    const auto& [name, sort] = *frees.begin();
    ra::Valuation v;
    v.bind(name, ra::parse_element(sc.structure, sort, at));
    bool holds = ra::eval(sc.structure, f, v, eval);
    std::cout << (holds ? "true" : "false") << "\n";
    return kExitImpugned;
  }

  if (frees.empty()) {
    bool holds = ra::eval_closed(sc.structure, f, eval);
    std::cout << (holds ? "true" : "false") << "\n";
    return kExitImpugned;
  }

  const auto& [name, sort] = *frees.begin();
  std::vector<ra::Element> set = ra::defined_set(sc.structure, f, eval);
  std::cout << set.size() << " element(s) of " << sort
            << " satisfy the formula:\n";
  for (const auto& e : set)
    std::cout << "  " << sc.structure.element_text(sort, e) << "\n";
  return kExitImpugned;
}

int run_cases(bool list_only) {
  for (const auto& name : ra::bundled_case_names()) {
    if (list_only) {
      std::cout << name << "\n";
      continue;
    }
    std::string file = name + ".scenario";
    ra::save_scenario(ra::bundled_case(name), file);
    // reload what was written and re-check: the files on disk, not the
    // in-memory copies, are what gets shared
    ra::Report report = ra::check(ra::load_scenario(file).scenario);
    std::cout << "wrote " << file << "  verdict: "
              << (report.impugned ? "IMPUGNED" : "NOT_IMPUGNED") << "\n";
  }
  return kExitImpugned;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"impugn the null hypothesis of an executed probabilistic "
               "trial"};
  app.require_subcommand(1);

  std::string path, format = "text", budget_text, formula_text, at;
  bool lenient = false, list_only = false;

  CLI::App* check = app.add_subcommand(
      "check", "run the full procedure and print the verdict report");
  check->add_option("file", path, "scenario file")->required();
  check->add_option("--format", format, "text (default) or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_flag("--lenient", lenient,
                  "downgrade unknown keys to warnings; report computation "
                  "errors instead of aborting");

  CLI::App* prob = app.add_subcommand(
      "prob", "print only the probability bound of the focal event");
  prob->add_option("file", path, "scenario file")->required();
  prob->add_flag("--lenient", lenient, "downgrade unknown keys to warnings");

  CLI::App* describe = app.add_subcommand(
      "describe",
      "compare the supplied description against the shortest synthesized "
      "one");
  describe->add_option("file", path, "scenario file")->required();
  describe->add_option("--budget", budget_text,
                       "synthesis budget as L,V,D (max formula length, max "
                       "variables, max quantifier depth)");
  describe->add_flag("--lenient", lenient,
                     "downgrade unknown keys to warnings");

  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate an ad-hoc formula over the scenario's structure");
  eval->add_option("file", path, "scenario file")->required();
  eval->add_option("--formula", formula_text, "formula text")->required();
  eval->add_option("--at", at,
                   "outcome element; with it the formula is tested at that "
                   "outcome, without it the defined set is listed");
  eval->add_flag("--lenient", lenient, "downgrade unknown keys to warnings");

  CLI::App* cases = app.add_subcommand(
      "cases", "materialize the bundled case studies into the working "
               "directory");
  cases->add_flag("--list", list_only, "print the case names only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return kExitError;
  }

  try {
    if (check->parsed()) return run_check(path, format, lenient);
    if (prob->parsed()) return run_prob(path, lenient);
    if (describe->parsed()) return run_describe(path, budget_text, lenient);
    if (eval->parsed()) return run_eval(path, formula_text, at, lenient);
    if (cases->parsed()) return run_cases(list_only);
  } catch (const ra::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
