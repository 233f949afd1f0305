// Scenario runner and verification entry point for the hadamard library.
//
//   hadamard run <file-or-builtin> [--out DIR] [--seed N]
//   hadamard verify [--suite NAME]
//   hadamard list [FILTER] [--json]
//
// Exit codes: 0 success / all certificates pass; 1 solver or certificate
// failure; 2 parse or validation failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hadamard/scenario.hpp"
#include "hadamard/selftest.hpp"

namespace fs = std::filesystem;
using namespace hadamard;

namespace {

int do_run(const std::string& target, const std::string& out_dir,
           std::optional<std::uint64_t> seed) {
  Scenario scenario;
  if (const Scenario* builtin = find_builtin(target)) {
    scenario = *builtin;
  } else {
    std::ifstream in(target);
    if (!in) {
      std::cerr << "error: '" << target << "' is neither a builtin scenario nor a readable file\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& err) {
      std::cerr << "error: " << target << ": " << line_anchor(text, err.byte)
                << ": " << err.what() << "\n";
      return 2;
    }
    try {
      scenario = scenario_from_json(j);
    } catch (const std::exception& err) {
      std::cerr << "error: " << target << ": " << err.what() << "\n";
      return 2;
    }
  }

  RunResult result;
  try {
    result = run_scenario(scenario, seed);
  } catch (const DomainError& err) {
    std::cerr << "error: scenario validation failed: " << err.what() << "\n";
    return 2;
  } catch (const ProjectionConvergenceError& err) {
    std::cerr << "error: " << err.what() << " (displacement " << err.displacement() << ")\n";
    return 1;
  }

  const fs::path dir = out_dir.empty() ? fs::path("runs") / result.scenario.name : fs::path(out_dir);
  write_artifacts(result, dir);
  std::cout << result.report_text;
  std::cout << "artifacts: " << (dir / "trace.csv").string() << ", "
            << (dir / "summary.json").string() << ", " << (dir / "report.txt").string() << "\n";
  return result.all_certificates_pass ? 0 : 1;
}

int do_verify(const std::optional<std::string>& suite) {
  double tol_scale = 1.0;
  if (const char* env = std::getenv("HADAMARD_TOL_SCALE")) {
    tol_scale = std::atof(env);
    if (!(tol_scale > 0.0)) {
      std::cerr << "error: HADAMARD_TOL_SCALE must be a positive number\n";
      return 2;
    }
    std::cout << "tolerance scale override: " << tol_scale << "\n";
  }
  if (suite) {
    bool known = false;
    for (const auto& name : suite_names()) known = known || name == *suite;
    if (!known) {
      std::cerr << "error: unknown suite '" << *suite << "'; available:";
      for (const auto& name : suite_names()) std::cerr << " " << name;
      std::cerr << "\n";
      return 2;
    }
  }
  const auto results = run_suites(suite, tol_scale);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << r.name << ": " << (r.checks - r.failures) << "/" << r.checks << " checks passed";
    if (!r.pass()) std::cout << "  FIRST FAILURE: " << r.first_failure;
    std::cout << "\n";
    failures += r.failures;
  }
  if (failures > 0) {
    std::cout << "verify: FAIL (" << failures << " failed checks)\n";
    return 1;
  }
  std::cout << "verify: OK\n";
  return 0;
}

int do_list(const std::string& filter, bool as_json) {
  json arr = json::array();
  for (const auto& s : builtin_scenarios()) {
    if (!filter.empty() && s.name.find(filter) == std::string::npos) continue;
    if (as_json)
      arr.push_back(json{{"name", s.name}, {"description", s.description}});
    else
      std::cout << s.name << " - " << s.description << "\n";
  }
  if (as_json) std::cout << arr.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational inequality solver on CAT(0) model spaces"};
  app.require_subcommand(1);

  std::string run_target;
  std::string run_out;
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "run a scenario file or builtin scenario");
  run->add_option("scenario", run_target, "path to a scenario JSON file, or a builtin name")
      ->required();
  run->add_option("--out", run_out, "output directory (default: runs/<name>)");
  std::uint64_t seed_value = 0;
  auto* seed_opt = run->add_option("--seed", seed_value, "override the scenario seed");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run the library property suites");
  auto* suite_opt = verify->add_option("--suite", suite, "run a single named suite");

  std::string filter;
  bool list_json = false;
  auto* list = app.add_subcommand("list", "list builtin scenarios");
  list->add_option("filter", filter, "substring filter on scenario names");
  list->add_flag("--json", list_json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (seed_opt->count() > 0) run_seed = seed_value;
      return do_run(run_target, run_out, run_seed);
    }
    if (verify->parsed())
      return do_verify(suite_opt->count() > 0 ? std::optional<std::string>(suite) : std::nullopt);
    if (list->parsed()) return do_list(filter, list_json);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
