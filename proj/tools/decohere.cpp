// decohere: run or validate a scenario configuration.
//
//   decohere run <config.json> [--output-dir DIR] [--seed N] [--quiet]
//   decohere validate <config.json>
//   decohere schema
//
// Exit status: 0 success, 1 usage or I/O error, 2 invalid configuration,
// 3 numerical failure (diagnostics.json is left in the run directory).
#include <iostream>

#include <CLI11.hpp>

#include "decohere/app/scenarios.hpp"

namespace {

using namespace decohere::app;

void print_violations(const std::vector<Violation>& v, std::ostream& os) {
  for (const auto& x : v)
    os << (x.severity == Severity::error ? "error: " : "warning: ") << x.field << ": " << x.message << '\n';
}

int run(const std::string& path, const std::string& out_dir, std::optional<std::uint64_t> seed, bool quiet) {
  RunConfig cfg;
  std::vector<Violation> warnings;
  try {
    cfg = load_run_config(path, &warnings);
  } catch (const ConfigError& e) {
    print_violations(e.violations, std::cerr);
    return 2;
  }
  if (!quiet) print_violations(warnings, std::cerr);
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  fs::path dir;
  try {
    dir = make_run_directory(cfg.output_dir, cfg.scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    const auto r = run_scenario(cfg, dir);
    if (!quiet) {
      std::cout << dir.string() << '\n';
      for (const auto& f : r.files) std::cout << "  " << f << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    // positivity or trace blow-up, unresolved kernels, branch cuts, bad inputs discovered late
    const bool numerical = dynamic_cast<const decohere::NumericalError*>(&e) != nullptr;
    json diag = {{"scenario", cfg.scenario},
                 {"seed", cfg.seed},
                 {"parameters", cfg.parameters},
                 {"error", e.what()},
                 {"kind", numerical ? "numerical" : "input"}};
    std::ofstream(dir / "diagnostics.json") << diag.dump(2) << '\n';
    std::cerr << (numerical ? "numerical failure: " : "error: ") << e.what() << "\n  diagnostics: "
              << (dir / "diagnostics.json").string() << '\n';
    return numerical ? 3 : 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence of a particle crossing a dilute medium"};
  app.require_subcommand(1);

  std::string run_path, out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its artifacts");
  run_cmd->add_option("config", run_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--output-dir", out_dir, "Parent directory for <scenario>-<timestamp>/");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the configuration seed");
  run_cmd->add_flag("--quiet", quiet, "Print nothing on success");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration without running it");
  validate_cmd->add_option("config", validate_path, "JSON configuration")->required();

  app.add_subcommand("schema", "Print the configuration schema as JSON");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd)
    return run(run_path, out_dir, *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt, quiet);
  if (*validate_cmd) {
    const auto v = validate_config_file(validate_path);
    std::cout << to_json(v).dump(2) << '\n';
    return has_errors(v) ? 2 : 0;
  }
  std::cout << schema_json().dump(2) << '\n';
  return 0;
}
