#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"
#include "circlestab/scenario.hpp"
#include "circlestab/stability.hpp"

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CIRCLESTAB_OUT"); env && *env) return env;
  return "";  // fall back to the scenario's own `out` line / built-in default
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circlestab: stability analysis of vector fields on the circle"};
  app.require_subcommand(1);
  app.footer(
      "environment:\n"
      "  CIRCLESTAB_OUT  default output directory when --out is not given\n"
      "\n"
      "output directory resolution: --out, then CIRCLESTAB_OUT, then the\n"
      "scenario's own 'out' line, then ./circlestab_out");

  int grid = 4096;
  double tol_zero = 1e-9;
  double tol_deriv = 1e-6;
  unsigned long long seed = 0;
  std::string out_flag;
  auto* grid_opt =
      app.add_option("--grid", grid, "detection grid resolution")->capture_default_str();
  auto* tolz_opt =
      app.add_option("--tol-zero", tol_zero, "zero tolerance |f| <= tol counts as zero")
          ->capture_default_str();
  auto* told_opt =
      app.add_option("--tol-deriv", tol_deriv, "hyperbolicity tolerance on |f'|")
          ->capture_default_str();
  auto* seed_opt =
      app.add_option("--seed", seed, "seed for randomized stages")->capture_default_str();
  app.add_option("--out", out_flag, "output directory for scenario artifacts");

  std::string scenario_path;
  auto* analyze = app.add_subcommand(
      "analyze", "run a scenario file: execute its commands and write reports");
  analyze->add_option("scenario", scenario_path, "scenario file")->required();
  analyze->fallthrough();

  std::string field_path;
  auto* check =
      app.add_subcommand("check", "read one field file and print its stability verdict");
  check->add_option("field-file", field_path, "field file")->required();
  check->fallthrough();

  CLI11_PARSE(app, argc, argv);

  const auto apply_flags = [&](circlestab::AnalysisConfig& cfg) {
    if (grid_opt->count()) cfg.grid_resolution = grid;
    if (tolz_opt->count()) cfg.tol_zero = tol_zero;
    if (told_opt->count()) cfg.tol_deriv = tol_deriv;
    if (seed_opt->count()) cfg.seed = seed;
  };

  try {
    if (analyze->parsed()) {
      circlestab::Scenario scenario = circlestab::load_scenario_file(scenario_path);
      apply_flags(scenario.cfg);
      scenario.cfg.validate();
      const circlestab::ScenarioResult result =
          circlestab::run_scenario(scenario, resolve_out_dir(out_flag));
      for (const circlestab::CommandOutcome& o : result.outcomes) {
        std::cout << (o.ok ? "[ok]     " : "[failed] ") << o.index << " "
                  << circlestab::command_kind_name(o.kind) << " " << o.field;
        if (!o.ok) std::cout << ": " << o.error;
        std::cout << "\n";
      }
      std::cout << "artifacts written to " << result.output_dir << "\n";
      if (result.failures > 0) {
        std::cout << result.failures << " command(s) failed\n";
        return 1;
      }
      std::cout << "all commands succeeded\n";
      return 0;
    }

    // check
    const circlestab::CircleField field = circlestab::load_field_file(field_path);
    circlestab::AnalysisConfig cfg;
    apply_flags(cfg);
    cfg.validate();
    const circlestab::StabilityReport report = circlestab::stability_verdict(field, cfg);
    std::cout << circlestab::stability_report_text(report, field.label);
    return 0;
  } catch (const circlestab::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
