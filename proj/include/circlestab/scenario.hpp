#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "circlestab/field.hpp"
#include "circlestab/fixed_points.hpp"

namespace circlestab {

struct ScenarioCommand {
  enum class Kind { Analyze, Margin, Perturb, Stabilize, Compare, Portrait };
  Kind kind = Kind::Analyze;
  std::string field;                    // declared field the command acts on
  std::string other;                    // compare: the second field
  std::map<std::string, double> params; // numeric key=value arguments
  int line = 0;                         // 1-based source line, for error reports
};

std::string command_kind_name(ScenarioCommand::Kind kind);

// Parsed scenario: named fields, an ordered command list, and the analysis
// configuration assembled from `set` lines.
struct Scenario {
  std::vector<std::pair<std::string, CircleField>> fields;
  std::vector<ScenarioCommand> commands;
  std::string output_dir;               // from an `out` line; empty means unset
  AnalysisConfig cfg;
  int portrait_resolution = 512;

  const CircleField& field_named(const std::string& name) const;
};

// Line-oriented format, '#' starts a comment anywhere:
//   set <key> <value>        grid, tol_zero, tol_deriv, plateau_min_width,
//                            accumulation_cap, density_candidates, seed,
//                            portrait_resolution
//   out <dir>                default output directory for this scenario
//   field <name> ... end     atom lines between, one per line (field file syntax)
//   analyze <field>
//   margin <field>
//   portrait <field>
//   perturb <field> case=<1|2|3|4> [x=|a=|b=|r=|delta=] eps=<budget>
//   stabilize <field> eps=<budget>
//   compare <field> <field>
// Throws parse_error with the 1-based line number on malformed input,
// duplicate or unknown names, and out-of-range configuration.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

struct CommandOutcome {
  int index = 0;                        // 1-based position in the scenario
  ScenarioCommand::Kind kind = ScenarioCommand::Kind::Analyze;
  std::string field;
  bool ok = false;
  std::string error;                   // failure message when !ok
  std::vector<std::string> artifacts;  // file names written under the output dir
};

struct ScenarioResult {
  int failures = 0;
  std::vector<CommandOutcome> outcomes;
  std::string output_dir;              // directory the artifacts were written to
};

// Executes the commands in order, writing one text report and one JSON record
// per command (plus SVG/CSV for portraits and a field file for perturb and
// stabilize results, and a final summary.json). A command failure records the
// error and execution continues; failures is the number of failed commands,
// so 0 means complete success. The output directory resolves to
// output_dir_override, then the scenario's `out` line, then "circlestab_out".
ScenarioResult run_scenario(const Scenario& scenario,
                            const std::string& output_dir_override = "");

}  // namespace circlestab
