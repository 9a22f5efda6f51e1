#include "circlestab/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "circlestab/circle.hpp"
#include "circlestab/equivalence.hpp"
#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"
#include "circlestab/norm.hpp"
#include "circlestab/perturbation.hpp"
#include "circlestab/portrait.hpp"
#include "circlestab/stability.hpp"

namespace circlestab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(int line, const std::string& msg) {
  throw parse_error("line " + std::to_string(line) + ": " + msg, line, 1);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, int line, const std::string& what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty())
    fail(line, what + " expects a number, got '" + tok + "'");
  return v;
}

long long parse_integer(const std::string& tok, int line, const std::string& what) {
  const double v = parse_number(tok, line, what);
  const long long n = static_cast<long long>(v);
  if (static_cast<double>(n) != v) fail(line, what + " expects an integer, got '" + tok + "'");
  return n;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  return true;
}

void apply_set(Scenario& s, const std::string& key, const std::string& value, int line) {
  if (key == "grid") {
    s.cfg.grid_resolution = static_cast<int>(parse_integer(value, line, "grid"));
  } else if (key == "tol_zero") {
    s.cfg.tol_zero = parse_number(value, line, "tol_zero");
  } else if (key == "tol_deriv") {
    s.cfg.tol_deriv = parse_number(value, line, "tol_deriv");
  } else if (key == "plateau_min_width") {
    s.cfg.plateau_min_width = parse_number(value, line, "plateau_min_width");
  } else if (key == "accumulation_cap") {
    s.cfg.accumulation_cap = static_cast<int>(parse_integer(value, line, "accumulation_cap"));
  } else if (key == "density_candidates") {
    s.cfg.density_candidates =
        static_cast<int>(parse_integer(value, line, "density_candidates"));
  } else if (key == "seed") {
    s.cfg.seed = static_cast<unsigned long long>(parse_integer(value, line, "seed"));
  } else if (key == "portrait_resolution") {
    s.portrait_resolution = static_cast<int>(parse_integer(value, line, "portrait_resolution"));
  } else {
    fail(line, "unknown setting '" + key + "'");
  }
}

ScenarioCommand::Kind simple_command_kind(const std::string& head) {
  if (head == "analyze") return ScenarioCommand::Kind::Analyze;
  if (head == "margin") return ScenarioCommand::Kind::Margin;
  return ScenarioCommand::Kind::Portrait;
}

void parse_params(ScenarioCommand& cmd, const std::vector<std::string>& tokens,
                  std::size_t first, int line) {
  for (std::size_t i = first; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      fail(line, "expected key=value argument, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    cmd.params[key] = parse_number(tok.substr(eq + 1), line, key);
  }
}

void validate_command(const ScenarioCommand& cmd, int line) {
  const auto require = [&](const char* key) {
    if (!cmd.params.count(key))
      fail(line, command_kind_name(cmd.kind) + " requires " + key + "=");
  };
  if (cmd.kind == ScenarioCommand::Kind::Stabilize) {
    require("eps");
    if (cmd.params.at("eps") <= 0.0) fail(line, "eps must be positive");
  }
  if (cmd.kind == ScenarioCommand::Kind::Perturb) {
    require("case");
    require("eps");
    if (cmd.params.at("eps") <= 0.0) fail(line, "eps must be positive");
    const double c = cmd.params.at("case");
    if (c != 1.0 && c != 2.0 && c != 3.0 && c != 4.0)
      fail(line, "case must be 1, 2, 3, or 4");
    if (c != 3.0) require("x");
  }
}

std::string error_type_name(const error& e) {
  if (dynamic_cast<const parse_error*>(&e)) return "parse_error";
  if (dynamic_cast<const density_error*>(&e)) return "density_error";
  if (dynamic_cast<const construction_error*>(&e)) return "construction_error";
  if (dynamic_cast<const resolution_error*>(&e)) return "resolution_error";
  if (dynamic_cast<const ambiguous_neighborhood_error*>(&e))
    return "ambiguous_neighborhood_error";
  if (dynamic_cast<const not_equivalent_error*>(&e)) return "not_equivalent_error";
  if (dynamic_cast<const undecided_error*>(&e)) return "undecided_error";
  if (dynamic_cast<const precondition_error*>(&e)) return "precondition_error";
  return "error";
}

const char* subcase_name(PlateauSubcase s) {
  return s == PlateauSubcase::SameSign ? "same_sign" : "opposite_sign";
}

json fixed_point_json(const FixedPoint& p) {
  return {{"location", p.location},
          {"derivative", p.derivative},
          {"classification", classification_name(p.classification)},
          {"residual", p.residual}};
}

json plateau_json(const PlateauInterval& pl) {
  return {{"a", pl.a},
          {"b", pl.b},
          {"left_sign", pl.left_sign},
          {"right_sign", pl.right_sign},
          {"subcase", subcase_name(pl.subcase)}};
}

json report_json(const StabilityReport& r) {
  json points = json::array();
  for (const FixedPoint& p : r.fixed_points.points) points.push_back(fixed_point_json(p));
  json plateaus = json::array();
  for (const PlateauInterval& pl : r.fixed_points.plateaus) plateaus.push_back(plateau_json(pl));
  json margins;
  if (r.robustness_radius) {
    margins = json{{"eps0", r.eps0 ? json(*r.eps0) : json(nullptr)},
                   {"eps1", r.eps1 ? json(*r.eps1) : json(nullptr)},
                   {"delta", r.delta ? json(*r.delta) : json(nullptr)},
                   {"robustness_radius", *r.robustness_radius}};
  } else {
    margins = nullptr;
  }
  return {{"verdict", stability_verdict_name(r.verdict)},
          {"reason", stability_reason_name(r.reason)},
          {"fixed_point_count", r.fixed_points.points.size()},
          {"fixed_points", points},
          {"plateaus", plateaus},
          {"accumulation_suspected", r.fixed_points.accumulation_suspected},
          {"whole_circle_zero", r.fixed_points.whole_circle_zero},
          {"margins", margins}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw error("cannot write " + path.filename().string());
}

Perturbation dispatch_perturb(const CircleField& field, const ScenarioCommand& cmd,
                              const AnalysisConfig& cfg) {
  const int case_no = static_cast<int>(cmd.params.at("case"));
  const double eps = cmd.params.at("eps");
  const auto param_or = [&](const char* key, double fallback) {
    const auto it = cmd.params.find(key);
    return it == cmd.params.end() ? fallback : it->second;
  };
  switch (case_no) {
    case 1:
      return annihilate(field, cmd.params.at("x"), param_or("delta", 0.1), eps, cfg);
    case 2:
      return split(field, cmd.params.at("x"), param_or("delta", 0.1), eps, cfg);
    case 4:
      return clear_accumulation(field, cmd.params.at("x"),
                                param_or("r", cfg.accumulation_base_radius), eps, cfg);
    default:
      break;
  }
  // case 3: pick the detected plateau (nearest to a= when given)
  const FixedPointSet set = find_fixed_points(field, cfg);
  if (set.plateaus.empty())
    throw construction_error("the field has no plateau to clear");
  const PlateauInterval* chosen = &set.plateaus.front();
  if (cmd.params.count("a")) {
    const double want = cmd.params.at("a");
    chosen = nullptr;
    for (const PlateauInterval& pl : set.plateaus)
      if (cyclic_distance(pl.a, want) < 0.02) chosen = &pl;
    if (!chosen)
      throw construction_error("no plateau starts near a=" + format_number(want));
  }
  return clear_plateau(field, chosen->a, chosen->b, param_or("delta", 0.05), eps,
                       chosen->subcase, cfg);
}

std::string witness_text(const PLHomeomorphism& h) {
  std::string out = h.orientation == Orientation::Preserving ? "preserving" : "reversing";
  out += "; nodes:";
  for (std::size_t i = 0; i < h.xs.size(); ++i)
    out += " (" + format_number(h.xs[i]) + " -> " + format_number(h.ys[i]) + ")";
  return out;
}

}  // namespace

std::string command_kind_name(ScenarioCommand::Kind kind) {
  switch (kind) {
    case ScenarioCommand::Kind::Analyze: return "analyze";
    case ScenarioCommand::Kind::Margin: return "margin";
    case ScenarioCommand::Kind::Perturb: return "perturb";
    case ScenarioCommand::Kind::Stabilize: return "stabilize";
    case ScenarioCommand::Kind::Compare: return "compare";
    case ScenarioCommand::Kind::Portrait: return "portrait";
  }
  return "analyze";
}

const CircleField& Scenario::field_named(const std::string& name) const {
  for (const auto& [n, f] : fields)
    if (n == name) return f;
  throw precondition_error("unknown field '" + name + "'");
}

Scenario parse_scenario_text(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool in_field = false;
  int field_line = 0;
  std::string field_name;
  std::vector<Atom> atoms;

  const auto field_exists = [&](const std::string& name) {
    for (const auto& [n, f] : s.fields)
      if (n == name) return true;
    return false;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (in_field) {
      if (line == "end") {
        if (atoms.empty()) fail(field_line, "field '" + field_name + "' has no atoms");
        s.fields.emplace_back(field_name, make_field(atoms, field_name));
        in_field = false;
        continue;
      }
      try {
        atoms.push_back(parse_atom_line(line, line_no));
      } catch (const parse_error& e) {
        throw parse_error("line " + std::to_string(line_no) + ": " + e.what(), e.line,
                          e.column);
      }
      continue;
    }

    const std::vector<std::string> tokens = tokenize(line);
    const std::string& head = tokens[0];
    if (head == "set") {
      if (tokens.size() != 3) fail(line_no, "set expects: set <key> <value>");
      apply_set(s, tokens[1], tokens[2], line_no);
    } else if (head == "out") {
      if (tokens.size() != 2) fail(line_no, "out expects: out <dir>");
      s.output_dir = tokens[1];
    } else if (head == "field") {
      if (tokens.size() != 2) fail(line_no, "field expects: field <name>");
      if (!valid_name(tokens[1]))
        fail(line_no, "field names use letters, digits, '_' and '-'");
      if (field_exists(tokens[1])) fail(line_no, "field '" + tokens[1] + "' already declared");
      in_field = true;
      field_name = tokens[1];
      field_line = line_no;
      atoms.clear();
    } else if (head == "analyze" || head == "margin" || head == "portrait") {
      if (tokens.size() != 2) fail(line_no, head + " expects: " + head + " <field>");
      ScenarioCommand cmd;
      cmd.kind = simple_command_kind(head);
      cmd.field = tokens[1];
      cmd.line = line_no;
      s.commands.push_back(cmd);
    } else if (head == "compare") {
      if (tokens.size() != 3) fail(line_no, "compare expects: compare <field> <field>");
      ScenarioCommand cmd;
      cmd.kind = ScenarioCommand::Kind::Compare;
      cmd.field = tokens[1];
      cmd.other = tokens[2];
      cmd.line = line_no;
      s.commands.push_back(cmd);
    } else if (head == "perturb" || head == "stabilize") {
      if (tokens.size() < 2) fail(line_no, head + " expects a field name");
      ScenarioCommand cmd;
      cmd.kind = head == "perturb" ? ScenarioCommand::Kind::Perturb
                                   : ScenarioCommand::Kind::Stabilize;
      cmd.field = tokens[1];
      cmd.line = line_no;
      parse_params(cmd, tokens, 2, line_no);
      validate_command(cmd, line_no);
      s.commands.push_back(cmd);
    } else {
      fail(line_no, "unknown directive '" + head + "'");
    }
  }
  if (in_field) fail(field_line, "field '" + field_name + "' is not closed by 'end'");

  for (const ScenarioCommand& cmd : s.commands) {
    if (!field_exists(cmd.field)) fail(cmd.line, "unknown field '" + cmd.field + "'");
    if (cmd.kind == ScenarioCommand::Kind::Compare && !field_exists(cmd.other))
      fail(cmd.line, "unknown field '" + cmd.other + "'");
  }
  try {
    s.cfg.validate();
  } catch (const error& e) {
    throw parse_error(std::string("configuration: ") + e.what(), 0, 0);
  }
  if (s.portrait_resolution < 64)
    throw parse_error("configuration: portrait_resolution must be >= 64", 0, 0);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read scenario file: " + path, 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

ScenarioResult run_scenario(const Scenario& scenario, const std::string& output_dir_override) {
  ScenarioResult result;
  std::string dir = output_dir_override;
  if (dir.empty()) dir = scenario.output_dir;
  if (dir.empty()) dir = "circlestab_out";
  result.output_dir = dir;
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  const AnalysisConfig& cfg = scenario.cfg;

  for (std::size_t i = 0; i < scenario.commands.size(); ++i) {
    const ScenarioCommand& cmd = scenario.commands[i];
    CommandOutcome outcome;
    outcome.index = static_cast<int>(i) + 1;
    outcome.kind = cmd.kind;
    outcome.field = cmd.field;

    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "%02d_", outcome.index);
    std::string base = prefix + command_kind_name(cmd.kind) + "_" + cmd.field;
    if (cmd.kind == ScenarioCommand::Kind::Compare) base += "_vs_" + cmd.other;

    json record{{"command", command_kind_name(cmd.kind)}, {"field", cmd.field}};
    std::string text;
    try {
      const CircleField& field = scenario.field_named(cmd.field);
      switch (cmd.kind) {
        case ScenarioCommand::Kind::Analyze: {
          const StabilityReport report = stability_verdict(field, cfg);
          record.update(report_json(report));
          text = stability_report_text(report, cmd.field);
          break;
        }
        case ScenarioCommand::Kind::Margin: {
          const StabilityMargin m = stability_margin(field, cfg);
          record["delta"] = m.delta ? json(*m.delta) : json(nullptr);
          record["eps0"] = m.eps0;
          record["eps1"] = m.eps1 ? json(*m.eps1) : json(nullptr);
          record["robustness_radius"] = m.robustness_radius;
          text = "field: " + cmd.field + "\n";
          if (m.delta) text += "delta: " + format_number(*m.delta) + "\n";
          text += "eps0: " + format_number(m.eps0) + "\n";
          if (m.eps1) text += "eps1: " + format_number(*m.eps1) + "\n";
          text += "robustness_radius: " + format_number(m.robustness_radius) + "\n";
          break;
        }
        case ScenarioCommand::Kind::Perturb: {
          const std::size_t before =
              find_fixed_points(field, cfg).points.size();
          const Perturbation p = dispatch_perturb(field, cmd, cfg);
          const StabilityReport after = stability_verdict(p.perturbed, cfg);
          const std::string field_file = base + ".field";
          record["case"] = static_cast<int>(cmd.params.at("case"));
          record["case_tag"] = case_tag_name(p.case_tag);
          record["params"] = cmd.params;
          record["sigma"] = p.sigma;
          record["budget"] = p.budget;
          record["achieved_norm"] = p.achieved_norm;
          record["atom"] = serialize_atom(p.atom);
          record["before_count"] = before;
          record["after_count"] = after.fixed_points.points.size();
          record["after_verdict"] = stability_verdict_name(after.verdict);
          record["output_field"] = field_file;
          text = "field: " + cmd.field + "\ncase: " + case_tag_name(p.case_tag) +
                 "\nsigma: " + format_number(p.sigma) +
                 "\nbudget: " + format_number(p.budget) +
                 "\nachieved_norm: " + format_number(p.achieved_norm) +
                 "\natom: " + serialize_atom(p.atom) +
                 "\nfixed points: " + std::to_string(before) + " -> " +
                 std::to_string(after.fixed_points.points.size()) +
                 "\nverdict after: " + stability_verdict_name(after.verdict) +
                 "\noutput field: " + field_file + "\n";
          write_file(root / field_file,
                     "# perturbed: " + cmd.field + " case=" + case_tag_name(p.case_tag) +
                         " sigma=" + format_number(p.sigma) +
                         " achieved_norm=" + format_number(p.achieved_norm) + "\n" +
                         serialize_field(p.perturbed));
          outcome.artifacts.push_back(field_file);
          break;
        }
        case ScenarioCommand::Kind::Stabilize: {
          const double eps = cmd.params.at("eps");
          const CircleField stabilized = stabilize(field, eps, cfg);
          std::vector<Atom> added(stabilized.atoms.begin() + field.atoms.size(),
                                  stabilized.atoms.end());
          const double distance =
              added.empty()
                  ? 0.0
                  : c1_norm(make_field(added, "difference"), 4 * cfg.grid_resolution).c1;
          const StabilityReport after = stability_verdict(stabilized, cfg);
          const std::string field_file = base + ".field";
          json atom_lines = json::array();
          for (const Atom& a : added) atom_lines.push_back(serialize_atom(a));
          record["eps"] = eps;
          record["added_atoms"] = atom_lines;
          record["distance"] = distance;
          record["after_count"] = after.fixed_points.points.size();
          record["after_verdict"] = stability_verdict_name(after.verdict);
          record["output_field"] = field_file;
          text = "field: " + cmd.field + "\neps: " + format_number(eps) +
                 "\nadded atoms: " + std::to_string(added.size()) + "\n";
          for (const Atom& a : added) text += "  " + serialize_atom(a) + "\n";
          text += "distance: " + format_number(distance) +
                  "\nverdict after: " + stability_verdict_name(after.verdict) +
                  "\nfixed points after: " +
                  std::to_string(after.fixed_points.points.size()) +
                  "\noutput field: " + field_file + "\n";
          write_file(root / field_file,
                     "# stabilized: " + cmd.field + " eps=" + format_number(eps) +
                         " added_atoms=" + std::to_string(added.size()) +
                         " distance=" + format_number(distance) + "\n" +
                         serialize_field(stabilized));
          outcome.artifacts.push_back(field_file);
          break;
        }
        case ScenarioCommand::Kind::Compare: {
          const CircleField& other = scenario.field_named(cmd.other);
          const auto [equivalent, witness] = are_equivalent(field, other, cfg);
          const std::string class_f = equivalence_class_name(equivalence_class(field, cfg));
          const std::string class_g = equivalence_class_name(equivalence_class(other, cfg));
          record["other"] = cmd.other;
          record["class_f"] = class_f;
          record["class_g"] = class_g;
          record["equivalent"] = equivalent;
          text = "fields: " + cmd.field + " vs " + cmd.other +
                 "\nclass " + cmd.field + ": " + class_f +
                 "\nclass " + cmd.other + ": " + class_g +
                 "\nequivalent: " + (equivalent ? "yes" : "no") + "\n";
          if (witness) {
            json nodes = json::array();
            for (std::size_t k = 0; k < witness->xs.size(); ++k)
              nodes.push_back({witness->xs[k], witness->ys[k]});
            const bool transfer_ok =
                te_check(field, other, *witness, 4 * cfg.grid_resolution);
            record["witness"] = {
                {"orientation", witness->orientation == Orientation::Preserving
                                    ? "preserving"
                                    : "reversing"},
                {"nodes", nodes}};
            record["te_check"] = transfer_ok;
            text += "witness: " + witness_text(*witness) + "\nte_check: " +
                    (transfer_ok ? "pass" : "fail") + "\n";
          } else {
            record["witness"] = nullptr;
            record["te_check"] = nullptr;
          }
          break;
        }
        case ScenarioCommand::Kind::Portrait: {
          const FixedPointSet set = find_fixed_points(field, cfg);
          const PhasePortrait portrait =
              render_portrait(field, set, scenario.portrait_resolution);
          const std::string svg_file = base + ".svg";
          const std::string csv_file = base + ".csv";
          write_file(root / svg_file, portrait_svg(portrait));
          write_file(root / csv_file, portrait_csv(portrait));
          outcome.artifacts.push_back(svg_file);
          outcome.artifacts.push_back(csv_file);
          record["resolution"] = scenario.portrait_resolution;
          record["svg"] = svg_file;
          record["csv"] = csv_file;
          record["marker_count"] = set.points.size();
          record["arrow_count"] = portrait.arrow_anchors.size();
          text = "field: " + cmd.field +
                 "\nresolution: " + std::to_string(scenario.portrait_resolution) +
                 "\nmarkers: " + std::to_string(set.points.size()) +
                 "\narrows: " + std::to_string(portrait.arrow_anchors.size()) +
                 "\nsvg: " + svg_file + "\ncsv: " + csv_file + "\n";
          break;
        }
      }
      outcome.ok = true;
    } catch (const error& e) {
      outcome.ok = false;
      outcome.error = e.what();
      record["error"] = e.what();
      record["error_type"] = error_type_name(e);
      text = "error: " + std::string(e.what()) + "\n";
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = e.what();
      record["error"] = e.what();
      record["error_type"] = "exception";
      text = "error: " + std::string(e.what()) + "\n";
    }

    write_file(root / (base + ".txt"), text);
    write_file(root / (base + ".json"), record.dump(2) + "\n");
    outcome.artifacts.push_back(base + ".txt");
    outcome.artifacts.push_back(base + ".json");
    if (!outcome.ok) ++result.failures;
    result.outcomes.push_back(outcome);
  }

  json summary{{"failures", result.failures}, {"commands", json::array()}};
  for (const CommandOutcome& o : result.outcomes) {
    json entry{{"index", o.index},
               {"kind", command_kind_name(o.kind)},
               {"field", o.field},
               {"ok", o.ok},
               {"artifacts", o.artifacts}};
    if (!o.ok) entry["error"] = o.error;
    summary["commands"].push_back(entry);
  }
  write_file(root / "summary.json", summary.dump(2) + "\n");
  return result;
}

}  // namespace circlestab
