#include "circlestab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"
#include "detail/opt.hpp"

namespace circlestab {

namespace {

using detail::refined_min_abs;

int interval_samples(double length, const AnalysisConfig& cfg) {
  const double scaled = std::ceil(length * cfg.grid_resolution);
  return std::max(64, static_cast<int>(scaled));
}

StabilityMargin compute_margin(const CircleField& field, const FixedPointSet& set,
                               const AnalysisConfig& cfg) {
  StabilityMargin margin;
  const auto f = [&](double x) { return field.eval(x); };
  const auto df = [&](double x) { return field.eval_deriv(x); };

  if (set.points.empty()) {
    // Zero-free circle: the whole field is the margin.
    margin.eps0 = refined_min_abs(f, 0.0, 1.0, cfg.grid_resolution);
    margin.robustness_radius = margin.eps0;
    return margin;
  }

  std::vector<double> xs;
  xs.reserve(set.points.size());
  for (const auto& fp : set.points) xs.push_back(fp.location);

  double min_gap = 1.0;
  if (xs.size() > 1) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double next = (k + 1 < xs.size()) ? xs[k + 1] : xs[0] + 1.0;
      min_gap = std::min(min_gap, next - xs[k]);
    }
  }

  // Shrink delta geometrically until every [x_k - delta, x_k + delta] keeps
  // |f'| above tol_deriv; the refinement inside refined_min also catches
  // derivative sign changes hiding between samples.
  double delta = min_gap / 4.0;
  double worst_df = 0.0;
  bool accepted = false;
  for (int attempt = 0; attempt < 60; ++attempt) {
    worst_df = std::numeric_limits<double>::infinity();
    const int n = interval_samples(2.0 * delta, cfg);
    for (const double x : xs) {
      worst_df = std::min(worst_df, refined_min_abs(df, x - delta, x + delta, n));
      if (worst_df <= cfg.tol_deriv) break;
    }
    if (worst_df > cfg.tol_deriv) {
      accepted = true;
      break;
    }
    delta /= 2.0;
  }
  if (!accepted) {
    throw resolution_error("no admissible derivative margin interval width found");
  }

  margin.delta = delta;
  margin.eps0 = 0.5 * worst_df;

  // Closed complement of the union of the delta-intervals.
  double worst_f = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double next = (k + 1 < xs.size()) ? xs[k + 1] : xs[0] + 1.0;
    const double lo = xs[k] + delta;
    const double hi = next - delta;
    if (hi <= lo) continue;
    const int n = interval_samples(hi - lo, cfg);
    worst_f = std::min(worst_f, refined_min_abs(f, lo, hi, n));
  }
  margin.eps1 = 0.5 * worst_f;
  margin.robustness_radius = std::min(margin.eps0, *margin.eps1);
  return margin;
}

}  // namespace

std::string stability_verdict_name(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::StructurallyStable: return "StructurallyStable";
    case StabilityVerdict::NotStructurallyStable: return "NotStructurallyStable";
    case StabilityVerdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

std::string stability_reason_name(StabilityReason r) {
  switch (r) {
    case StabilityReason::NoFixedPoints: return "NoFixedPoints";
    case StabilityReason::AllHyperbolic: return "AllHyperbolic";
    case StabilityReason::NonhyperbolicCase1: return "NonhyperbolicCase1";
    case StabilityReason::NonhyperbolicCase2: return "NonhyperbolicCase2";
    case StabilityReason::PlateauCase3: return "PlateauCase3";
    case StabilityReason::AccumulationCase4: return "AccumulationCase4";
    case StabilityReason::WholeCircleZero: return "WholeCircleZero";
  }
  return "AccumulationCase4";
}

StabilityReport stability_verdict(const CircleField& field, const AnalysisConfig& cfg) {
  cfg.validate();
  StabilityReport report;
  report.fixed_points = find_fixed_points(field, cfg);
  const auto& set = report.fixed_points;

  if (set.whole_circle_zero) {
    report.verdict = StabilityVerdict::NotStructurallyStable;
    report.reason = StabilityReason::WholeCircleZero;
    return report;
  }

  // An oscillator atom whose center sits in the zero set is exact knowledge
  // of an accumulation: it confirms every sampled suspicion.
  bool confirmed_accumulation = false;
  std::vector<double> accumulation_centers;
  for (const auto& atom : field.atoms) {
    if (atom.kind != AtomKind::AccumOsc || atom.amplitude == 0.0) continue;
    const double c = wrap_unit(atom.center);
    if (std::abs(field.eval(c)) <= cfg.tol_zero &&
        std::abs(field.eval_deriv(c)) <= cfg.tol_deriv) {
      confirmed_accumulation = true;
      accumulation_centers.push_back(c);
    }
  }

  std::vector<std::pair<double, StabilityReason>> violations;
  for (const auto& fp : set.points) {
    if (fp.classification == Classification::NonhyperbolicNoSignChange) {
      violations.emplace_back(fp.location, StabilityReason::NonhyperbolicCase1);
    } else if (fp.classification == Classification::NonhyperbolicSignChange) {
      violations.emplace_back(fp.location, StabilityReason::NonhyperbolicCase2);
    }
  }
  for (const auto& p : set.plateaus) {
    violations.emplace_back(p.a, StabilityReason::PlateauCase3);
  }
  for (const double c : accumulation_centers) {
    violations.emplace_back(c, StabilityReason::AccumulationCase4);
  }
  if (confirmed_accumulation) {
    for (const double s : set.accumulation_suspected) {
      violations.emplace_back(s, StabilityReason::AccumulationCase4);
    }
  }

  if (!violations.empty()) {
    std::sort(violations.begin(), violations.end());
    report.verdict = StabilityVerdict::NotStructurallyStable;
    report.reason = violations.front().second;
    return report;
  }

  if (!set.accumulation_suspected.empty()) {
    report.verdict = StabilityVerdict::Undecided;
    report.reason = StabilityReason::AccumulationCase4;
    return report;
  }

  report.verdict = StabilityVerdict::StructurallyStable;
  report.reason = set.points.empty() ? StabilityReason::NoFixedPoints
                                     : StabilityReason::AllHyperbolic;
  const StabilityMargin margin = compute_margin(field, set, cfg);
  report.delta = margin.delta;
  report.eps0 = margin.eps0;
  report.eps1 = margin.eps1;
  report.robustness_radius = margin.robustness_radius;
  return report;
}

StabilityMargin stability_margin(const CircleField& field, const AnalysisConfig& cfg) {
  const StabilityReport report = stability_verdict(field, cfg);
  if (report.verdict != StabilityVerdict::StructurallyStable) {
    throw precondition_error("stability margin requires a structurally stable field");
  }
  StabilityMargin margin;
  margin.delta = report.delta;
  margin.eps0 = *report.eps0;
  margin.eps1 = report.eps1;
  margin.robustness_radius = *report.robustness_radius;
  return margin;
}

std::string stability_report_text(const StabilityReport& report, const std::string& label) {
  std::ostringstream out;
  out << "field: " << label << "\n";
  out << "verdict: " << stability_verdict_name(report.verdict) << "\n";
  out << "reason: " << stability_reason_name(report.reason) << "\n";
  if (report.delta) out << "delta: " << format_number(*report.delta) << "\n";
  if (report.eps0) out << "eps0: " << format_number(*report.eps0) << "\n";
  if (report.eps1) out << "eps1: " << format_number(*report.eps1) << "\n";
  if (report.robustness_radius) {
    out << "robustness_radius: " << format_number(*report.robustness_radius) << "\n";
  }
  const auto& set = report.fixed_points;
  out << "fixed_points: " << set.points.size() << "\n";
  for (const auto& fp : set.points) {
    out << "  x=" << format_number(fp.location) << " deriv=" << format_number(fp.derivative)
        << " class=" << classification_name(fp.classification)
        << " residual=" << format_number(fp.residual) << "\n";
  }
  out << "plateaus: " << set.plateaus.size() << "\n";
  for (const auto& p : set.plateaus) {
    out << "  a=" << format_number(p.a) << " b=" << format_number(p.b)
        << " left_sign=" << p.left_sign << " right_sign=" << p.right_sign << " subcase="
        << (p.subcase == PlateauSubcase::SameSign ? "SameSign" : "OppositeSign") << "\n";
  }
  out << "accumulation_suspected: " << set.accumulation_suspected.size() << "\n";
  for (const double s : set.accumulation_suspected) {
    out << "  x=" << format_number(s) << "\n";
  }
  if (set.whole_circle_zero) out << "whole_circle_zero: true\n";
  return out.str();
}

}  // namespace circlestab
