#pragma once

#include <optional>
#include <string>

#include "circlestab/field.hpp"
#include "circlestab/fixed_points.hpp"

namespace circlestab {

enum class StabilityVerdict { StructurallyStable, NotStructurallyStable, Undecided };

enum class StabilityReason {
  NoFixedPoints,         // f never vanishes
  AllHyperbolic,         // finitely many zeros, all with |f'| > tol_deriv
  NonhyperbolicCase1,    // zero with vanishing derivative, no sign change
  NonhyperbolicCase2,    // zero with vanishing derivative, sign change
  PlateauCase3,          // an arc of zeros
  AccumulationCase4,     // infinitely many zeros piling onto a limit point
  WholeCircleZero,       // f vanishes identically
};

std::string stability_verdict_name(StabilityVerdict v);
std::string stability_reason_name(StabilityReason r);

// Margin data backing a StructurallyStable verdict. delta/eps1 are absent in
// the zero-free case, where robustness_radius is simply the minimum of |f|.
struct StabilityMargin {
  std::optional<double> delta;
  double eps0 = 0.0;
  std::optional<double> eps1;
  double robustness_radius = 0.0;
};

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::Undecided;
  StabilityReason reason = StabilityReason::AccumulationCase4;
  std::optional<double> delta;
  std::optional<double> eps0;
  std::optional<double> eps1;
  std::optional<double> robustness_radius;
  FixedPointSet fixed_points;
};

// Full decision: locates fixed points, classifies every defect, and when the
// field is structurally stable also computes the quantitative margins. The
// reported reason is the first definite violation in cyclic order from 0; a
// suspected accumulation downgrades the verdict to Undecided only when the
// field contains no oscillator atom confirming it exactly.
StabilityReport stability_verdict(const CircleField& field, const AnalysisConfig& cfg = {});

// Quantitative margins for a structurally stable field. With zeros present:
// sweeps delta down from a quarter of the minimal cyclic gap until |f'| stays
// above tol_deriv on every [x_k - delta, x_k + delta], sets eps0 to half the
// refined minimum of |f'| over those intervals, eps1 to half the refined
// minimum of |f| over the closed complement, and the robustness radius to
// min(eps0, eps1). Zero-free: eps0 = min |f| and the radius equals it.
// Throws precondition_error when the field is not structurally stable.
StabilityMargin stability_margin(const CircleField& field, const AnalysisConfig& cfg = {});

// Human-readable block: verdict, reason, margins, then one line per fixed
// point and plateau.
std::string stability_report_text(const StabilityReport& report, const std::string& label);

}  // namespace circlestab
