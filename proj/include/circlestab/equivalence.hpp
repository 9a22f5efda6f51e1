#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circlestab/field.hpp"
#include "circlestab/fixed_points.hpp"

namespace circlestab {

enum class Orientation { Preserving, Reversing };

// Piecewise-linear circle homeomorphism through nodes (xs[i], ys[i]). The xs
// live in [0, 1) strictly increasing; the ys are lifted reals, strictly
// increasing for Preserving and strictly decreasing for Reversing, spanning
// less than one full turn so the closing segment stays monotone. A single
// node gives a rotation (or a point reflection when Reversing).
struct PLHomeomorphism {
  std::vector<double> xs;
  std::vector<double> ys;
  Orientation orientation = Orientation::Preserving;

  void validate() const;            // throws precondition_error when degenerate
  CirclePoint eval(CirclePoint x) const;
  PLHomeomorphism inverse() const;
};

// outer after inner, as maps of the circle.
PLHomeomorphism compose(const PLHomeomorphism& outer, const PLHomeomorphism& inner);

// Sign-pattern transfer test on a uniform grid: h must carry the sign of f
// at x to the sign of g at h(x) (flipped when h reverses orientation), and
// points inside either zero-tolerance band must land inside a loose band of
// the partner's zero set. Throws precondition_error for a degenerate h.
bool te_check(const CircleField& f, const CircleField& g, const PLHomeomorphism& h,
              int grid_resolution);

struct EquivalenceClass {
  enum class Kind { Nonvanishing, Hyperbolic };
  Kind kind = Kind::Nonvanishing;
  int pair_count = 0;         // m: zero pairs; 0 for Nonvanishing
  int fixed_point_count = 0;  // 2m or 0

  friend bool operator==(const EquivalenceClass&, const EquivalenceClass&) = default;
};

std::string equivalence_class_name(const EquivalenceClass& cls);

// Classification invariant of a structurally stable field. Throws
// precondition_error when the field is not structurally stable.
EquivalenceClass equivalence_class(const CircleField& field, const AnalysisConfig& cfg = {});

// Constructs a homeomorphism carrying f's phase portrait onto g's: pairs the
// zero cycles over every cyclic shift (orientation-preserving first, then
// reversing), keeps the first pairing whose classifications line up and whose
// sign transfer verifies on the analysis grid. Zero-free fields get the
// identity rotation (same sign) or a reflection (opposite signs). Throws
// undecided_error when either field is not structurally stable and
// not_equivalent_error when no pairing works.
PLHomeomorphism build_homeomorphism(const CircleField& f, const CircleField& g,
                                    const AnalysisConfig& cfg = {});

// Equivalence decision: class mismatch yields (false, nullopt); matching
// classes yield (true, witness). Throws undecided_error for non-stable input.
std::pair<bool, std::optional<PLHomeomorphism>> are_equivalent(
    const CircleField& f, const CircleField& g, const AnalysisConfig& cfg = {});

}  // namespace circlestab
