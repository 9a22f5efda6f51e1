#pragma once

#include <string>
#include <vector>

#include "circlestab/field.hpp"
#include "circlestab/fixed_points.hpp"

namespace circlestab {

struct PortraitSample {
  double x = 0.0;
  double f = 0.0;
  double df = 0.0;
};

// Sampled graph of the field plus the marker/arrow data needed to draw it:
// samples hold resolution + 1 closed rows (the last repeats the first by
// periodicity), and arrows sit at the midpoints between consecutive zeros
// (at four fixed anchors when the field never vanishes).
struct PhasePortrait {
  std::string label;
  int resolution = 512;
  std::vector<PortraitSample> samples;
  FixedPointSet fixed_points;
  std::vector<double> arrow_anchors;
  std::vector<int> arrow_signs;  // sign of f at each anchor; zero anchors are dropped
};

// Samples the field and plans markers/arrows. Throws precondition_error when
// resolution < 64.
PhasePortrait render_portrait(const CircleField& field, const FixedPointSet& fixed_points,
                              int resolution = 512);

// "x,f,df" header plus one row per sample, 12 significant digits.
std::string portrait_csv(const PhasePortrait& portrait);

// Deterministic standalone SVG: the graph of f over [0, 1] with the zero
// axis, classification-glyph markers (filled = stable, hollow = unstable,
// half-filled = nonhyperbolic), direction arrows on the axis, and the same
// data wrapped onto an annotated circle. No timestamps; byte-identical for
// identical inputs.
std::string portrait_svg(const PhasePortrait& portrait);

}  // namespace circlestab
