#pragma once

#include <string>
#include <vector>

#include "circlestab/circle.hpp"
#include "circlestab/field.hpp"

namespace circlestab {

enum class Classification {
  HyperbolicStable,            // f'(x*) < -tol_deriv
  HyperbolicUnstable,          // f'(x*) > +tol_deriv
  NonhyperbolicNoSignChange,   // |f'| <= tol_deriv, same sign on both sides
  NonhyperbolicSignChange,     // |f'| <= tol_deriv, opposite signs
};

std::string classification_name(Classification c);

// Detection tolerances and grid resolution shared across the analysis stack.
struct AnalysisConfig {
  int grid_resolution = 4096;
  double tol_zero = 1e-9;
  double tol_deriv = 1e-6;
  double plateau_min_width = 1e-3;     // sub-tolerance runs longer than this become plateaus
  int accumulation_trigger = 16;       // zeros inside base radius that trigger a zoom scan
  double accumulation_base_radius = 0.1;
  int accumulation_zoom_points = 200000;
  int accumulation_cap = 64;           // nested counts above this raise suspicion
  double probe_delta = 0.0;            // 0 means 2.0 / grid_resolution
  int density_candidates = 1000;       // candidate constant shifts (0 skips the shift stage)
  unsigned long long seed = 0;         // consumed by randomized callers, not by detection

  void validate() const;               // grid_resolution >= 256, tolerances > 0
  double effective_probe() const;
};

struct FixedPoint {
  CirclePoint location = 0.0;
  double derivative = 0.0;             // f' at location
  Classification classification = Classification::HyperbolicStable;
  double residual = 0.0;               // |f| at the reported location
};

enum class PlateauSubcase { SameSign, OppositeSign };

// Maximal arc [a, b] with |f| <= tol_zero; b < a means the arc wraps through 0.
struct PlateauInterval {
  CirclePoint a = 0.0;
  CirclePoint b = 0.0;
  int left_sign = 0;                   // sign of f just left of a
  int right_sign = 0;                  // sign of f just right of b
  PlateauSubcase subcase = PlateauSubcase::SameSign;
};

struct FixedPointSet {
  std::vector<FixedPoint> points;      // strictly increasing locations in [0, 1)
  std::vector<PlateauInterval> plateaus;
  std::vector<CirclePoint> accumulation_suspected;
  bool whole_circle_zero = false;
  AnalysisConfig config;
};

// Locates all zeros: sign-change bisection, tangential-zero minimization,
// plateau runs, and an accumulation heuristic. Throws resolution_error when
// two refined zeros are separated but closer than one grid cell.
FixedPointSet find_fixed_points(const CircleField& field, const AnalysisConfig& cfg = {});

// Classifies one known zero. pre: |f(x*)| < tol_zero. Throws
// ambiguous_neighborhood_error when both probe samples are sub-tolerance.
Classification classify(const CircleField& field, CirclePoint x_star,
                        const AnalysisConfig& cfg = {});

// CSV table: location, derivative, classification, residual.
std::string fixed_point_set_csv(const FixedPointSet& set);

}  // namespace circlestab
