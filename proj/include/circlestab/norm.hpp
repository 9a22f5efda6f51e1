#pragma once

#include <optional>

#include "circlestab/field.hpp"

namespace circlestab {

// Estimate of the C^1 norm sup|f| + sup|f'|.
struct NormEstimate {
  double sup_f = 0.0;
  double sup_df = 0.0;
  double c1 = 0.0;  // always sup_f + sup_df
  int grid_resolution = 0;
  bool is_certified_upper_bound = false;
};

// Grid estimate of the C^1 norm: uniform samples on the circle plus
// golden-section refinement of every local-maximum bracket. A lower bound on
// the true norm in exact arithmetic, hence never certified.
// pre: grid_resolution >= 16.
NormEstimate c1_norm(const CircleField& field, int grid_resolution = 4096);

// Sum of per-atom closed-form bounds; nullopt when any atom's support is too
// wide for a closed form. A true upper bound on the C^1 norm.
std::optional<double> certified_c1_bound(const CircleField& field);

// Closed-form upper bound on the C^1 norm of the reference bump on (a, b):
// e^{-1} (1 + 12 e^{-1} / (b - a)). The sharp slope constant is
// 1.5968595036671989 / (b - a); 12 e^{-2} = 1.6240233988 leaves a 1.7% margin.
// pre: a < b.
double psi_norm_bound(double a, double b);

}  // namespace circlestab
