#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "circlestab/circle.hpp"
#include "circlestab/field.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random trigonometric polynomial of degree <= max_degree with a constant term.
inline circlestab::CircleField random_fourier_field(Rng& rng, int max_degree = 5,
                                                    double amp = 1.0) {
  std::vector<circlestab::Atom> atoms;
  atoms.push_back(circlestab::make_constant(uniform(rng, -amp, amp)));
  for (int k = 1; k <= max_degree; ++k) {
    atoms.push_back(circlestab::make_fourier_cos(k, uniform(rng, -amp, amp)));
    atoms.push_back(circlestab::make_fourier_sin(k, uniform(rng, -amp, amp)));
  }
  return circlestab::make_field(std::move(atoms));
}

// Brute-force zero counter: counts strict sign changes between consecutive
// samples. Valid as an oracle for fields whose zeros are all simple.
inline int brute_force_sign_changes(const circlestab::CircleField& field, int samples) {
  int count = 0;
  double prev = field.eval(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double v = field.eval(static_cast<double>(i) / samples);
    if (prev != 0.0 && v != 0.0 && ((prev < 0.0) != (v < 0.0))) ++count;
    if (v != 0.0) prev = v;
  }
  return count;
}

// Brute-force minimum of |f| over a uniform cyclic grid.
inline double brute_force_min_abs(const circlestab::CircleField& field, int samples) {
  double best = std::abs(field.eval(0.0));
  for (int i = 1; i < samples; ++i) {
    best = std::min(best, std::abs(field.eval(static_cast<double>(i) / samples)));
  }
  return best;
}

}  // namespace testutil
