#pragma once

#include <string>

#include "circlestab/field.hpp"
#include "circlestab/fixed_points.hpp"

namespace circlestab {

// Which defect the perturbation removes (or, for Density, the global repair).
enum class CaseTag { Case1, Case2, Case3i, Case3ii, Case4, Density };

std::string case_tag_name(CaseTag tag);

struct Perturbation {
  CaseTag case_tag = CaseTag::Case1;
  Atom atom;                   // the added term, amplitude already scaled
  double sigma = 0.0;          // scale applied to the unit-amplitude shape
  double budget = 0.0;         // requested bound on the added C1 norm
  double achieved_norm = 0.0;  // measured C1 norm of (perturbed - field)
  CircleField perturbed;       // field + atom
};

// Largest scale sigma with ||sigma * atom|| certified below eps: starts from
// eps / (2 * bound) using the closed-form bound when the atom has one (the
// grid estimate inflated by 10% otherwise) and halves until a measurement on
// a 4x finer grid confirms the budget. Throws precondition_error for eps <= 0
// or an identically zero atom.
double select_sigma(const Atom& atom, double eps);

// Removes a touch point: x_star must classify as NonhyperbolicNoSignChange
// and be the only zero in (x_star - delta, x_star + delta). Adds a bump of
// the local sign supported on that ball; the result has no zeros there and
// is untouched outside. Throws construction_error when the verification scan
// still finds a zero.
Perturbation annihilate(const CircleField& field, CirclePoint x_star, double delta,
                        double eps, const AnalysisConfig& cfg = {});

// Splits a degenerate crossing: x_star must classify as
// NonhyperbolicSignChange and be the only zero in the delta-ball. Adds an odd
// ramp so the center keeps a zero with the opposite slope and two new
// hyperbolic zeros appear inside the ball (one per side).
Perturbation split(const CircleField& field, CirclePoint x_star, double delta,
                   double eps, const AnalysisConfig& cfg = {});

// Clears a zero arc [a, b] (b < a wraps). SameSign pushes the arc off zero
// with a flat-top hat matching the side sign (no zeros remain in
// [a - delta, b + delta]); OppositeSign inserts an odd windowed ramp leaving
// exactly three hyperbolic zeros. An arc spanning the whole circle requires
// an identically zero field and returns a positive constant shift.
Perturbation clear_plateau(const CircleField& field, CirclePoint a, CirclePoint b,
                           double delta, double eps, PlateauSubcase subcase,
                           const AnalysisConfig& cfg = {});

// Clears an accumulation of zeros at x_star: adds a bump on the half-radius
// ball, then certifies a sub-ball with no zeros at all and at most
// cfg.accumulation_cap zeros in (x_star - r, x_star + r).
Perturbation clear_accumulation(const CircleField& field, CirclePoint x_star,
                                double r, double eps, const AnalysisConfig& cfg = {});

// Makes the field structurally stable by a perturbation of norm < eps.
// Already-stable fields return unchanged. Stage one shifts by a constant
// |c| < eps/2 drawn from a bit-reversal sequence until every grid zero is
// regular; stage two repairs any surviving nonhyperbolic points with
// annihilate/split under the remaining budget. Throws density_error when no
// candidate constant works.
CircleField stabilize(const CircleField& field, double eps, const AnalysisConfig& cfg = {});

}  // namespace circlestab
