#pragma once

#include <stdexcept>
#include <string>

namespace circlestab {

// Root of the library's exception taxonomy. Everything thrown on purpose
// derives from this; std::logic_error is reserved for impossible states.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad interval, wrong verdict, ...).
struct precondition_error : error {
  using error::error;
};

// The sampling grid cannot separate nearby zeros; retry with a finer grid.
struct resolution_error : error {
  using error::error;
};

// Both probe points next to a candidate zero are themselves below tolerance,
// so the one-sided signs cannot be read off. Widen the probe or treat the
// region as a plateau.
struct ambiguous_neighborhood_error : error {
  using error::error;
};

// A perturbation construction failed verification after all retries.
struct construction_error : error {
  using error::error;
};

// No admissible constant shift was found in the candidate budget.
struct density_error : construction_error {
  using construction_error::construction_error;
};

// The two fields are provably in different equivalence classes.
struct not_equivalent_error : error {
  using error::error;
};

// A query needed a definite stability verdict that is not available.
struct undecided_error : error {
  using error::error;
};

// Text input (field file or scenario file) failed to parse.
struct parse_error : error {
  parse_error(const std::string& what, int line_arg, int column_arg)
      : error(what), line(line_arg), column(column_arg) {}
  int line = 0;
  int column = 0;
};

}  // namespace circlestab
