#pragma once

#include <string>
#include <vector>

#include "circlestab/atom.hpp"

namespace circlestab {

// A C^1 vector field on the circle: x' = f(x), f = sum of atoms.
struct CircleField {
  std::vector<Atom> atoms;
  std::string label;

  double eval(double x) const;
  double eval_deriv(double x) const;

  // Validates every atom; throws precondition_error on the first bad one.
  void validate() const;

  CircleField with_atom(const Atom& atom) const;  // copy plus one more atom
};

CircleField make_field(std::vector<Atom> atoms, std::string label = "");

}  // namespace circlestab
