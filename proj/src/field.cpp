#include "circlestab/field.hpp"

#include <utility>

namespace circlestab {

double CircleField::eval(double x) const {
  double total = 0.0;
  for (const Atom& atom : atoms) total += atom.value(x);
  return total;
}

double CircleField::eval_deriv(double x) const {
  double total = 0.0;
  for (const Atom& atom : atoms) total += atom.deriv(x);
  return total;
}

void CircleField::validate() const {
  for (const Atom& atom : atoms) atom.validate();
}

CircleField CircleField::with_atom(const Atom& atom) const {
  CircleField out = *this;
  out.atoms.push_back(atom);
  return out;
}

CircleField make_field(std::vector<Atom> atoms, std::string label) {
  CircleField field;
  field.atoms = std::move(atoms);
  field.label = std::move(label);
  field.validate();
  return field;
}

}  // namespace circlestab
