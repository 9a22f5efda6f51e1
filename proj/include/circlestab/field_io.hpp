#pragma once

#include <string>

#include "circlestab/field.hpp"

namespace circlestab {

// Line-oriented text format, one atom per line:
//   <kind> key=value key=value ...
// '#' starts a comment; blank lines are ignored. Numeric values are written
// with 12 significant digits, so serialize -> parse -> serialize is the
// identity on strings.
//
// Parameter spellings per kind:
//   constant       amp
//   fourier_cos    k amp
//   fourier_sin    k amp
//   bump_psi       a b amp
//   plateau_phi    a b delta amp
//   odd_theta      center delta amp
//   odd_theta_hat  a b delta amp
//   accum_osc      center radius amp
// amp may be omitted and defaults to 1.

// Parses one atom line (no comment, non-blank). line_no is used in errors.
Atom parse_atom_line(const std::string& line, int line_no = 1);

// Parses a whole field file body. Throws parse_error with 1-based line/column.
CircleField parse_field_text(const std::string& text, const std::string& label = "");

// Reads a field from disk; the label defaults to the file stem.
CircleField load_field_file(const std::string& path);

std::string serialize_atom(const Atom& atom);

// Atoms one per line, trailing newline. Does not include comments.
std::string serialize_field(const CircleField& field);

// Formats a double with 12 significant digits (the format used everywhere).
std::string format_number(double v);

}  // namespace circlestab
