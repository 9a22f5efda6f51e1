#pragma once

#include <optional>
#include <string>

namespace circlestab {

// Building blocks for vector fields on the circle. Every atom is a period-1
// C^1 function of x; compactly supported shapes are summed over their integer
// translates, so evaluation is exact for any support width.
enum class AtomKind {
  Constant,     // amplitude
  FourierCos,   // amplitude * cos(2*pi*k*x)
  FourierSin,   // amplitude * sin(2*pi*k*x)
  BumpPsi,      // amplitude * exp(-R^2 / (R^2 - u^2)) on (a, b), u = x - (a+b)/2
  PlateauPhi,   // flat top e^{-1} over [a - d/2, b + d/2], bump rolloffs, support (a - d, b + d)
  OddTheta,     // -2 (x - c) * phi_c(x) / (d e); phi_c = PlateauPhi(c, c, d)
  OddThetaHat,  // -2 phihat(x) (x - m) / (e (b - a)), m = (a+b)/2
  AccumOsc,     // w(x) u^3 sin(1/u), u = x - c, w = BumpPsi on (c - r, c + r)
};

struct Atom {
  AtomKind kind = AtomKind::Constant;
  double amplitude = 1.0;
  double a = 0.0;       // BumpPsi / PlateauPhi / OddThetaHat: interval ends
  double b = 0.0;
  double delta = 0.0;   // PlateauPhi / OddTheta / OddThetaHat: rolloff half-width
  double center = 0.0;  // OddTheta / AccumOsc
  double radius = 0.0;  // AccumOsc
  int k = 1;            // Fourier harmonic index

  // Periodized value / derivative at x (x may be any real).
  double value(double x) const;
  double deriv(double x) const;

  // Throws precondition_error on malformed parameters (a >= b, delta <= 0, ...).
  void validate() const;

  // Closed-form upper bound on sup|atom| + sup|atom'|, available when the
  // support fits in one period (no translate overlap). Includes |amplitude|.
  std::optional<double> certified_c1_bound() const;

  // Width of the compact support, or nullopt for globally supported kinds.
  std::optional<double> support_width() const;
};

// Factories (amplitude last, defaulted to 1).
Atom make_constant(double amplitude);
Atom make_fourier_cos(int k, double amplitude = 1.0);
Atom make_fourier_sin(int k, double amplitude = 1.0);
Atom make_bump_psi(double a, double b, double amplitude = 1.0);
Atom make_plateau_phi(double a, double b, double delta, double amplitude = 1.0);
Atom make_odd_theta(double center, double delta, double amplitude = 1.0);
Atom make_odd_theta_hat(double a, double b, double delta, double amplitude = 1.0);
Atom make_accum_osc(double center, double radius, double amplitude = 1.0);

// Lowercase serialization names: "constant", "fourier_cos", ...
std::string atom_kind_name(AtomKind kind);
AtomKind atom_kind_from_name(const std::string& name);  // throws error on unknown name

}  // namespace circlestab
