#include "circlestab/atom.hpp"

#include <cmath>
#include <limits>

#include "circlestab/circle.hpp"
#include "circlestab/errors.hpp"

namespace circlestab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvE = 0.36787944117144233;  // e^{-1}

// exp underflows to 0 well before 1/s^2 overflows; cutting here keeps the
// derivative formula free of 0 * inf.
constexpr double kExpCut = 700.0;

// Reference bump on (a, b): exp(-R^2 / (R^2 - u^2)) for |u| < R, else 0.
double bump_value(double t, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double u = t - c;
  if (!(std::abs(u) < r)) return 0.0;
  const double s = r * r - u * u;
  const double e = r * r / s;
  if (e > kExpCut) return 0.0;
  return std::exp(-e);
}

double bump_deriv(double t, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double u = t - c;
  if (!(std::abs(u) < r)) return 0.0;
  const double s = r * r - u * u;
  const double e = r * r / s;
  if (e > kExpCut) return 0.0;
  return std::exp(-e) * (-2.0 * u * r * r / (s * s));
}

// Flat top e^{-1} over [a - d/2, b + d/2]; rolloffs are halves of radius-d/2
// bumps on (a - d, a) and (b, b + d). C^1 everywhere: the rolloff derivative
// vanishes at its own peak, which is where it meets the flat top.
double plateau_value(double t, double a, double b, double d) {
  if (t <= a - d || t >= b + d) return 0.0;
  if (t >= a - 0.5 * d && t <= b + 0.5 * d) return kInvE;
  if (t < a - 0.5 * d) return bump_value(t, a - d, a);
  return bump_value(t, b, b + d);
}

double plateau_deriv(double t, double a, double b, double d) {
  if (t <= a - d || t >= b + d) return 0.0;
  if (t >= a - 0.5 * d && t <= b + 0.5 * d) return 0.0;
  if (t < a - 0.5 * d) return bump_deriv(t, a - d, a);
  return bump_deriv(t, b, b + d);
}

double odd_theta_value(double t, double c, double d) {
  const double p = plateau_value(t, c, c, d);
  if (p == 0.0) return 0.0;
  return -2.0 * (t - c) * p / (d * std::exp(1.0));
}

double odd_theta_deriv(double t, double c, double d) {
  const double p = plateau_value(t, c, c, d);
  if (p == 0.0 && plateau_deriv(t, c, c, d) == 0.0) return 0.0;
  return -2.0 * (p + (t - c) * plateau_deriv(t, c, c, d)) / (d * std::exp(1.0));
}

double odd_theta_hat_value(double t, double a, double b, double d) {
  const double p = plateau_value(t, a, b, d);
  if (p == 0.0) return 0.0;
  const double m = 0.5 * (a + b);
  return -2.0 * p * (t - m) / (std::exp(1.0) * (b - a));
}

double odd_theta_hat_deriv(double t, double a, double b, double d) {
  const double p = plateau_value(t, a, b, d);
  const double dp = plateau_deriv(t, a, b, d);
  if (p == 0.0 && dp == 0.0) return 0.0;
  const double m = 0.5 * (a + b);
  return -2.0 * (p + (t - m) * dp) / (std::exp(1.0) * (b - a));
}

double accum_value(double t, double c, double r) {
  const double w = bump_value(t, c - r, c + r);
  if (w == 0.0) return 0.0;
  const double u = t - c;
  if (u == 0.0) return 0.0;
  return w * u * u * u * std::sin(1.0 / u);
}

double accum_deriv(double t, double c, double r) {
  const double w = bump_value(t, c - r, c + r);
  const double dw = bump_deriv(t, c - r, c + r);
  if (w == 0.0 && dw == 0.0) return 0.0;
  const double u = t - c;
  if (u == 0.0) return 0.0;
  const double s = std::sin(1.0 / u);
  const double q = std::cos(1.0 / u);
  return dw * u * u * u * s + w * (3.0 * u * u * s - u * q);
}

struct Support {
  double lo;
  double hi;
};

Support base_support(const Atom& atom) {
  switch (atom.kind) {
    case AtomKind::BumpPsi:
      return {atom.a, atom.b};
    case AtomKind::PlateauPhi:
      return {atom.a - atom.delta, atom.b + atom.delta};
    case AtomKind::OddTheta:
      return {atom.center - atom.delta, atom.center + atom.delta};
    case AtomKind::OddThetaHat:
      return {atom.a - atom.delta, atom.b + atom.delta};
    case AtomKind::AccumOsc:
      return {atom.center - atom.radius, atom.center + atom.radius};
    default:
      return {0.0, 0.0};
  }
}

double base_value(const Atom& atom, double t) {
  switch (atom.kind) {
    case AtomKind::BumpPsi:
      return bump_value(t, atom.a, atom.b);
    case AtomKind::PlateauPhi:
      return plateau_value(t, atom.a, atom.b, atom.delta);
    case AtomKind::OddTheta:
      return odd_theta_value(t, atom.center, atom.delta);
    case AtomKind::OddThetaHat:
      return odd_theta_hat_value(t, atom.a, atom.b, atom.delta);
    case AtomKind::AccumOsc:
      return accum_value(t, atom.center, atom.radius);
    default:
      return 0.0;
  }
}

double base_deriv(const Atom& atom, double t) {
  switch (atom.kind) {
    case AtomKind::BumpPsi:
      return bump_deriv(t, atom.a, atom.b);
    case AtomKind::PlateauPhi:
      return plateau_deriv(t, atom.a, atom.b, atom.delta);
    case AtomKind::OddTheta:
      return odd_theta_deriv(t, atom.center, atom.delta);
    case AtomKind::OddThetaHat:
      return odd_theta_hat_deriv(t, atom.a, atom.b, atom.delta);
    case AtomKind::AccumOsc:
      return accum_deriv(t, atom.center, atom.radius);
    default:
      return 0.0;
  }
}

template <typename BaseFn>
double periodized(const Atom& atom, double x, BaseFn&& base) {
  const Support sup = base_support(atom);
  const double t = wrap_unit(x);
  const int n_lo = static_cast<int>(std::floor(sup.lo - t));
  const int n_hi = static_cast<int>(std::ceil(sup.hi - t));
  double total = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) total += base(atom, t + n);
  return total;
}

void require(bool ok, const char* msg) {
  if (!ok) throw precondition_error(msg);
}

bool all_finite(const Atom& atom) {
  return std::isfinite(atom.amplitude) && std::isfinite(atom.a) && std::isfinite(atom.b) &&
         std::isfinite(atom.delta) && std::isfinite(atom.center) && std::isfinite(atom.radius);
}

}  // namespace

double Atom::value(double x) const {
  switch (kind) {
    case AtomKind::Constant:
      return amplitude;
    case AtomKind::FourierCos:
      return amplitude * std::cos(2.0 * kPi * k * wrap_unit(x));
    case AtomKind::FourierSin:
      return amplitude * std::sin(2.0 * kPi * k * wrap_unit(x));
    default:
      return amplitude * periodized(*this, x, [](const Atom& a, double t) { return base_value(a, t); });
  }
}

double Atom::deriv(double x) const {
  switch (kind) {
    case AtomKind::Constant:
      return 0.0;
    case AtomKind::FourierCos:
      return amplitude * -2.0 * kPi * k * std::sin(2.0 * kPi * k * wrap_unit(x));
    case AtomKind::FourierSin:
      return amplitude * 2.0 * kPi * k * std::cos(2.0 * kPi * k * wrap_unit(x));
    default:
      return amplitude * periodized(*this, x, [](const Atom& a, double t) { return base_deriv(a, t); });
  }
}

void Atom::validate() const {
  require(all_finite(*this), "atom parameters must be finite");
  switch (kind) {
    case AtomKind::Constant:
      break;
    case AtomKind::FourierCos:
    case AtomKind::FourierSin:
      require(k >= 1, "fourier atom needs harmonic index k >= 1");
      break;
    case AtomKind::BumpPsi:
      require(a < b, "bump_psi needs a < b");
      break;
    case AtomKind::PlateauPhi:
      require(a <= b, "plateau_phi needs a <= b");
      require(delta > 0.0, "plateau_phi needs delta > 0");
      break;
    case AtomKind::OddTheta:
      require(delta > 0.0, "odd_theta needs delta > 0");
      break;
    case AtomKind::OddThetaHat:
      require(a < b, "odd_theta_hat needs a < b");
      require(delta > 0.0, "odd_theta_hat needs delta > 0");
      break;
    case AtomKind::AccumOsc:
      require(radius > 0.0, "accum_osc needs radius > 0");
      break;
  }
}

std::optional<double> Atom::certified_c1_bound() const {
  // The rolloff slope of the reference bump on (a, b) peaks at
  // 1.5968595036671989 / (b - a); 12 e^{-2} / (b - a) = 1.6240233988 / (b - a)
  // is the clean certified envelope used throughout.
  const double inv_e = kInvE;
  const double twelve_e2 = 12.0 * inv_e * inv_e;
  const double amp = std::abs(amplitude);
  switch (kind) {
    case AtomKind::Constant:
      return amp;
    case AtomKind::FourierCos:
    case AtomKind::FourierSin:
      return amp * (1.0 + 2.0 * kPi * k);
    case AtomKind::BumpPsi: {
      const double w = b - a;
      if (w > 1.0) return std::nullopt;  // translates overlap; no closed form
      return amp * (inv_e + twelve_e2 / w);
    }
    case AtomKind::PlateauPhi: {
      if (b - a + 2.0 * delta > 1.0) return std::nullopt;
      return amp * (inv_e + twelve_e2 / delta);
    }
    case AtomKind::OddTheta: {
      if (2.0 * delta > 1.0) return std::nullopt;
      const double sup_v = 2.0 * inv_e * inv_e;
      const double sup_d = (2.0 / (delta * std::exp(1.0))) * (inv_e + twelve_e2);
      return amp * (sup_v + sup_d);
    }
    case AtomKind::OddThetaHat: {
      const double w = b - a;
      if (w + 2.0 * delta > 1.0) return std::nullopt;
      const double m = 0.5 * w + delta;  // max |t - midpoint| on the support
      const double sup_v = 2.0 * inv_e * m / (std::exp(1.0) * w);
      const double sup_d = (2.0 / (std::exp(1.0) * w)) * (inv_e + m * twelve_e2 / delta);
      return amp * (sup_v + sup_d);
    }
    case AtomKind::AccumOsc: {
      const double r = radius;
      if (2.0 * r > 1.0) return std::nullopt;
      const double sup_v = inv_e * r * r * r;
      const double sup_w_d = twelve_e2 / (2.0 * r);  // envelope window slope
      const double sup_d = sup_w_d * r * r * r + inv_e * (3.0 * r * r + r);
      return amp * (sup_v + sup_d);
    }
  }
  return std::nullopt;
}

std::optional<double> Atom::support_width() const {
  switch (kind) {
    case AtomKind::BumpPsi:
      return b - a;
    case AtomKind::PlateauPhi:
    case AtomKind::OddThetaHat:
      return b - a + 2.0 * delta;
    case AtomKind::OddTheta:
      return 2.0 * delta;
    case AtomKind::AccumOsc:
      return 2.0 * radius;
    default:
      return std::nullopt;
  }
}

Atom make_constant(double amplitude) {
  Atom atom;
  atom.kind = AtomKind::Constant;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_fourier_cos(int k, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::FourierCos;
  atom.k = k;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_fourier_sin(int k, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::FourierSin;
  atom.k = k;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_bump_psi(double a, double b, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::BumpPsi;
  atom.a = a;
  atom.b = b;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_plateau_phi(double a, double b, double delta, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::PlateauPhi;
  atom.a = a;
  atom.b = b;
  atom.delta = delta;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_odd_theta(double center, double delta, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::OddTheta;
  atom.center = center;
  atom.delta = delta;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_odd_theta_hat(double a, double b, double delta, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::OddThetaHat;
  atom.a = a;
  atom.b = b;
  atom.delta = delta;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

Atom make_accum_osc(double center, double radius, double amplitude) {
  Atom atom;
  atom.kind = AtomKind::AccumOsc;
  atom.center = center;
  atom.radius = radius;
  atom.amplitude = amplitude;
  atom.validate();
  return atom;
}

std::string atom_kind_name(AtomKind kind) {
  switch (kind) {
    case AtomKind::Constant:
      return "constant";
    case AtomKind::FourierCos:
      return "fourier_cos";
    case AtomKind::FourierSin:
      return "fourier_sin";
    case AtomKind::BumpPsi:
      return "bump_psi";
    case AtomKind::PlateauPhi:
      return "plateau_phi";
    case AtomKind::OddTheta:
      return "odd_theta";
    case AtomKind::OddThetaHat:
      return "odd_theta_hat";
    case AtomKind::AccumOsc:
      return "accum_osc";
  }
  throw std::logic_error("unreachable atom kind");
}

AtomKind atom_kind_from_name(const std::string& name) {
  if (name == "constant") return AtomKind::Constant;
  if (name == "fourier_cos") return AtomKind::FourierCos;
  if (name == "fourier_sin") return AtomKind::FourierSin;
  if (name == "bump_psi") return AtomKind::BumpPsi;
  if (name == "plateau_phi") return AtomKind::PlateauPhi;
  if (name == "odd_theta") return AtomKind::OddTheta;
  if (name == "odd_theta_hat") return AtomKind::OddThetaHat;
  if (name == "accum_osc") return AtomKind::AccumOsc;
  throw error("unknown atom kind: " + name);
}

}  // namespace circlestab
