#include "circlestab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"
#include "circlestab/norm.hpp"
#include "circlestab/stability.hpp"
#include "detail/opt.hpp"

namespace circlestab {

namespace {

double measured_norm(const Atom& atom, int grid) {
  return c1_norm(make_field({atom}), grid).c1;
}

template <typename Fn>
double bisect_crossing(Fn&& fn, double lo, double hi) {
  double flo = fn(lo);
  for (int i = 0; i < 100 && (hi - lo) > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Sign crossings of fn on [lo, hi] (lifted coordinates). Samples inside the
// tolerance band carry no sign, so a slow crawl through zero counts once.
template <typename Fn>
std::vector<double> find_crossings(Fn&& fn, double lo, double hi, int n, double tol) {
  std::vector<double> out;
  double last_x = lo;
  int last_sign = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / n;
    const double v = fn(x);
    const int s = v > tol ? 1 : (v < -tol ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) out.push_back(bisect_crossing(fn, last_x, x));
    last_sign = s;
    last_x = x;
  }
  return out;
}

template <typename Fn>
double dense_max_abs(Fn&& fn, double lo, double hi, int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / n;
    worst = std::max(worst, std::abs(fn(x)));
  }
  return worst;
}

double van_der_corput(unsigned long long n) {
  double r = 0.0;
  double base = 0.5;
  while (n != 0) {
    if (n & 1ULL) r += base;
    base *= 0.5;
    n >>= 1ULL;
  }
  return r;
}

// Shared preamble for the point cases: wrap the center, confirm the expected
// classification, and confirm the ball holds no second zero.
CirclePoint point_case_preamble(const CircleField& field, CirclePoint x_star, double delta,
                                double eps, Classification expected,
                                const AnalysisConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0) || !(2.0 * delta <= 1.0)) {
    throw precondition_error("perturbation ball must satisfy 0 < 2*delta <= 1");
  }
  if (!(eps > 0.0)) throw precondition_error("perturbation budget must be positive");
  const CirclePoint x = wrap_unit(x_star);
  const Classification got = classify(field, x, cfg);
  if (got != expected) {
    throw precondition_error("zero at " + format_number(x) + " classifies as " +
                             classification_name(got) + ", not " +
                             classification_name(expected));
  }
  const auto f = [&](double t) { return field.eval(t); };
  const double core = delta / 50.0;
  const double left = detail::refined_min_abs(f, x - delta, x - core, 4000);
  const double right = detail::refined_min_abs(f, x + core, x + delta, 4000);
  if (left <= cfg.tol_zero || right <= cfg.tol_zero) {
    throw precondition_error("the ball around " + format_number(x) +
                             " holds another zero");
  }
  return x;
}

Perturbation finish(CaseTag tag, Atom scaled, double sigma, double eps, CircleField g,
                    const AnalysisConfig& cfg) {
  Perturbation out;
  out.case_tag = tag;
  out.atom = scaled;
  out.sigma = sigma;
  out.budget = eps;
  out.achieved_norm = measured_norm(scaled, 4 * cfg.grid_resolution);
  if (!(out.achieved_norm < eps)) {
    throw construction_error("perturbation norm " + format_number(out.achieved_norm) +
                             " exceeds the budget " + format_number(eps));
  }
  out.perturbed = std::move(g);
  return out;
}

}  // namespace

std::string case_tag_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::Case1: return "Case1";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Case3i: return "Case3i";
    case CaseTag::Case3ii: return "Case3ii";
    case CaseTag::Case4: return "Case4";
    case CaseTag::Density: return "Density";
  }
  return "Case1";
}

double select_sigma(const Atom& atom, double eps) {
  if (!(eps > 0.0)) throw precondition_error("select_sigma requires eps > 0");
  atom.validate();
  double bound = 0.0;
  if (const auto certified = atom.certified_c1_bound(); certified.has_value()) {
    bound = *certified;
  } else {
    bound = 1.1 * measured_norm(atom, 4096);
  }
  if (!(bound > 0.0)) {
    throw precondition_error("select_sigma needs an atom with positive norm");
  }
  double sigma = eps / (2.0 * bound);
  for (int i = 0; i < 60; ++i) {
    Atom scaled = atom;
    scaled.amplitude = atom.amplitude * sigma;
    if (measured_norm(scaled, 4 * 4096) < eps) return sigma;
    sigma /= 2.0;
  }
  throw construction_error("could not certify a positive scale under the budget");
}

Perturbation annihilate(const CircleField& field, CirclePoint x_star, double delta,
                        double eps, const AnalysisConfig& cfg) {
  const CirclePoint x = point_case_preamble(field, x_star, delta, eps,
                                            Classification::NonhyperbolicNoSignChange, cfg);
  const double side = field.eval(x + delta / 2.0);
  const double sign = side > 0.0 ? 1.0 : -1.0;
  const Atom shape = make_bump_psi(x - delta, x + delta, sign);
  const double sigma = select_sigma(shape, eps);
  Atom scaled = shape;
  scaled.amplitude = sign * sigma;
  CircleField g = field.with_atom(scaled);
  const auto gf = [&](double t) { return g.eval(t); };
  const double ball_min = detail::refined_min_abs(gf, x - delta, x + delta, 20000);
  if (!(ball_min > cfg.tol_zero)) {
    throw construction_error("a zero survives annihilation; residual minimum " +
                             format_number(ball_min));
  }
  return finish(CaseTag::Case1, std::move(scaled), sigma, eps, std::move(g), cfg);
}

Perturbation split(const CircleField& field, CirclePoint x_star, double delta, double eps,
                   const AnalysisConfig& cfg) {
  const CirclePoint x = point_case_preamble(field, x_star, delta, eps,
                                            Classification::NonhyperbolicSignChange, cfg);
  const bool rising = field.eval(x + delta / 2.0) > 0.0;
  const double orientation = rising ? 1.0 : -1.0;
  const Atom shape = make_odd_theta(x, delta, orientation);
  const double sigma = select_sigma(shape, eps);
  Atom scaled = shape;
  scaled.amplitude = orientation * sigma;
  CircleField g = field.with_atom(scaled);
  const auto gf = [&](double t) { return g.eval(t); };

  if (std::abs(g.eval(x)) > cfg.tol_zero) {
    throw construction_error("the center zero moved during the split");
  }
  const auto zeros = find_crossings(gf, x - delta, x + delta, 20000, cfg.tol_zero);
  if (zeros.size() != 3) {
    throw construction_error("split produced " + std::to_string(zeros.size()) +
                             " crossings instead of 3; try a smaller ball");
  }
  if (std::abs(zeros[1] - x) > delta / 100.0) {
    throw construction_error("split moved the center crossing; try a smaller ball");
  }
  const double inner = g.eval_deriv(zeros[1]);
  const double outer_a = g.eval_deriv(zeros[0]);
  const double outer_b = g.eval_deriv(zeros[2]);
  if (!(orientation * inner < -cfg.tol_deriv) || !(orientation * outer_a > cfg.tol_deriv) ||
      !(orientation * outer_b > cfg.tol_deriv)) {
    throw construction_error("split zeros are not cleanly hyperbolic; try a smaller ball");
  }
  return finish(CaseTag::Case2, std::move(scaled), sigma, eps, std::move(g), cfg);
}

Perturbation clear_plateau(const CircleField& field, CirclePoint a, CirclePoint b,
                           double delta, double eps, PlateauSubcase subcase,
                           const AnalysisConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0)) throw precondition_error("clear_plateau requires delta > 0");
  if (!(eps > 0.0)) throw precondition_error("perturbation budget must be positive");
  const auto f = [&](double t) { return field.eval(t); };

  // Raw coordinates decide whole-circle intent before wrapping collapses
  // b = a + 1 onto b = a.
  if (b - a >= 1.0 - 1e-6) {
    // The arc is the whole circle: only an identically zero field can claim it.
    const double top = dense_max_abs(f, 0.0, 1.0, 20000);
    if (top > cfg.tol_zero) {
      throw precondition_error("whole-circle arc claimed but the field is not identically zero");
    }
    const double sigma = eps / 2.0;
    Atom scaled = make_constant(sigma);
    CircleField g = field.with_atom(scaled);
    const auto gf = [&](double t) { return g.eval(t); };
    if (!(detail::refined_min_abs(gf, 0.0, 1.0, 20000) > cfg.tol_zero)) {
      throw construction_error("constant shift failed to clear the circle");
    }
    return finish(CaseTag::Case3i, std::move(scaled), sigma, eps, std::move(g), cfg);
  }

  const double a0 = wrap_unit(a);
  double b0 = wrap_unit(b);
  if (b0 < a0) b0 += 1.0;
  const double span = b0 - a0;

  // Refined arc endpoints sit exactly on the tolerance crossing, so allow
  // that much play when re-checking that the arc really is a zero band.
  if (dense_max_abs(f, a0, b0, 20000) > 2.0 * cfg.tol_zero) {
    throw precondition_error("[a, b] is not inside the zero tolerance band");
  }
  const double margin = delta / 100.0;
  const double left_min = detail::refined_min_abs(f, a0 - delta, a0 - margin, 4000);
  const double right_min = detail::refined_min_abs(f, b0 + margin, b0 + delta, 4000);
  if (left_min <= cfg.tol_zero || right_min <= cfg.tol_zero) {
    throw precondition_error("the arc is not isolated from other zeros");
  }
  const double s_left = f(a0 - delta / 2.0) > 0.0 ? 1.0 : -1.0;
  const double s_right = f(b0 + delta / 2.0) > 0.0 ? 1.0 : -1.0;

  if (subcase == PlateauSubcase::SameSign) {
    if (s_left != s_right) {
      throw precondition_error("SameSign requested but the side signs differ");
    }
    const Atom shape = make_plateau_phi(a0, b0, delta, s_left);
    const double sigma = select_sigma(shape, eps);
    Atom scaled = shape;
    scaled.amplitude = s_left * sigma;
    CircleField g = field.with_atom(scaled);
    const auto gf = [&](double t) { return g.eval(t); };
    const double worst = detail::refined_min_abs(gf, a0 - delta, b0 + delta, 40000);
    if (!(worst > cfg.tol_zero)) {
      throw construction_error("a zero survives on the cleared arc; residual minimum " +
                               format_number(worst));
    }
    return finish(CaseTag::Case3i, std::move(scaled), sigma, eps, std::move(g), cfg);
  }

  if (s_left != -s_right) {
    throw precondition_error("OppositeSign requested but the side signs agree");
  }
  const Atom shape = make_odd_theta_hat(a0, b0, delta, s_right);
  const double sigma = select_sigma(shape, eps);
  Atom scaled = shape;
  scaled.amplitude = s_right * sigma;
  CircleField g = field.with_atom(scaled);
  const auto gf = [&](double t) { return g.eval(t); };
  const auto zeros = find_crossings(gf, a0 - delta, b0 + delta, 40000, cfg.tol_zero);
  if (zeros.size() != 3) {
    throw construction_error("arc replacement produced " + std::to_string(zeros.size()) +
                             " crossings instead of 3");
  }
  const double mid = 0.5 * (a0 + b0);
  if (std::abs(zeros[1] - mid) > std::max(delta, span / 10.0)) {
    throw construction_error("the central crossing strayed from the arc midpoint");
  }
  const double inner = g.eval_deriv(zeros[1]);
  const double outer_a = g.eval_deriv(zeros[0]);
  const double outer_b = g.eval_deriv(zeros[2]);
  if (!(s_right * inner < -cfg.tol_deriv) || !(s_right * outer_a > cfg.tol_deriv) ||
      !(s_right * outer_b > cfg.tol_deriv)) {
    throw construction_error("arc replacement zeros are not cleanly hyperbolic");
  }
  return finish(CaseTag::Case3ii, std::move(scaled), sigma, eps, std::move(g), cfg);
}

Perturbation clear_accumulation(const CircleField& field, CirclePoint x_star, double r,
                                double eps, const AnalysisConfig& cfg) {
  cfg.validate();
  if (!(r > 0.0) || !(r < 0.5)) throw precondition_error("clear_accumulation requires 0 < r < 1/2");
  if (!(eps > 0.0)) throw precondition_error("perturbation budget must be positive");
  const CirclePoint x = wrap_unit(x_star);
  const auto f = [&](double t) { return field.eval(t); };

  bool evidenced = false;
  for (const auto& atom : field.atoms) {
    if (atom.kind == AtomKind::AccumOsc && atom.amplitude != 0.0 &&
        cyclic_distance(wrap_unit(atom.center), x) <= r) {
      evidenced = true;
      break;
    }
  }
  if (!evidenced) {
    const auto zeros = find_crossings(f, x - r, x + r, cfg.accumulation_zoom_points,
                                      cfg.tol_zero);
    evidenced = static_cast<int>(zeros.size()) >= cfg.accumulation_trigger;
  }
  if (!evidenced) {
    throw precondition_error("no accumulation evidence near " + format_number(x));
  }

  const Atom shape = make_bump_psi(x - r / 2.0, x + r / 2.0, 1.0);
  const double sigma = select_sigma(shape, eps);
  Atom scaled = shape;
  scaled.amplitude = sigma;
  CircleField g = field.with_atom(scaled);
  const auto gf = [&](double t) { return g.eval(t); };

  double cleared = -1.0;
  for (double s = r / 4.0; s > r / 4096.0; s /= 2.0) {
    if (detail::refined_min_abs(gf, x - s, x + s, 20000) > cfg.tol_zero) {
      cleared = s;
      break;
    }
  }
  if (cleared < 0.0) {
    throw construction_error("no zero-free sub-ball appeared; try a larger budget or smaller radius");
  }
  const auto remaining = find_crossings(gf, x - r, x + r, cfg.accumulation_zoom_points,
                                        cfg.tol_zero);
  if (static_cast<int>(remaining.size()) > cfg.accumulation_cap) {
    throw construction_error(std::to_string(remaining.size()) +
                             " zeros remain in the working interval");
  }
  return finish(CaseTag::Case4, std::move(scaled), sigma, eps, std::move(g), cfg);
}

namespace {

// Stage-one acceptance: every zero the grid can see has a clearly nonzero
// derivative at its refined location.
bool grid_regular(const CircleField& g, const AnalysisConfig& cfg) {
  const int n = cfg.grid_resolution;
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = g.eval(static_cast<double>(i) / n);
  }
  const auto gf = [&](double t) { return g.eval(t); };
  for (int i = 0; i < n; ++i) {
    const double v0 = vals[static_cast<std::size_t>(i)];
    const double v1 = vals[static_cast<std::size_t>((i + 1) % n)];
    const double x0 = static_cast<double>(i) / n;
    const double x1 = static_cast<double>(i + 1) / n;
    if (std::abs(v0) <= cfg.tol_zero) {
      if (std::abs(g.eval_deriv(x0)) <= cfg.tol_deriv) return false;
      continue;
    }
    if ((v0 < 0.0) != (v1 < 0.0) && std::abs(v1) > cfg.tol_zero) {
      const double z = bisect_crossing(gf, x0, x1);
      if (std::abs(g.eval_deriv(z)) <= cfg.tol_deriv) return false;
    }
  }
  return true;
}

}  // namespace

CircleField stabilize(const CircleField& field, double eps, const AnalysisConfig& cfg) {
  cfg.validate();
  if (!(eps > 0.0)) throw precondition_error("stabilize requires eps > 0");

  try {
    if (stability_verdict(field, cfg).verdict == StabilityVerdict::StructurallyStable) {
      return field;
    }
  } catch (const error&) {
    // The detector could not resolve the field as-is; repair below.
  }

  CircleField working = field;
  if (cfg.density_candidates > 0) {
    bool found = false;
    for (int j = 1; j <= cfg.density_candidates && !found; ++j) {
      const double c = (van_der_corput(static_cast<unsigned long long>(j)) - 0.5) * eps;
      if (std::abs(c) < eps * 1e-12) continue;
      CircleField candidate = field.with_atom(make_constant(c));
      if (grid_regular(candidate, cfg)) {
        working = std::move(candidate);
        found = true;
      }
    }
    if (!found) {
      throw density_error("no regular constant shift among " +
                          std::to_string(cfg.density_candidates) + " candidates");
    }
  }

  // Stage two: point repairs under the second half of the budget.
  double remaining = eps / 2.0;
  for (int round = 0; round < 16; ++round) {
    const StabilityReport report = stability_verdict(working, cfg);
    if (report.verdict == StabilityVerdict::StructurallyStable) break;
    if (report.verdict == StabilityVerdict::Undecided ||
        !report.fixed_points.plateaus.empty() || report.fixed_points.whole_circle_zero) {
      throw construction_error("stabilization left a defect no point repair can clear");
    }
    std::vector<FixedPoint> bad;
    for (const auto& fp : report.fixed_points.points) {
      if (fp.classification == Classification::NonhyperbolicNoSignChange ||
          fp.classification == Classification::NonhyperbolicSignChange) {
        bad.push_back(fp);
      }
    }
    if (bad.empty()) {
      throw construction_error("unstable verdict without a repairable point");
    }
    const FixedPoint target = bad.front();
    double gap = 1.0;
    for (const auto& fp : report.fixed_points.points) {
      if (fp.location == target.location) continue;
      gap = std::min(gap, cyclic_distance(fp.location, target.location));
    }
    const double delta = std::min(0.05, gap / 2.0);
    const double budget = remaining / static_cast<double>(bad.size());
    const Perturbation repair =
        target.classification == Classification::NonhyperbolicNoSignChange
            ? annihilate(working, target.location, delta, budget, cfg)
            : split(working, target.location, delta, budget, cfg);
    remaining -= repair.achieved_norm;
    working = repair.perturbed;
  }

  const StabilityReport final_report = stability_verdict(working, cfg);
  if (final_report.verdict != StabilityVerdict::StructurallyStable) {
    throw construction_error("stabilization did not reach a stable field");
  }
  if (working.atoms.size() > field.atoms.size()) {
    const std::vector<Atom> added(working.atoms.begin() +
                                      static_cast<std::ptrdiff_t>(field.atoms.size()),
                                  working.atoms.end());
    const double distance = c1_norm(make_field(added), 4 * cfg.grid_resolution).c1;
    if (!(distance < eps)) {
      throw construction_error("stabilization spent " + format_number(distance) +
                               ", more than the budget " + format_number(eps));
    }
  }
  return working;
}

}  // namespace circlestab
