#include "circlestab/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "circlestab/circle.hpp"
#include "circlestab/errors.hpp"
#include "circlestab/stability.hpp"

namespace circlestab {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double degree_of(Orientation o) { return o == Orientation::Preserving ? 1.0 : -1.0; }

// Lifts wrapped values to a strictly monotone sequence by shifting whole
// turns; the first value anchors the lift.
void lift_monotone(std::vector<double>& vs, Orientation o) {
  for (std::size_t i = 1; i < vs.size(); ++i) {
    if (o == Orientation::Preserving) {
      while (vs[i] <= vs[i - 1]) vs[i] += 1.0;
    } else {
      while (vs[i] >= vs[i - 1]) vs[i] -= 1.0;
    }
  }
}

}  // namespace

void PLHomeomorphism::validate() const {
  if (xs.empty() || xs.size() != ys.size())
    throw precondition_error("homeomorphism needs matching, non-empty node lists");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw precondition_error("homeomorphism nodes must be finite");
    if (xs[i] < 0.0 || xs[i] >= 1.0)
      throw precondition_error("homeomorphism source nodes must lie in [0, 1)");
    if (i > 0 && xs[i] <= xs[i - 1])
      throw precondition_error("homeomorphism source nodes must strictly increase");
  }
  if (xs.size() < 2) return;
  const bool up = orientation == Orientation::Preserving;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (up ? ys[i] <= ys[i - 1] : ys[i] >= ys[i - 1])
      throw precondition_error("homeomorphism image nodes must be strictly monotone");
  }
  if (std::abs(ys.back() - ys.front()) >= 1.0)
    throw precondition_error("homeomorphism image nodes span a full turn or more");
}

CirclePoint PLHomeomorphism::eval(CirclePoint x) const {
  const int n = static_cast<int>(xs.size());
  const double deg = degree_of(orientation);
  const double t = xs[0] + wrap_unit(x - xs[0]);  // t in [xs[0], xs[0] + 1)
  const int i =
      static_cast<int>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) - 1;
  double x0, x1, y0, y1;
  if (i >= n - 1) {  // closing segment wraps back to the first node
    x0 = xs[n - 1];
    y0 = ys[n - 1];
    x1 = xs[0] + 1.0;
    y1 = ys[0] + deg;
  } else {
    x0 = xs[i];
    y0 = ys[i];
    x1 = xs[i + 1];
    y1 = ys[i + 1];
  }
  const double u = (t - x0) / (x1 - x0);
  return wrap_unit(y0 + u * (y1 - y0));
}

PLHomeomorphism PLHomeomorphism::inverse() const {
  validate();
  std::vector<std::pair<double, double>> nodes(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) nodes[i] = {wrap_unit(ys[i]), xs[i]};
  std::sort(nodes.begin(), nodes.end());
  PLHomeomorphism out;
  out.orientation = orientation;
  out.xs.reserve(nodes.size());
  out.ys.reserve(nodes.size());
  for (const auto& [y, x] : nodes) {
    out.xs.push_back(y);
    out.ys.push_back(x);
  }
  lift_monotone(out.ys, out.orientation);
  out.validate();
  return out;
}

PLHomeomorphism compose(const PLHomeomorphism& outer, const PLHomeomorphism& inner) {
  outer.validate();
  inner.validate();
  const PLHomeomorphism inner_inv = inner.inverse();
  std::vector<double> bs;
  bs.reserve(inner.xs.size() + outer.xs.size());
  for (double x : inner.xs) bs.push_back(x);
  for (double u : outer.xs) bs.push_back(inner_inv.eval(u));
  std::sort(bs.begin(), bs.end());
  constexpr double kDedup = 1e-12;
  bs.erase(std::unique(bs.begin(), bs.end(),
                       [](double a, double b) { return b - a < kDedup; }),
           bs.end());
  if (bs.size() >= 2 && bs.front() + 1.0 - bs.back() < kDedup) bs.pop_back();

  PLHomeomorphism out;
  out.orientation = inner.orientation == outer.orientation ? Orientation::Preserving
                                                           : Orientation::Reversing;
  out.xs = bs;
  out.ys.reserve(bs.size());
  for (double b : bs) out.ys.push_back(outer.eval(inner.eval(b)));
  lift_monotone(out.ys, out.orientation);
  out.validate();
  return out;
}

bool te_check(const CircleField& f, const CircleField& g, const PLHomeomorphism& h,
              int grid_resolution) {
  h.validate();
  if (grid_resolution < 2) throw precondition_error("te_check needs grid_resolution >= 2");
  const double tol_zero = AnalysisConfig{}.tol_zero;
  // A point inside one field's zero band must map near the partner's zero
  // set; the PL map stretches the band, so the partner check uses a looser
  // band that still separates it from the sign plateaus between zeros.
  const double drift_band = std::sqrt(tol_zero);
  const int flip = h.orientation == Orientation::Preserving ? 1 : -1;
  for (int i = 0; i < grid_resolution; ++i) {
    const double x = static_cast<double>(i) / grid_resolution;
    const double fx = f.eval(x);
    const double gy = g.eval(h.eval(x));
    const int sf = std::abs(fx) <= tol_zero ? 0 : sign_of(fx);
    const int sg = std::abs(gy) <= tol_zero ? 0 : sign_of(gy);
    if (sf != 0 && sg != 0) {
      if (sg != flip * sf) return false;
    } else if (sf == 0 && std::abs(gy) > drift_band) {
      return false;
    } else if (sg == 0 && std::abs(fx) > drift_band) {
      return false;
    }
  }
  return true;
}

std::string equivalence_class_name(const EquivalenceClass& cls) {
  if (cls.kind == EquivalenceClass::Kind::Nonvanishing) return "nonvanishing";
  return "hyperbolic m=" + std::to_string(cls.pair_count);
}

namespace {

EquivalenceClass class_from_report(const StabilityReport& report) {
  EquivalenceClass cls;
  const int count = static_cast<int>(report.fixed_points.points.size());
  if (count == 0) {
    cls.kind = EquivalenceClass::Kind::Nonvanishing;
  } else {
    cls.kind = EquivalenceClass::Kind::Hyperbolic;
    cls.pair_count = count / 2;
    cls.fixed_point_count = count;
  }
  return cls;
}

// Pairs f's zero cycle with g's over every cyclic shift, orientation-
// preserving shifts first, and returns the first candidate whose
// classifications line up and whose sign transfer verifies on the grid.
// Classifications match directly in both orientations: reversing the circle
// also flips the transferred sign, which restores attracting to attracting.
PLHomeomorphism build_from_reports(const CircleField& f, const CircleField& g,
                                   const StabilityReport& rf, const StabilityReport& rg,
                                   const AnalysisConfig& cfg) {
  const auto& pf = rf.fixed_points.points;
  const auto& pg = rg.fixed_points.points;
  if (pf.size() != pg.size())
    throw not_equivalent_error("fixed-point counts differ: " +
                               std::to_string(pf.size()) + " vs " +
                               std::to_string(pg.size()));
  const int n = static_cast<int>(pf.size());

  if (n == 0) {
    PLHomeomorphism h;
    h.xs = {0.0};
    h.ys = {0.0};
    h.orientation = sign_of(f.eval(0.0)) == sign_of(g.eval(0.0))
                        ? Orientation::Preserving
                        : Orientation::Reversing;
    if (!te_check(f, g, h, cfg.grid_resolution))
      throw not_equivalent_error("sign transfer fails for the zero-free pairing");
    return h;
  }

  const auto attempt = [&](Orientation o, int shift) -> std::optional<PLHomeomorphism> {
    std::vector<double> ys(n);
    for (int k = 0; k < n; ++k) {
      const int idx = o == Orientation::Preserving ? (k + shift) % n
                                                   : ((shift - k) % n + n) % n;
      if (pg[idx].classification != pf[k].classification) return std::nullopt;
      ys[k] = pg[idx].location;
    }
    lift_monotone(ys, o);
    PLHomeomorphism h;
    h.orientation = o;
    h.xs.reserve(n);
    for (const FixedPoint& p : pf) h.xs.push_back(p.location);
    h.ys = std::move(ys);
    h.validate();
    if (!te_check(f, g, h, cfg.grid_resolution)) return std::nullopt;
    return h;
  };

  for (int shift = 0; shift < n; ++shift)
    if (auto h = attempt(Orientation::Preserving, shift)) return *h;
  for (int shift = 0; shift < n; ++shift)
    if (auto h = attempt(Orientation::Reversing, shift)) return *h;
  throw not_equivalent_error("no zero pairing transfers the sign pattern");
}

void require_stable_pair(const StabilityReport& rf, const StabilityReport& rg) {
  if (rf.verdict != StabilityVerdict::StructurallyStable ||
      rg.verdict != StabilityVerdict::StructurallyStable)
    throw undecided_error(
        "topological equivalence is decided only for structurally stable fields");
}

}  // namespace

EquivalenceClass equivalence_class(const CircleField& field, const AnalysisConfig& cfg) {
  const StabilityReport report = stability_verdict(field, cfg);
  if (report.verdict != StabilityVerdict::StructurallyStable)
    throw precondition_error("equivalence class requires a structurally stable field");
  return class_from_report(report);
}

PLHomeomorphism build_homeomorphism(const CircleField& f, const CircleField& g,
                                    const AnalysisConfig& cfg) {
  const StabilityReport rf = stability_verdict(f, cfg);
  const StabilityReport rg = stability_verdict(g, cfg);
  require_stable_pair(rf, rg);
  return build_from_reports(f, g, rf, rg, cfg);
}

std::pair<bool, std::optional<PLHomeomorphism>> are_equivalent(const CircleField& f,
                                                               const CircleField& g,
                                                               const AnalysisConfig& cfg) {
  const StabilityReport rf = stability_verdict(f, cfg);
  const StabilityReport rg = stability_verdict(g, cfg);
  require_stable_pair(rf, rg);
  if (!(class_from_report(rf) == class_from_report(rg))) return {false, std::nullopt};
  return {true, build_from_reports(f, g, rf, rg, cfg)};
}

}  // namespace circlestab
