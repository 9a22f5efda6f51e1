#include "circlestab/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"
#include "detail/opt.hpp"

namespace circlestab {
namespace {

int tol_sign(double v, double tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

// Bisection on a sign change of f over [lo, hi] (lifted coordinates).
double bisect_zero(const CircleField& field, double lo, double hi) {
  double flo = field.eval(lo);
  for (int i = 0; i < 100 && (hi - lo) >= 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = field.eval(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Bisection on the |f| = tol crossing over [lo, hi]; |f(lo)| and |f(hi)| must
// straddle tol. Used to refine plateau endpoints.
double bisect_tolerance_crossing(const CircleField& field, double lo, double hi, double tol) {
  double glo = std::abs(field.eval(lo)) - tol;
  for (int i = 0; i < 100 && (hi - lo) >= 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = std::abs(field.eval(mid)) - tol;
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Counts sign changes of f over [lo, hi] on a dense uniform sample, skipping
// sub-tolerance samples so a zero crossing is counted exactly once.
int count_sign_changes_dense(const CircleField& field, double lo, double hi, int n, double tol) {
  int count = 0;
  int last = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const int s = tol_sign(field.eval(x), tol);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

struct PlateauCandidate {
  double lifted_a = 0.0;  // refined endpoints in lifted coordinates
  double lifted_b = 0.0;
  int left_sign = 0;
  int right_sign = 0;
};

Classification classify_with_probe(const CircleField& field, CirclePoint x_star,
                                   const AnalysisConfig& cfg, double probe) {
  const double d = field.eval_deriv(x_star);
  if (d < -cfg.tol_deriv) return Classification::HyperbolicStable;
  if (d > cfg.tol_deriv) return Classification::HyperbolicUnstable;
  const double fl = field.eval(x_star - probe);
  const double fr = field.eval(x_star + probe);
  const int sl = tol_sign(fl, cfg.tol_zero);
  const int sr = tol_sign(fr, cfg.tol_zero);
  if (sl == 0 || sr == 0) {
    throw ambiguous_neighborhood_error(
        "both neighborhood probes of the zero near x=" + format_number(wrap_unit(x_star)) +
        " are below tolerance; widen the probe or treat the region as a plateau");
  }
  return sl == sr ? Classification::NonhyperbolicNoSignChange
                  : Classification::NonhyperbolicSignChange;
}

}  // namespace

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::HyperbolicStable:
      return "hyperbolic_stable";
    case Classification::HyperbolicUnstable:
      return "hyperbolic_unstable";
    case Classification::NonhyperbolicNoSignChange:
      return "nonhyperbolic_no_sign_change";
    case Classification::NonhyperbolicSignChange:
      return "nonhyperbolic_sign_change";
  }
  throw std::logic_error("unreachable classification");
}

void AnalysisConfig::validate() const {
  if (grid_resolution < 256) throw precondition_error("grid_resolution must be >= 256");
  if (!(tol_zero > 0.0)) throw precondition_error("tol_zero must be > 0");
  if (!(tol_deriv > 0.0)) throw precondition_error("tol_deriv must be > 0");
  if (!(plateau_min_width > 0.0)) throw precondition_error("plateau_min_width must be > 0");
  if (accumulation_trigger < 2) throw precondition_error("accumulation_trigger must be >= 2");
  if (accumulation_cap < 1) throw precondition_error("accumulation_cap must be >= 1");
  if (accumulation_zoom_points < 1000) {
    throw precondition_error("accumulation_zoom_points must be >= 1000");
  }
  if (!(accumulation_base_radius > 0.0 && accumulation_base_radius < 0.5)) {
    throw precondition_error("accumulation_base_radius must be in (0, 0.5)");
  }
  if (probe_delta < 0.0) throw precondition_error("probe_delta must be >= 0");
  if (density_candidates < 0) throw precondition_error("density_candidates must be >= 0");
}

double AnalysisConfig::effective_probe() const {
  return probe_delta > 0.0 ? probe_delta : 2.0 / grid_resolution;
}

Classification classify(const CircleField& field, CirclePoint x_star, const AnalysisConfig& cfg) {
  cfg.validate();
  if (!(std::abs(field.eval(x_star)) < cfg.tol_zero)) {
    throw precondition_error("classify needs |f(x*)| < tol_zero");
  }
  return classify_with_probe(field, x_star, cfg, cfg.effective_probe());
}

FixedPointSet find_fixed_points(const CircleField& field, const AnalysisConfig& cfg) {
  cfg.validate();
  const int n = cfg.grid_resolution;
  const double tolz = cfg.tol_zero;

  FixedPointSet out;
  out.config = cfg;

  std::vector<double> f(n);
  std::vector<bool> sub(n);
  bool all_sub = true;
  for (int i = 0; i < n; ++i) {
    f[i] = field.eval(static_cast<double>(i) / n);
    sub[i] = std::abs(f[i]) <= tolz;
    all_sub = all_sub && sub[i];
  }
  if (all_sub) {
    out.whole_circle_zero = true;
    return out;
  }

  const auto grid_x = [&](int i) { return static_cast<double>(i) / n; };  // lifted, i may be >= n
  const auto grid_f = [&](int i) { return f[(i % n + n) % n]; };
  const auto grid_sub = [&](int i) { return sub[(i % n + n) % n]; };

  std::vector<double> zeros;  // wrapped locations

  // --- sub-tolerance runs -> plateau candidates or run zeros -----------------
  std::vector<PlateauCandidate> plateau_candidates;
  for (int s = 0; s < n; ++s) {
    if (!sub[s] || grid_sub(s - 1)) continue;  // s starts a maximal cyclic run
    int len = 1;
    while (len < n && grid_sub(s + len)) ++len;
    const double span = static_cast<double>(len - 1) / n;
    if (span > cfg.plateau_min_width) {
      PlateauCandidate cand;
      cand.lifted_a = bisect_tolerance_crossing(field, grid_x(s - 1), grid_x(s), tolz);
      cand.lifted_b = bisect_tolerance_crossing(field, grid_x(s + len - 1), grid_x(s + len), tolz);
      cand.left_sign = grid_f(s - 1) > 0.0 ? 1 : -1;
      cand.right_sign = grid_f(s + len) > 0.0 ? 1 : -1;
      plateau_candidates.push_back(cand);
    } else {
      const double lo = grid_x(s - 1);
      const double hi = grid_x(s + len);
      const bool crossing = (grid_f(s - 1) < 0.0) != (grid_f(s + len) < 0.0);
      double z;
      if (crossing) {
        z = bisect_zero(field, lo, hi);
      } else {
        const auto r = detail::golden_min(
            [&](double x) {
              const double v = field.eval(x);
              return v * v;
            },
            lo, hi);
        z = r.x;
      }
      zeros.push_back(wrap_unit(z));
    }
  }

  // --- simple sign-change zeros between adjacent non-sub samples -------------
  for (int i = 0; i < n; ++i) {
    if (sub[i] || grid_sub(i + 1)) continue;
    if ((f[i] < 0.0) == (grid_f(i + 1) < 0.0)) continue;
    zeros.push_back(wrap_unit(bisect_zero(field, grid_x(i), grid_x(i + 1))));
  }

  // --- tangential zeros: near-zero local minima of |f| without a crossing ----
  const double tangential_gate = std::sqrt(tolz);
  for (int i = 0; i < n; ++i) {
    if (sub[i]) continue;
    const double ai = std::abs(f[i]);
    if (ai >= tangential_gate) continue;
    if (ai > std::abs(grid_f(i - 1)) || ai > std::abs(grid_f(i + 1))) continue;
    const auto r = detail::golden_min(
        [&](double x) {
          const double v = field.eval(x);
          return v * v;
        },
        grid_x(i - 1), grid_x(i + 1));
    if (std::sqrt(r.value) < tolz) zeros.push_back(wrap_unit(r.x));
  }

  // --- dedup / resolution check ----------------------------------------------
  // Locations within 1e-12 of 1 are the point 0 found from the left.
  for (double& z : zeros) {
    if (1.0 - z < 1e-12) z = 0.0;
  }
  std::sort(zeros.begin(), zeros.end());
  zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
  // Crowded spots (distinct zeros inside one cell) are an error unless the
  // accumulation pass later claims them; collect first, judge after.
  std::vector<double> crowded;
  if (zeros.size() >= 2) {
    const double cell = 1.0 / n;
    const auto check_separation = [&](double lo, double hi) {
      const double mid = 0.5 * (lo + hi);
      if (std::abs(field.eval(mid)) > tolz) crowded.push_back(wrap_unit(mid));
    };
    // Merge clusters of finds closer than one cell; distinct zeros that close
    // cannot be trusted at this resolution.
    std::vector<double> merged;
    size_t i = 0;
    while (i < zeros.size()) {
      double best = zeros[i];
      size_t j = i + 1;
      while (j < zeros.size() && zeros[j] - zeros[j - 1] < cell) {
        check_separation(zeros[j - 1], zeros[j]);
        if (std::abs(field.eval(zeros[j])) < std::abs(field.eval(best))) best = zeros[j];
        ++j;
      }
      merged.push_back(best);
      i = j;
    }
    if (merged.size() >= 2 && merged.front() + 1.0 - merged.back() < cell) {
      check_separation(merged.back(), merged.front() + 1.0);
      if (std::abs(field.eval(merged.back())) < std::abs(field.eval(merged.front()))) {
        merged.erase(merged.begin());
      } else {
        merged.pop_back();
      }
    }
    zeros = std::move(merged);
  }

  // --- accumulation heuristic -------------------------------------------------
  const double base_r = cfg.accumulation_base_radius;
  std::set<size_t> dismissed;
  for (int round = 0; round < 8; ++round) {
    // Candidate centers: zeros with enough neighbors inside the base radius.
    // Among them pick the one with the tightest nearest-neighbor gap; spacing
    // shrinks toward a genuine limit point.
    size_t best = zeros.size();
    double best_gap = 2.0;
    for (size_t i = 0; i < zeros.size(); ++i) {
      if (dismissed.count(i)) continue;
      bool near_known = false;  // an existing suspicion already explains this cluster
      for (const double c : out.accumulation_suspected) {
        near_known = near_known || cyclic_distance(zeros[i], c) <= base_r;
      }
      if (near_known) continue;
      int count = 0;
      double gap = 2.0;
      for (size_t j = 0; j < zeros.size(); ++j) {
        const double d = cyclic_distance(zeros[j], zeros[i]);
        if (d <= base_r) ++count;
        if (j != i) gap = std::min(gap, d);
      }
      if (count < cfg.accumulation_trigger) continue;
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best == zeros.size()) break;

    const double center = zeros[best];
    bool suspected = true;
    for (const double s : {base_r, base_r / 2.0, base_r / 4.0}) {
      const int changes = count_sign_changes_dense(field, center - s, center + s,
                                                   cfg.accumulation_zoom_points, tolz);
      if (changes <= cfg.accumulation_cap) {
        suspected = false;
        break;
      }
    }
    if (!suspected) {
      dismissed.insert(best);
      continue;
    }

    out.accumulation_suspected.push_back(center);
    const double absorb = base_r / 4.0;
    std::vector<double> kept;
    for (const double z : zeros) {
      if (cyclic_distance(z, center) > absorb) kept.push_back(z);
    }
    zeros = std::move(kept);
    std::vector<PlateauCandidate> kept_plateaus;
    for (const auto& cand : plateau_candidates) {
      const double mid = wrap_unit(0.5 * (cand.lifted_a + cand.lifted_b));
      if (cyclic_distance(mid, center) > absorb &&
          cyclic_distance(wrap_unit(cand.lifted_a), center) > absorb &&
          cyclic_distance(wrap_unit(cand.lifted_b), center) > absorb) {
        kept_plateaus.push_back(cand);
      }
    }
    plateau_candidates = std::move(kept_plateaus);
    dismissed.clear();  // indices shifted; recount from scratch
  }
  std::sort(out.accumulation_suspected.begin(), out.accumulation_suspected.end());

  for (const double mid : crowded) {
    bool absorbed = false;
    for (const double c : out.accumulation_suspected) {
      absorbed = absorbed || cyclic_distance(mid, c) <= base_r / 4.0;
    }
    if (!absorbed) {
      throw resolution_error("two distinct zeros near x=" + format_number(mid) +
                             " fall inside one grid cell; retry with a finer grid");
    }
  }

  // --- classify surviving zeros ----------------------------------------------
  for (const double z : zeros) {
    FixedPoint fp;
    fp.location = z;
    fp.derivative = field.eval_deriv(z);
    fp.residual = std::abs(field.eval(z));
    Classification cls = Classification::HyperbolicStable;
    bool classified = false;
    double probe = cfg.effective_probe();
    for (int attempt = 0; attempt < 4 && !classified; ++attempt, probe *= 2.0) {
      try {
        cls = classify_with_probe(field, z, cfg, probe);
        classified = true;
      } catch (const ambiguous_neighborhood_error&) {
        if (attempt == 3) throw;
      }
    }
    fp.classification = cls;
    out.points.push_back(fp);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const FixedPoint& p, const FixedPoint& q) { return p.location < q.location; });

  // --- finalize plateaus -------------------------------------------------------
  for (const auto& cand : plateau_candidates) {
    PlateauInterval p;
    p.a = wrap_unit(cand.lifted_a);
    p.b = wrap_unit(cand.lifted_b);
    p.left_sign = cand.left_sign;
    p.right_sign = cand.right_sign;
    p.subcase = (cand.left_sign == cand.right_sign) ? PlateauSubcase::SameSign
                                                    : PlateauSubcase::OppositeSign;
    out.plateaus.push_back(p);
  }
  std::sort(out.plateaus.begin(), out.plateaus.end(),
            [](const PlateauInterval& p, const PlateauInterval& q) { return p.a < q.a; });

  // --- sign constancy between consecutive detected objects ---------------------
  // Skipped when accumulation is suspected: the absorbed neighborhood still
  // oscillates. Uses the original grid samples, excluding one cell on each
  // side of every object boundary.
  if (out.accumulation_suspected.empty() && (!out.points.empty() || !out.plateaus.empty())) {
    struct Span {
      double start;  // lifted
      double end;
    };
    std::vector<Span> spans;
    for (const auto& fp : out.points) spans.push_back({fp.location, fp.location});
    for (const auto& p : out.plateaus) {
      const double end = p.b >= p.a ? p.b : p.b + 1.0;
      spans.push_back({p.a, end});
    }
    std::sort(spans.begin(), spans.end(),
              [](const Span& u, const Span& v) { return u.start < v.start; });
    for (size_t j = 0; j < spans.size(); ++j) {
      const double gap_lo = spans[j].end;
      const double gap_hi =
          (j + 1 < spans.size()) ? spans[j + 1].start : spans[0].start + 1.0;
      int seen = 0;
      const int i_lo = static_cast<int>(std::ceil((gap_lo + 1.0 / n) * n));
      const int i_hi = static_cast<int>(std::floor((gap_hi - 1.0 / n) * n));
      for (int i = i_lo; i <= i_hi; ++i) {
        if (grid_sub(i)) continue;
        const int s = grid_f(i) > 0.0 ? 1 : -1;
        if (seen == 0) {
          seen = s;
        } else if (s != seen) {
          throw resolution_error(
              "sign change between consecutive detected zeros near x=" +
              format_number(wrap_unit(grid_x(i))) + "; retry with a finer grid");
        }
      }
    }
  }

  return out;
}

std::string fixed_point_set_csv(const FixedPointSet& set) {
  std::string out = "location,derivative,classification,residual\n";
  for (const auto& fp : set.points) {
    out += format_number(fp.location);
    out += ',';
    out += format_number(fp.derivative);
    out += ',';
    out += classification_name(fp.classification);
    out += ',';
    out += format_number(fp.residual);
    out += '\n';
  }
  return out;
}

}  // namespace circlestab
