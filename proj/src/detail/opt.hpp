#pragma once

#include <cmath>

namespace circlestab::detail {

struct MinResult {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for a minimum of fn on [lo, hi]. Converges to a local
// minimum inside the bracket; the result is never worse than any point the
// search evaluated (endpoints included), so boundary minima are handled.
template <typename Fn>
MinResult golden_min(Fn&& fn, double lo, double hi, int max_iter = 80) {
  constexpr double kInvPhi = 0.6180339887498949;
  MinResult best{lo, fn(lo)};
  const double at_hi = fn(hi);
  if (at_hi < best.value) best = {hi, at_hi};
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  for (int i = 0; i < max_iter && (b - a) > 1e-15; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

// Sample fn at n+1 equally spaced points of [lo, hi] and golden-refine every
// local-minimum bracket; returns the overall minimum found.
template <typename Fn>
MinResult refined_min(Fn&& fn, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  MinResult best{lo, fn(lo)};
  double prev2 = 0.0;
  double prev = best.value;
  for (int i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + i * h;
    const double v = fn(x);
    if (v < best.value) best = {x, v};
    if (i >= 2 && prev <= prev2 && prev <= v) {
      const MinResult r = golden_min(fn, lo + (i - 2) * h, x);
      if (r.value < best.value) best = r;
    }
    prev2 = prev;
    prev = v;
  }
  // endpoint brackets
  {
    const MinResult r = golden_min(fn, lo, lo + h);
    if (r.value < best.value) best = r;
    const MinResult r2 = golden_min(fn, hi - h, hi);
    if (r2.value < best.value) best = r2;
  }
  return best;
}

// Refined minimum of |g| over [lo, hi].
template <typename Fn>
double refined_min_abs(Fn&& g, double lo, double hi, int n) {
  const auto sq = [&](double x) {
    const double v = g(x);
    return v * v;
  };
  const double m = refined_min(sq, lo, hi, n).value;
  return std::sqrt(m < 0.0 ? 0.0 : m);
}

}  // namespace circlestab::detail
