#include "circlestab/norm.hpp"

#include <cmath>

#include "circlestab/errors.hpp"
#include "detail/opt.hpp"

namespace circlestab {
namespace {

// Refined sup of |g| over the circle: cyclic grid scan plus golden-section
// refinement of every local-maximum bracket of g^2 (smooth where |g| kinks).
template <typename Fn>
double refined_sup_abs(Fn&& g, int n) {
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) {
    const double v = g(static_cast<double>(i) / n);
    sq[i] = v * v;
  }
  double best = 0.0;
  for (int i = 0; i < n; ++i) best = std::max(best, sq[i]);
  const auto neg_sq = [&](double x) {
    const double v = g(x);
    return -(v * v);
  };
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double prev = sq[(i + n - 1) % n];
    const double next = sq[(i + 1) % n];
    if (sq[i] >= prev && sq[i] >= next) {
      const double x = static_cast<double>(i) / n;
      const auto r = detail::golden_min(neg_sq, x - h, x + h);
      best = std::max(best, -r.value);
    }
  }
  return std::sqrt(best);
}

}  // namespace

NormEstimate c1_norm(const CircleField& field, int grid_resolution) {
  if (grid_resolution < 16) throw precondition_error("c1_norm needs grid_resolution >= 16");
  NormEstimate est;
  est.grid_resolution = grid_resolution;
  est.sup_f = refined_sup_abs([&](double x) { return field.eval(x); }, grid_resolution);
  est.sup_df = refined_sup_abs([&](double x) { return field.eval_deriv(x); }, grid_resolution);
  est.c1 = est.sup_f + est.sup_df;
  est.is_certified_upper_bound = false;
  return est;
}

std::optional<double> certified_c1_bound(const CircleField& field) {
  double total = 0.0;
  for (const Atom& atom : field.atoms) {
    const auto bound = atom.certified_c1_bound();
    if (!bound) return std::nullopt;
    total += *bound;
  }
  return total;
}

double psi_norm_bound(double a, double b) {
  if (!(a < b)) throw precondition_error("psi_norm_bound needs a < b");
  const double inv_e = std::exp(-1.0);
  return inv_e * (1.0 + 12.0 * inv_e / (b - a));
}

}  // namespace circlestab
