#ifndef MERITORDER_QUADRATURE_HPP
#define MERITORDER_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace meritorder {

namespace detail {

template <typename Fn>
double simpson_recurse(const Fn& fn, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
       + simpson_recurse(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of fn over [a, b] to absolute tolerance tol.
/// Returns the signed integral (negative when b < a).
template <typename Fn>
double adaptive_simpson(const Fn& fn, double a, double b, double tol = 1e-9, int max_depth = 50)
{
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(fn, b, a, tol, max_depth);
  const double fa = fn(a);
  const double fb = fn(b);
  const double m = 0.5 * (a + b);
  const double fm = fn(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_recurse(fn, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Adaptive Simpson over [a, b] split at every breakpoint strictly inside the
/// range, so integrands with known kinks or jumps are integrated piecewise.
/// Panels abut at the breakpoints; for a jump the integrand must be one-sided
/// continuous, which the splitting makes harmless.
template <typename Fn>
double piecewise_simpson(const Fn& fn, double a, double b, std::span<const double> breakpoints,
                         double tol = 1e-9)
{
  if (a == b) return 0.0;
  if (b < a) return -piecewise_simpson(fn, b, a, breakpoints, tol);

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double panel_tol = tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    // Evaluate strictly inside the panel so a jump at a cut never leaks in.
    const double shrink = std::min(1e-13 * std::max(1.0, std::fabs(lo)), 0.25 * (hi - lo));
    const auto inner = [&](double x) { return fn(std::clamp(x, lo + shrink, hi - shrink)); };
    total += adaptive_simpson(inner, lo, hi, panel_tol);
  }
  return total;
}

} // namespace meritorder

#endif // MERITORDER_QUADRATURE_HPP
