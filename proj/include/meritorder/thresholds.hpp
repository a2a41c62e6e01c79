#ifndef MERITORDER_THRESHOLDS_HPP
#define MERITORDER_THRESHOLDS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "meritorder/power_system.hpp"

namespace meritorder {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Characteristic loads of the system. Any of l2..l6 may be +inf when its
/// defining inequality cannot be met; l8 exists only when l1 < l2.
struct Thresholds {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;
  double l5 = 0.0;
  double l6 = 0.0;
  std::optional<double> l8;
  /// c_F+ == c_F-: any split of the wind and flexible schedules is optimal,
  /// and the dispatch rules fall back to the merit-order split.
  bool symmetric_regulation = false;
  /// The l1 the dispatch rules branch on (p̄_W under symmetric regulation).
  double l1_rule = 0.0;

  /// Whether the dispatch rules take the merit-order branch. A tie l1 == l2
  /// (both roots on the same atom) goes to the other branch: there the
  /// flexible unit still undercuts the inflexible one up to l3.
  bool merit_branch() const
  {
    return l1_rule > l2 || (symmetric_regulation && l1_rule >= l2);
  }
};

/// Marginal-cost curves of the flexible-stochastic portfolio and their integrals.
class CostCurves {
public:
  explicit CostCurves(const PowerSystem& s) : s_(s) {}

  double a(double x) const
  {
    return (s_.voll - s_.cost_up) * F(x - s_.cap_flexible) + s_.cost_up * F(x);
  }

  double b(double x) const
  {
    return s_.cost_flexible + (s_.voll - s_.cost_up) * F(x - s_.cap_flexible)
         - s_.cost_down * (1.0 - F(x));
  }

  double c(double x) const
  {
    return (s_.voll - s_.cost_down) * F(x - s_.cap_flexible) + s_.cost_down * F(x);
  }

  double integral_a(double lo, double hi) const
  {
    return (s_.voll - s_.cost_up) * oriented(lo - s_.cap_flexible, hi - s_.cap_flexible)
         + s_.cost_up * oriented(lo, hi);
  }

  double integral_b(double lo, double hi) const
  {
    return s_.cost_flexible * (hi - lo)
         + (s_.voll - s_.cost_up) * oriented(lo - s_.cap_flexible, hi - s_.cap_flexible)
         - s_.cost_down * ((hi - lo) - oriented(lo, hi));
  }

  double integral_c(double lo, double hi) const
  {
    return (s_.voll - s_.cost_down) * oriented(lo - s_.cap_flexible, hi - s_.cap_flexible)
         + s_.cost_down * oriented(lo, hi);
  }

private:
  double F(double x) const { return s_.supply.cdf(x); }

  // Signed integral of F over [lo, hi].
  double oriented(double lo, double hi) const
  {
    return s_.supply.integral_below(hi) - s_.supply.integral_below(lo);
  }

  const PowerSystem& s_;
};

/// Smallest l >= lo with residual(l) >= 0, for a nondecreasing residual that
/// depends on l only through F(l - shift) for the given shifts. Returns +inf
/// when the residual stays negative.
template <typename Residual>
double minimal_root(const PowerSystem& s, const Residual& residual, double lo,
                    std::span<const double> shifts)
{
  const SupplyDistribution& F = s.supply;
  const double max_shift = *std::max_element(shifts.begin(), shifts.end());
  // Beyond hi every F argument is at or above capacity, so the residual is flat.
  const double hi_end = std::max(lo, F.capacity() + max_shift);
  if (residual(lo) >= 0.0) return lo;
  if (residual(hi_end) < 0.0) return infinity;

  if (!F.is_continuous()) {
    std::vector<double> candidates;
    for (double k : F.kinks()) {
      for (double sh : shifts) {
        const double x = k + sh;
        if (x >= lo && x <= hi_end) candidates.push_back(x);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (double x : candidates) {
      // k + sh - sh can round below k; step up to where the jump registers.
      for (int ulp = 0; ulp < 8 && residual(x) < 0.0; ++ulp) x = std::nextafter(x, infinity);
      if (residual(x) >= 0.0) return x;
    }
    return hi_end;
  }

  const double tol = 1e-9 * s.cap_stochastic;
  double a = lo;
  double b = hi_end;
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    const double m = 0.5 * (a + b);
    if (residual(m) >= 0.0) b = m;
    else a = m;
  }
  return b;
}

/// Total wind-side forward position in the fourth load range of the
/// virtual-bidding equilibrium.
inline double l7(const PowerSystem& s, double l)
{
  const double lo = std::max(0.0, l - s.cap_inflexible - s.cap_flexible);
  const double hi = std::max(lo, l - s.cap_inflexible);
  if (!(s.cost_up > s.cost_down)) return hi;
  const SupplyDistribution& F = s.supply;
  const double level = (s.cost_flexible - (s.voll - s.cost_up) * F.cdf(l - s.cap_inflexible - s.cap_flexible)
                        - s.cost_down * F.cdf(l - s.cap_inflexible))
                     / (s.cost_up - s.cost_down);
  return std::clamp(F.quantile(std::clamp(level, 0.0, 1.0)), lo, hi);
}

/// Cost difference between serving load x with the inflexible unit held back
/// to merit order on the stochastic schedule (group 1) and with it at full
/// output (group 2): positive while group 1 is cheaper. Requires l1 < l2.
inline double cd_switch_residual(const PowerSystem& s, double l1, double l2, double x)
{
  const CostCurves cc(s);
  const double y = x - s.cap_inflexible;
  const double y1 = std::min(y, l1);
  const double y2 = std::min(y, l1 + s.cap_flexible);
  return s.cost_inflexible * (s.cap_inflexible - std::max(x - l2, 0.0))
       - (cc.integral_a(y1, y2) - cc.integral_b(y1, y2))
       - (cc.integral_a(y2, y) - cc.integral_c(y2, y))
       - cc.integral_a(y, std::min(x, l2));
}

inline Thresholds compute_thresholds(const PowerSystem& s)
{
  const SupplyDistribution& F = s.supply;
  const CostCurves cc(s);
  const double c_i = s.cost_inflexible;
  Thresholds t;

  t.symmetric_regulation = !(s.cost_up > s.cost_down);
  t.l1 = t.symmetric_regulation
             ? 0.0
             : F.quantile(std::clamp((s.cost_flexible - s.cost_down) / (s.cost_up - s.cost_down), 0.0, 1.0));

  const std::array<double, 2> near{0.0, s.cap_flexible};
  t.l2 = minimal_root(s, [&](double l) { return cc.a(l) - c_i; }, 0.0, near);
  t.l3 = minimal_root(s, [&](double l) { return cc.b(l) - c_i; }, t.l1, near);
  t.l4 = minimal_root(s, [&](double l) { return cc.c(l) - c_i; }, t.l1 + s.cap_flexible, near);

  const std::array<double, 2> far{s.cap_inflexible, s.cap_inflexible + s.cap_flexible};
  const auto band = [&](double reg) {
    return [&s, &F, reg](double l) {
      return (s.voll - reg) * F.cdf(l - s.cap_inflexible - s.cap_flexible)
           + reg * F.cdf(l - s.cap_inflexible) - s.cost_flexible;
    };
  };
  t.l5 = minimal_root(s, band(s.cost_up), 0.0, far);
  t.l6 = minimal_root(s, band(s.cost_down), 0.0, far);

  t.l1_rule = t.symmetric_regulation ? s.cap_stochastic : t.l1;

  if (!t.merit_branch()) {
    const auto d = [&](double x) { return cd_switch_residual(s, t.l1, t.l2, x); };
    double lo = t.l1 + s.cap_inflexible;
    double hi = t.l2 + s.cap_inflexible;
    if (d(lo) <= 0.0) {
      t.l8 = lo;
    } else if (d(hi) > 0.0) {
      t.l8 = hi;
    } else {
      const double tol = 1e-9 * s.cap_stochastic;
      for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double m = 0.5 * (lo + hi);
        if (d(m) <= 0.0) hi = m;
        else lo = m;
      }
      t.l8 = hi;
    }
  }
  return t;
}

/// Marginal cost of the flexible-stochastic portfolio at net load p̃.
inline double portfolio_marginal_cost(const PowerSystem& s, const Thresholds& t, double net_load)
{
  const CostCurves cc(s);
  if (net_load <= t.l1) return cc.a(net_load);
  if (net_load < t.l1 + s.cap_flexible) return cc.b(net_load);
  return cc.c(net_load);
}

} // namespace meritorder

#endif // MERITORDER_THRESHOLDS_HPP
