#ifndef MERITORDER_BALANCING_HPP
#define MERITORDER_BALANCING_HPP

#include <algorithm>
#include <cmath>
#include <sstream>

#include "meritorder/errors.hpp"
#include "meritorder/power_system.hpp"

namespace meritorder {

namespace detail {

inline double feasibility_slack(const PowerSystem& s)
{
  return 1e-9 * std::max({1.0, s.cap_inflexible, s.cap_flexible, s.cap_stochastic, s.load});
}

inline void require_feasible(const PowerSystem& s, const Dispatch& d, double w)
{
  const double eps = feasibility_slack(s);
  std::ostringstream why;
  if (!(d.p_w >= -eps && d.p_w <= s.cap_stochastic + eps)) why << "p_w=" << d.p_w << " outside [0, p̄_W]; ";
  if (!(d.p_i >= -eps && d.p_i <= s.cap_inflexible + eps)) why << "p_i=" << d.p_i << " outside [0, p̄_I]; ";
  if (!(d.p_f >= -eps && d.p_f <= s.cap_flexible + eps)) why << "p_f=" << d.p_f << " outside [0, p̄_F]; ";
  if (!(d.p_w + d.p_v >= -eps)) why << "wind-side position p_w+p_v=" << d.p_w + d.p_v << " is negative; ";
  if (!(std::fabs(d.p_w + d.p_i + d.p_f + d.p_v - s.load) <= eps)) why << "forward balance violated; ";
  if (!(w >= 0.0 && w <= s.cap_stochastic)) why << "realization w=" << w << " outside [0, p̄_W]; ";
  const std::string msg = why.str();
  if (!msg.empty()) throw ContractViolation("infeasible re-dispatch input: " + msg);
}

} // namespace detail

namespace detail {

inline Redispatch redispatch_unchecked(const PowerSystem& s, const Dispatch& d, double w)
{
  const double q = d.wind_position();
  const double headroom = std::max(0.0, s.cap_flexible - d.p_f);
  const double p_f = std::max(0.0, d.p_f);

  Redispatch r;
  r.scenario = w;
  r.virtual_adjust = -d.p_v;
  if (w <= q) {
    const double deficit = q - w;
    r.up = std::min(headroom, deficit);
    r.shed = std::max(0.0, deficit - headroom);
    r.wind_adjust = w - d.p_w;
  } else {
    const double surplus = w - q;
    r.down = std::min(p_f, surplus);
    r.wind_adjust = r.down + d.p_v;
  }
  return r;
}

} // namespace detail

/// Cost-minimal real-time actions after W = w. Deficits are met by upward
/// regulation, then shedding; surpluses by downward regulation, then spill.
/// The virtual position is always unwound in full.
inline Redispatch redispatch(const PowerSystem& s, const Dispatch& d, double w)
{
  detail::require_feasible(s, d, w);
  return detail::redispatch_unchecked(s, d, w);
}

inline double redispatch_cost(const PowerSystem& s, const Redispatch& r)
{
  return s.voll * r.shed + s.cost_up * r.up - s.cost_down * r.down;
}

/// Expected recourse cost for flexible schedule p_f and wind-side position q.
/// Independent of the inflexible schedule.
inline double expected_balancing_cost(const PowerSystem& s, double p_f, double q)
{
  const SupplyDistribution& F = s.supply;
  const double lo = p_f + q - s.cap_flexible;
  return s.voll * F.cdf_integral(0.0, lo)
       + s.cost_up * F.cdf_integral(lo, q)
       + s.cost_down * F.cdf_integral(q, p_f + q)
       - s.cost_down * p_f;
}

/// Expected real-time price; the derivative of expected_balancing_cost in q.
inline double expected_balancing_price(const PowerSystem& s, double p_f, double q)
{
  const SupplyDistribution& F = s.supply;
  const double f_lo = F.cdf(p_f + q - s.cap_flexible);
  const double f_q = F.cdf(q);
  const double f_hi = F.cdf(p_f + q);
  return s.voll * f_lo + s.cost_up * (f_q - f_lo) + s.cost_down * (f_hi - f_q);
}

/// Real-time price at realization w. At a boundary the higher (left-limit) price is returned.
inline double balancing_price(const PowerSystem& s, const Dispatch& d, double w)
{
  const double q = d.wind_position();
  if (w <= q - (s.cap_flexible - d.p_f)) return s.voll;
  if (w <= q) return s.cost_up;
  if (w <= q + d.p_f) return s.cost_down;
  return 0.0;
}

} // namespace meritorder

#endif // MERITORDER_BALANCING_HPP
