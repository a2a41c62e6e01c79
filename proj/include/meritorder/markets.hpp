#ifndef MERITORDER_MARKETS_HPP
#define MERITORDER_MARKETS_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "meritorder/balancing.hpp"
#include "meritorder/power_system.hpp"
#include "meritorder/thresholds.hpp"

namespace meritorder {

/// Merit-order clearing with the stochastic schedule capped at p̂_W.
/// Returns nullopt when the load exceeds the forward capacity.
inline std::optional<Dispatch> dispatch_conv(const PowerSystem& s)
{
  const double l = s.load;
  const double w = s.expected_wind;
  if (l <= w) return Dispatch{l, 0.0, 0.0, 0.0, 1};
  if (l <= w + s.cap_inflexible) return Dispatch{w, l - w, 0.0, 0.0, 2};
  if (l <= w + s.cap_inflexible + s.cap_flexible) {
    return Dispatch{w, s.cap_inflexible, l - w - s.cap_inflexible, 0.0, 3};
  }
  return std::nullopt;
}

namespace detail {

// Rules 1-5: the branch l1 >= l2, which keeps the merit order.
inline Dispatch merit_branch(const PowerSystem& s, double l1, double l2)
{
  const double l = s.load;
  const double pi = s.cap_inflexible;
  const double pf = s.cap_flexible;
  if (l <= l2) return {l, 0.0, 0.0, 0.0, 1};
  if (l <= pi + l2) return {l2, l - l2, 0.0, 0.0, 2};
  if (l <= pi + l1) return {l - pi, pi, 0.0, 0.0, 3};
  if (l <= pf + pi + l1) return {l1, pi, l - l1 - pi, 0.0, 4};
  return {l - pf - pi, pi, pf, 0.0, 5};
}

} // namespace detail

/// Expected-cost-minimizing forward dispatch.
inline Dispatch dispatch_sto(const PowerSystem& s, const Thresholds& t)
{
  const double l = s.load;
  const double pi = s.cap_inflexible;
  const double pf = s.cap_flexible;
  const double l1 = t.l1_rule;
  if (t.merit_branch()) return detail::merit_branch(s, l1, t.l2);

  if (l <= l1) return {l, 0.0, 0.0, 0.0, 6};
  if (t.l3 <= l1 + pf) {
    if (l <= t.l3) return {l1, 0.0, l - l1, 0.0, 7};
    if (l <= pi + t.l3) return {l1, l - t.l3, t.l3 - l1, 0.0, 8};
    if (l <= pi + pf + l1) return {l1, pi, l - l1 - pi, 0.0, 9};
    return {l - pi - pf, pi, pf, 0.0, 10};
  }
  if (l <= pf + l1) return {l1, 0.0, l - l1, 0.0, 11};
  if (l <= t.l4) return {l - pf, 0.0, pf, 0.0, 12};
  if (l <= t.l4 + pi) return {t.l4 - pf, l - t.l4, pf, 0.0, 13};
  return {l - pf - pi, pi, pf, 0.0, 14};
}

inline Dispatch dispatch_sto(const PowerSystem& s) { return dispatch_sto(s, compute_thresholds(s)); }

/// Equilibrium of merit-order clearing with a risk-neutral virtual bidder.
/// The stochastic producer holds min(q, p̂_W) of the wind-side position q.
inline Dispatch dispatch_vb(const PowerSystem& s, const Thresholds& t)
{
  const double l = s.load;
  const double pi = s.cap_inflexible;
  const double pf = s.cap_flexible;
  double q = 0.0;
  Dispatch d;
  if (l <= t.l2) {
    q = l;
    d.rule = 1;
  } else if (l <= t.l2 + pi) {
    q = t.l2;
    d.p_i = l - t.l2;
    d.rule = 2;
  } else if (l <= t.l5) {
    q = l - pi;
    d.p_i = pi;
    d.rule = 3;
  } else if (l <= t.l6) {
    q = l7(s, l);
    d.p_i = pi;
    d.p_f = l - q - pi;
    d.rule = 4;
  } else {
    // With c_F- == c_F the band can close before the flexible unit is full.
    q = std::max(0.0, l - pf - pi);
    d.p_i = pi;
    d.p_f = l - q - pi;
    d.rule = 5;
  }
  d.p_w = std::min(q, s.expected_wind);
  d.p_v = q - d.p_w;
  return d;
}

inline Dispatch dispatch_vb(const PowerSystem& s) { return dispatch_vb(s, compute_thresholds(s)); }

/// Stochastic schedule chosen centrally, the rest cleared in merit order.
inline Dispatch dispatch_cd(const PowerSystem& s, const Thresholds& t)
{
  const double l1 = t.l1_rule;
  if (t.merit_branch() || !t.l8) return detail::merit_branch(s, l1, t.l2);

  const double l = s.load;
  const double pi = s.cap_inflexible;
  const double pf = s.cap_flexible;
  if (l <= *t.l8) {
    if (l <= t.l2) return {l, 0.0, 0.0, 0.0, 6};
    return {t.l2, l - t.l2, 0.0, 0.0, 7};
  }
  const double net = l - pi;
  if (net <= l1 + pf) return {l1, pi, net - l1, 0.0, 8};
  return {net - pf, pi, pf, 0.0, 9};
}

inline Dispatch dispatch_cd(const PowerSystem& s) { return dispatch_cd(s, compute_thresholds(s)); }

inline double expected_total_cost(const PowerSystem& s, const Dispatch& d)
{
  return s.cost_inflexible * d.p_i + s.cost_flexible * d.p_f
       + expected_balancing_cost(s, d.p_f, d.wind_position());
}

/// Forward price. StoM and ConvM-VB clear at the expected balancing price;
/// ConvM and ConvM-CD at the cost of the dearest technology scheduled.
inline double forward_price(const PowerSystem& s, Market market, const Dispatch& d)
{
  if (market == Market::sto || market == Market::vb) {
    return expected_balancing_price(s, d.p_f, d.wind_position());
  }
  const double eps = 1e-9 * std::max(1.0, s.load);
  if (d.p_f > eps) return s.cost_flexible;
  if (d.p_i > eps) return s.cost_inflexible;
  return 0.0;
}

inline std::optional<Dispatch> dispatch_for(const PowerSystem& s, const Thresholds& t, Market market)
{
  switch (market) {
  case Market::conv: return dispatch_conv(s);
  case Market::sto: return dispatch_sto(s, t);
  case Market::vb: return dispatch_vb(s, t);
  case Market::cd: return dispatch_cd(s, t);
  }
  return std::nullopt;
}

inline MarketOutcome outcome_from_dispatch(const PowerSystem& s, Market market,
                                           std::optional<Dispatch> dispatch, double reference_cost)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  MarketOutcome out;
  out.market = market;
  out.dispatch = dispatch;
  if (!dispatch) {
    out.forward_price = out.expected_balancing_price = out.expected_total_cost = out.efficiency_gap = nan;
    return out;
  }
  const Dispatch& d = *dispatch;
  out.forward_price = forward_price(s, market, d);
  out.expected_balancing_price = expected_balancing_price(s, d.p_f, d.wind_position());
  out.expected_total_cost = expected_total_cost(s, d);
  out.efficiency_gap = reference_cost != 0.0
                           ? 100.0 * (out.expected_total_cost - reference_cost) / reference_cost
                           : (out.expected_total_cost == 0.0 ? 0.0 : nan);
  return out;
}

/// Outcomes of the requested markets, in the order given. Gaps are measured
/// against the StoM cost, which is computed whether requested or not.
inline std::vector<MarketOutcome> solve_markets(const PowerSystem& s, const Thresholds& t,
                                                std::span<const Market> markets)
{
  const double reference = expected_total_cost(s, dispatch_sto(s, t));
  std::vector<MarketOutcome> out;
  out.reserve(markets.size());
  for (Market m : markets) out.push_back(outcome_from_dispatch(s, m, dispatch_for(s, t, m), reference));
  return out;
}

inline std::vector<MarketOutcome> solve_markets(const PowerSystem& s, std::span<const Market> markets)
{
  return solve_markets(s, compute_thresholds(s), markets);
}

inline MarketOutcome market_outcome(const PowerSystem& s, Market market)
{
  const Market one[] = {market};
  return solve_markets(s, one).front();
}

/// Row of the StoM dispatch table active at the configured load.
inline int sto_rule(const PowerSystem& s, const Thresholds& t) { return dispatch_sto(s, t).rule; }

} // namespace meritorder

#endif // MERITORDER_MARKETS_HPP
