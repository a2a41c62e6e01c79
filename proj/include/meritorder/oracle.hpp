#ifndef MERITORDER_ORACLE_HPP
#define MERITORDER_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "meritorder/balancing.hpp"
#include "meritorder/errors.hpp"
#include "meritorder/power_system.hpp"

// Brute-force counterparts of the closed-form market solutions. They use only
// the balancing primitives, never the thresholds or dispatch tables.

namespace meritorder {

namespace detail {

struct Argmin {
  double x;
  double value;
};

/// Golden-section search on [a, b]; exact for unimodal fn, and never leaves the interval.
template <typename Fn>
Argmin golden_section(const Fn& fn, double a, double b, double tol)
{
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  Argmin best{fc <= fd ? c : d, std::min(fc, fd)};
  for (double x : {a, b}) {
    const double fx = fn(x);
    if (fx < best.value) best = {x, fx};
  }
  return best;
}

/// Grid over [lo, hi] (both ends and any extra points included), then
/// golden-section inside the cell around the best grid point.
template <typename Fn>
Argmin grid_then_golden(const Fn& fn, double lo, double hi, double step, std::vector<double> extra, double tol)
{
  std::vector<double> xs = std::move(extra);
  const auto n = static_cast<long>(std::ceil((hi - lo) / step - 1e-12));
  for (long k = 0; k <= n; ++k) xs.push_back(std::min(hi, lo + static_cast<double>(k) * step));
  xs.push_back(hi);
  xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !(x >= lo && x <= hi); }), xs.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::size_t best = 0;
  double best_value = fn(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = fn(xs[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = xs[best > 0 ? best - 1 : 0];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  Argmin refined = b > a ? golden_section(fn, a, b, tol) : Argmin{xs[best], best_value};
  if (refined.value < best_value) return refined;
  return {xs[best], best_value};
}

inline double stage_cost(const PowerSystem& s, double p_i, double p_f, double q)
{
  return s.cost_inflexible * p_i + s.cost_flexible * p_f + expected_balancing_cost(s, p_f, q);
}

} // namespace detail

/// Deterministic discretization w_k = F^-1((k - 1/2) / n), k = 1..n.
inline std::vector<double> quantile_nodes(const SupplyDistribution& F, int n)
{
  if (n < 1) throw DomainError("quantile discretization needs at least one node");
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    nodes[static_cast<std::size_t>(k - 1)] = F.quantile((k - 0.5) / n);
  }
  return nodes;
}

struct RecourseEstimate {
  double mean;           // scenario-average re-dispatch cost
  double mean_absolute;  // scenario average of its magnitude
};

inline RecourseEstimate recourse_estimate(const PowerSystem& s, double p_f, double q,
                                          const std::vector<double>& nodes)
{
  const double p_w = std::min(q, s.cap_stochastic);
  const Dispatch d{p_w, 0.0, p_f, q - p_w, 0};
  double acc = 0.0;
  double acc_abs = 0.0;
  for (double w : nodes) {
    const double c = redispatch_cost(s, detail::redispatch_unchecked(s, d, w));
    acc += c;
    acc_abs += std::fabs(c);
  }
  const auto n = static_cast<double>(nodes.size());
  return {acc / n, acc_abs / n};
}

/// Scenario average of the optimal re-dispatch cost over the given nodes.
inline double oracle_recourse_cost(const PowerSystem& s, double p_f, double q, const std::vector<double>& nodes)
{
  return recourse_estimate(s, p_f, q, nodes).mean;
}

inline double oracle_recourse_cost(const PowerSystem& s, double p_f, double q, int n_nodes)
{
  if (n_nodes < 100) throw DomainError("recourse oracle needs at least 100 nodes");
  return oracle_recourse_cost(s, p_f, q, quantile_nodes(s.supply, n_nodes));
}

/// Expected-cost minimization by search over the stochastic schedule (grid of
/// the given step plus refinement) and, for each, over the flexible schedule
/// inside its feasible window. The cost is jointly convex, so the inner
/// search is a coarse grid followed by golden-section.
inline std::optional<Dispatch> oracle_sto(const PowerSystem& s, double grid_step)
{
  if (!(grid_step > 0.0)) throw DomainError("grid step must be positive");
  const double l = s.load;
  const double tol = 1e-10 * std::max(1.0, s.cap_stochastic);
  const double w_hi = std::min(s.cap_stochastic, l);
  const double w_lo = std::max(0.0, l - s.cap_inflexible - s.cap_flexible);
  if (w_lo > w_hi) return std::nullopt;

  const auto inner = [&](double p_w) {
    const double f_lo = std::max(0.0, l - p_w - s.cap_inflexible);
    const double f_hi = std::min(s.cap_flexible, l - p_w);
    const auto cost = [&](double p_f) { return detail::stage_cost(s, l - p_w - p_f, p_f, p_w); };
    if (!(f_hi > f_lo)) {
      const double p_f = std::clamp(f_lo, 0.0, std::max(f_hi, 0.0));
      return detail::Argmin{p_f, cost(p_f)};
    }
    return detail::grid_then_golden(cost, f_lo, f_hi, (f_hi - f_lo) / 32.0, {}, tol);
  };
  const auto outer = [&](double p_w) { return inner(p_w).value; };

  const std::vector<double> faces{l - s.cap_inflexible, l - s.cap_flexible};
  const detail::Argmin w = detail::grid_then_golden(outer, w_lo, w_hi, grid_step, faces, tol);
  const detail::Argmin f = inner(w.x);
  return Dispatch{w.x, l - w.x - f.x, f.x, 0.0, 0};
}

/// Bilevel search: the stochastic schedule is chosen on a grid (plus
/// refinement), the residual load is cleared in merit order.
inline std::optional<Dispatch> oracle_cd(const PowerSystem& s, double grid_step)
{
  if (!(grid_step > 0.0)) throw DomainError("grid step must be positive");
  const double l = s.load;
  const double tol = 1e-10 * std::max(1.0, s.cap_stochastic);
  const double w_hi = std::min(s.cap_stochastic, l);
  const double w_lo = std::max(0.0, l - s.cap_inflexible - s.cap_flexible);
  if (w_lo > w_hi) return std::nullopt;

  const auto lower = [&](double p_w) {
    const double residual = l - p_w;
    const double p_i = std::clamp(residual, 0.0, s.cap_inflexible);
    return std::pair{p_i, residual - p_i};
  };
  const auto cost = [&](double p_w) {
    const auto [p_i, p_f] = lower(p_w);
    return detail::stage_cost(s, p_i, p_f, p_w);
  };
  const std::vector<double> kinks{l - s.cap_inflexible};
  const detail::Argmin w = detail::grid_then_golden(cost, w_lo, w_hi, grid_step, kinks, tol);
  const auto [p_i, p_f] = lower(w.x);
  return Dispatch{w.x, p_i, p_f, 0.0, 0};
}

/// Equilibrium of merit-order clearing with a risk-neutral virtual bidder,
/// found as the smallest wind-side position q at which the expected balancing
/// price reaches the forward price interval. Bisection to tol/v * p̄_W in q.
inline Dispatch oracle_vb(const PowerSystem& s, double tol)
{
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double l = s.load;
  const double eps = 1e-12 * std::max(1.0, l);

  const auto schedule = [&](double q) {
    const double residual = std::max(0.0, l - q);
    const double p_i = std::min(residual, s.cap_inflexible);
    return std::pair{p_i, residual - p_i};
  };
  // Lower end of the forward price interval given the residual merit order.
  const auto price_floor = [&](double q) {
    const double residual = l - q;
    if (residual <= eps) return 0.0;
    if (residual <= s.cap_inflexible + eps) return s.cost_inflexible;
    return s.cost_flexible;
  };
  const auto gap = [&](double q) {
    return expected_balancing_price(s, schedule(q).second, q) - price_floor(q);
  };

  double lo = std::max(0.0, l - s.cap_inflexible - s.cap_flexible);
  double hi = l;
  double q = lo;
  if (gap(lo) < 0.0) {
    if (gap(hi) < 0.0) {
      std::ostringstream msg;
      msg << "no virtual-bidding equilibrium in [" << lo << ", " << hi << "]";
      throw ContractViolation(msg.str());
    }
    const double width = tol / s.voll * s.cap_stochastic;
    for (int iter = 0; iter < 200 && hi - lo > width; ++iter) {
      const double m = 0.5 * (lo + hi);
      if (gap(m) >= 0.0) hi = m;
      else lo = m;
    }
    q = hi;
  }
  const auto [p_i, p_f] = schedule(q);
  const double p_w = std::min(q, s.expected_wind);
  return Dispatch{p_w, p_i, p_f, q - p_w, 0};
}

} // namespace meritorder

#endif // MERITORDER_ORACLE_HPP
