#ifndef MERITORDER_SWEEP_HPP
#define MERITORDER_SWEEP_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <span>
#include <thread>
#include <vector>

#include "meritorder/config.hpp"
#include "meritorder/errors.hpp"
#include "meritorder/markets.hpp"
#include "meritorder/report.hpp"

namespace meritorder {

enum class SweepAxis { load, kappa };

/// from, from + step, ... up to `to` (inclusive, with a relative slack of
/// 1e-9 steps). Empty when from > to.
inline std::vector<double> sweep_points(double from, double to, double step)
{
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("sweep step must be positive");
  if (!std::isfinite(from) || !std::isfinite(to)) throw DomainError("sweep bounds must be finite");
  std::vector<double> xs;
  if (from > to) return xs;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  xs.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) xs.push_back(from + static_cast<double>(k) * step);
  return xs;
}

/// Evaluates every point independently (in parallel when cores allow) and
/// returns rows in axis order, markets in the order requested.
inline std::vector<ReportRow> run_sweep(const CaseConfig& cfg, SweepAxis axis, std::span<const double> points,
                                        std::span<const Market> markets)
{
  const auto evaluate = [&](double x) {
    const PowerSystem s = axis == SweepAxis::load ? with_load(cfg.system, x) : with_kappa(cfg, x);
    validate(s);
    return solve_markets(s, markets);
  };

  std::vector<std::vector<MarketOutcome>> results(points.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(points.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) results[i] = evaluate(points[i]);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < points.size(); i += workers) results[i] = evaluate(points[i]);
      }));
    }
    for (auto& j : jobs) j.get();
  }

  std::vector<ReportRow> rows;
  rows.reserve(points.size() * markets.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const MarketOutcome& o : results[i]) rows.push_back({points[i], o});
  }
  return rows;
}

} // namespace meritorder

#endif // MERITORDER_SWEEP_HPP
