#ifndef MERITORDER_VERIFY_HPP
#define MERITORDER_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "meritorder/markets.hpp"
#include "meritorder/oracle.hpp"
#include "meritorder/report.hpp"

namespace meritorder {

struct VerifyCheck {
  std::string name;
  std::string quantity;
  double closed_form;
  double oracle;
  double abs_dev;
  double rel_dev;
  double tolerance;  // on rel_dev
  bool pass;
};

struct VerifyOptions {
  double grid_step = 0.25;
  int nodes = 20000;
  double vb_price_tol = 1e-6;
};

namespace detail {

inline VerifyCheck make_check(std::string name, std::string quantity, double closed, double oracle, double scale,
                              double tolerance)
{
  const double abs_dev = std::fabs(closed - oracle);
  const double rel_dev = scale > 0.0 ? abs_dev / scale : abs_dev;
  const bool pass = std::isfinite(closed) && std::isfinite(oracle) && rel_dev <= tolerance;
  return {std::move(name), std::move(quantity), closed, oracle, abs_dev, rel_dev, tolerance, pass};
}

} // namespace detail

/// Runs each closed form against its brute-force oracle. Thresholds are taken
/// as given so a deliberately perturbed set can act as a negative control.
inline std::vector<VerifyCheck> run_verification(const PowerSystem& s, const Thresholds& t,
                                                 const VerifyOptions& opt = {})
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<VerifyCheck> checks;

  const Dispatch sto = dispatch_sto(s, t);
  {
    const auto est = recourse_estimate(s, sto.p_f, sto.wind_position(), quantile_nodes(s.supply, opt.nodes));
    const double closed = expected_balancing_cost(s, sto.p_f, sto.wind_position());
    checks.push_back(detail::make_check("expected balancing cost", "C^b at StoM schedule", closed, est.mean,
                                        std::max(est.mean_absolute, 1e-12), 1e-3));
  }
  {
    const double closed = expected_total_cost(s, sto);
    const auto o = oracle_sto(s, opt.grid_step);
    const double oc = o ? expected_total_cost(s, *o) : nan;
    checks.push_back(detail::make_check("stochastic dispatch", "expected total cost", closed, oc,
                                        std::fabs(oc), 1e-3));
  }
  {
    const Dispatch vb = dispatch_vb(s, t);
    const Dispatch o = oracle_vb(s, opt.vb_price_tol);
    checks.push_back(detail::make_check("virtual-bidding equilibrium", "wind-side position q", vb.wind_position(),
                                        o.wind_position(), s.cap_stochastic, 5e-3));
  }
  {
    const double closed = expected_total_cost(s, dispatch_cd(s, t));
    const auto o = oracle_cd(s, opt.grid_step);
    const double oc = o ? expected_total_cost(s, *o) : nan;
    checks.push_back(detail::make_check("centralized dispatch", "expected total cost", closed, oc,
                                        std::fabs(oc), 1e-3));
  }
  return checks;
}

inline bool all_pass(const std::vector<VerifyCheck>& checks)
{
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

inline void write_verification(std::ostream& out, const std::vector<VerifyCheck>& checks)
{
  for (const VerifyCheck& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " [" << c.quantity << "]: closed-form "
        << fixed_number(c.closed_form, 6) << ", oracle " << fixed_number(c.oracle, 6) << ", abs "
        << exact_number(c.abs_dev) << ", rel " << exact_number(c.rel_dev) << " (tol " << exact_number(c.tolerance)
        << ")\n";
  }
}

} // namespace meritorder

#endif // MERITORDER_VERIFY_HPP
