#ifndef MERITORDER_POWER_SYSTEM_HPP
#define MERITORDER_POWER_SYSTEM_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "meritorder/errors.hpp"
#include "meritorder/supply_distribution.hpp"

namespace meritorder {

/// Stylized system: one inflexible, one flexible and one stochastic producer
/// serving an inelastic load over an unconstrained network.
struct PowerSystem {
  double cap_inflexible;   // p̄_I, MW
  double cap_flexible;     // p̄_F, MW
  double cap_stochastic;   // p̄_W, MW
  double cost_inflexible;  // c_I, $/MWh
  double cost_flexible;    // c_F
  double cost_up;          // c_F+
  double cost_down;        // c_F-
  double voll;             // v
  double load;             // l, MW
  double expected_wind;    // p̂_W, MW; cap on the stochastic forward schedule in ConvM
  SupplyDistribution supply;
};

/// Builds a system whose expected wind defaults to the supply mean.
inline PowerSystem make_system(double cap_inflexible, double cap_flexible, double cost_inflexible,
                               double cost_flexible, double cost_up, double cost_down, double voll,
                               double load, SupplyDistribution supply,
                               std::optional<double> expected_wind = std::nullopt)
{
  const double cap_w = supply.capacity();
  const double p_hat = expected_wind.value_or(supply.mean());
  return PowerSystem{cap_inflexible, cap_flexible, cap_w,  cost_inflexible, cost_flexible,
                     cost_up,        cost_down,    voll,   load,            p_hat,
                     std::move(supply)};
}

enum class ValidationCode {
  cap_inflexible_not_positive,
  cap_flexible_not_positive,
  cap_stochastic_not_positive,
  capacity_mismatch,
  cost_inflexible_not_positive,
  cost_flexible_not_positive,
  voll_not_above_cost_up,
  cost_up_below_cost_flexible,
  cost_flexible_below_cost_down,
  cost_down_negative,
  load_negative,
  expected_wind_out_of_range,
  inflexible_not_cheaper,
};

inline std::string_view to_string(ValidationCode code)
{
  switch (code) {
  case ValidationCode::cap_inflexible_not_positive: return "cap_inflexible_not_positive";
  case ValidationCode::cap_flexible_not_positive: return "cap_flexible_not_positive";
  case ValidationCode::cap_stochastic_not_positive: return "cap_stochastic_not_positive";
  case ValidationCode::capacity_mismatch: return "capacity_mismatch";
  case ValidationCode::cost_inflexible_not_positive: return "cost_inflexible_not_positive";
  case ValidationCode::cost_flexible_not_positive: return "cost_flexible_not_positive";
  case ValidationCode::voll_not_above_cost_up: return "voll_not_above_cost_up";
  case ValidationCode::cost_up_below_cost_flexible: return "cost_up_below_cost_flexible";
  case ValidationCode::cost_flexible_below_cost_down: return "cost_flexible_below_cost_down";
  case ValidationCode::cost_down_negative: return "cost_down_negative";
  case ValidationCode::load_negative: return "load_negative";
  case ValidationCode::expected_wind_out_of_range: return "expected_wind_out_of_range";
  case ValidationCode::inflexible_not_cheaper: return "inflexible_not_cheaper";
  }
  return "unknown";
}

class ValidationError : public std::invalid_argument {
public:
  ValidationError(ValidationCode code, const std::string& detail)
      : std::invalid_argument(std::string(to_string(code)) + ": " + detail), code_(code)
  {
  }

  ValidationCode code() const noexcept { return code_; }

private:
  ValidationCode code_;
};

/// Checks the cost ordering v > c_F+ >= c_F >= c_F- >= 0, positivity of the
/// capacities and costs, and c_I < c_F. Returns the system unchanged.
inline const PowerSystem& validate(const PowerSystem& s)
{
  const auto fail = [](ValidationCode code, auto&&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    throw ValidationError(code, msg.str());
  };
  const auto finite = [](double x) { return std::isfinite(x); };

  if (!(s.cap_inflexible > 0.0) || !finite(s.cap_inflexible))
    fail(ValidationCode::cap_inflexible_not_positive, "cap_inflexible=", s.cap_inflexible, " must be > 0");
  if (!(s.cap_flexible > 0.0) || !finite(s.cap_flexible))
    fail(ValidationCode::cap_flexible_not_positive, "cap_flexible=", s.cap_flexible, " must be > 0");
  if (!(s.cap_stochastic > 0.0) || !finite(s.cap_stochastic))
    fail(ValidationCode::cap_stochastic_not_positive, "cap_stochastic=", s.cap_stochastic, " must be > 0");
  if (s.cap_stochastic != s.supply.capacity())
    fail(ValidationCode::capacity_mismatch, "cap_stochastic=", s.cap_stochastic,
         " differs from supply capacity ", s.supply.capacity());
  if (!(s.cost_inflexible > 0.0) || !finite(s.cost_inflexible))
    fail(ValidationCode::cost_inflexible_not_positive, "cost_inflexible=", s.cost_inflexible, " must be > 0");
  if (!(s.cost_flexible > 0.0) || !finite(s.cost_flexible))
    fail(ValidationCode::cost_flexible_not_positive, "cost_flexible=", s.cost_flexible, " must be > 0");
  if (!(s.voll > s.cost_up) || !finite(s.voll))
    fail(ValidationCode::voll_not_above_cost_up, "ordering v > c_F+ >= c_F >= c_F- >= 0 violated: voll=",
         s.voll, " must exceed cost_up=", s.cost_up);
  if (!(s.cost_up >= s.cost_flexible))
    fail(ValidationCode::cost_up_below_cost_flexible, "ordering v > c_F+ >= c_F >= c_F- >= 0 violated: cost_up=",
         s.cost_up, " is below cost_flexible=", s.cost_flexible);
  if (!(s.cost_flexible >= s.cost_down))
    fail(ValidationCode::cost_flexible_below_cost_down,
         "ordering v > c_F+ >= c_F >= c_F- >= 0 violated: cost_down=", s.cost_down,
         " exceeds cost_flexible=", s.cost_flexible);
  if (!(s.cost_down >= 0.0))
    fail(ValidationCode::cost_down_negative, "ordering v > c_F+ >= c_F >= c_F- >= 0 violated: cost_down=",
         s.cost_down, " is negative");
  if (!(s.load >= 0.0) || !finite(s.load))
    fail(ValidationCode::load_negative, "load=", s.load, " must be >= 0");
  if (!(s.expected_wind >= 0.0) || !(s.expected_wind <= s.cap_stochastic))
    fail(ValidationCode::expected_wind_out_of_range, "expected_wind=", s.expected_wind,
         " must lie in [0, cap_stochastic=", s.cap_stochastic, "]");
  if (!(s.cost_inflexible < s.cost_flexible))
    fail(ValidationCode::inflexible_not_cheaper, "cost_inflexible=", s.cost_inflexible,
         " must be below cost_flexible=", s.cost_flexible);
  return s;
}

/// Forward schedule. p_v is the virtual bid, zero outside ConvM-VB.
/// rule names the row of the dispatch table that produced it (0 when none).
struct Dispatch {
  double p_w = 0.0;
  double p_i = 0.0;
  double p_f = 0.0;
  double p_v = 0.0;
  int rule = 0;

  double wind_position() const { return p_w + p_v; }
};

/// Real-time recourse for one realization w of the stochastic supply.
struct Redispatch {
  double up = 0.0;
  double down = 0.0;
  double wind_adjust = 0.0;
  double virtual_adjust = 0.0;
  double shed = 0.0;
  double scenario = 0.0;
};

enum class Market { conv, sto, vb, cd };

inline constexpr Market all_markets[] = {Market::sto, Market::conv, Market::vb, Market::cd};

inline std::string_view display_name(Market m)
{
  switch (m) {
  case Market::conv: return "ConvM";
  case Market::sto: return "StoM";
  case Market::vb: return "ConvM-VB";
  case Market::cd: return "ConvM-CD";
  }
  return "unknown";
}

inline std::string_view short_name(Market m)
{
  switch (m) {
  case Market::conv: return "conv";
  case Market::sto: return "sto";
  case Market::vb: return "vb";
  case Market::cd: return "cd";
  }
  return "unknown";
}

inline std::optional<Market> parse_market(std::string_view text)
{
  for (Market m : all_markets) {
    if (text == short_name(m) || text == display_name(m)) return m;
  }
  return std::nullopt;
}

/// Result of one market clearing. An empty dispatch marks an infeasible
/// forward stage; the numeric fields are then NaN.
struct MarketOutcome {
  Market market = Market::sto;
  std::optional<Dispatch> dispatch;
  double forward_price = 0.0;
  double expected_balancing_price = 0.0;
  double expected_total_cost = 0.0;
  double efficiency_gap = 0.0;  // percent over the StoM cost

  bool feasible() const { return dispatch.has_value(); }
};

} // namespace meritorder

#endif // MERITORDER_POWER_SYSTEM_HPP
