#ifndef MERITORDER_CONFIG_HPP
#define MERITORDER_CONFIG_HPP

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "meritorder/errors.hpp"
#include "meritorder/power_system.hpp"
#include "meritorder/supply_distribution.hpp"

namespace meritorder {

/// A parsed case file. When a forecast model is present the supply is the
/// moment-matched Beta law it implies.
struct CaseConfig {
  PowerSystem system;
  std::optional<WindForecastModel> forecast;
  bool expected_wind_pinned = false;  // set explicitly rather than defaulted
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(where + "." + item.key() + ": unknown field");
    }
  }
}

inline const json& require_object(const json& parent, const std::string& key, const std::string& where)
{
  if (!parent.contains(key)) throw ConfigError(where + "." + key + ": missing block");
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(where + "." + key + ": expected an object");
  return v;
}

inline double number_field(const json& obj, const std::string& key, const std::string& where)
{
  if (!obj.contains(key)) throw ConfigError(where + "." + key + ": missing field");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& where)
{
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number_field(obj, key, where);
}

inline SupplyDistribution parse_supply(const json& js, double capacity)
{
  const std::string where = "supply";
  if (!js.contains("kind") || !js.at("kind").is_string()) {
    throw ConfigError("supply.kind: expected one of scaled-beta, uniform, discrete, degenerate");
  }
  const auto kind = js.at("kind").get<std::string>();
  if (const auto cap = optional_number(js, "capacity", where); cap && *cap != capacity) {
    throw ConfigError("supply.capacity: must equal system.cap_stochastic");
  }
  try {
    if (kind == "scaled-beta") {
      reject_unknown_keys(js, where, {"kind", "capacity", "alpha", "beta"});
      return SupplyDistribution::scaled_beta(number_field(js, "alpha", where), number_field(js, "beta", where),
                                             capacity);
    }
    if (kind == "uniform") {
      reject_unknown_keys(js, where, {"kind", "capacity"});
      return SupplyDistribution::uniform(capacity);
    }
    if (kind == "degenerate") {
      reject_unknown_keys(js, where, {"kind", "capacity", "point"});
      return SupplyDistribution::degenerate(number_field(js, "point", where), capacity);
    }
    if (kind == "discrete") {
      reject_unknown_keys(js, where, {"kind", "capacity", "atoms"});
      if (!js.contains("atoms") || !js.at("atoms").is_array()) {
        throw ConfigError("supply.atoms: expected an array of [value, probability] pairs");
      }
      std::vector<Atom> atoms;
      for (const json& a : js.at("atoms")) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
          throw ConfigError("supply.atoms: each atom must be [value, probability]");
        }
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      return SupplyDistribution::discrete(std::move(atoms), capacity);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("supply: ") + e.what());
  }
  throw ConfigError("supply.kind: unknown kind '" + kind + "'");
}

} // namespace detail

/// Parses and validates a case document. Throws ConfigError for malformed
/// input and ValidationError for systems that break the cost ordering.
inline CaseConfig parse_config(const nlohmann::json& doc)
{
  using detail::number_field;
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  detail::reject_unknown_keys(doc, "config", {"system", "supply", "forecast_model"});
  const auto& sys = detail::require_object(doc, "system", "config");
  detail::reject_unknown_keys(sys, "system",
                              {"cap_inflexible", "cap_flexible", "cap_stochastic", "cost_inflexible",
                               "cost_flexible", "cost_up", "cost_down", "voll", "load", "expected_wind"});
  const double cap_w = number_field(sys, "cap_stochastic", "system");

  std::optional<WindForecastModel> forecast;
  std::optional<SupplyDistribution> supply;
  if (doc.contains("forecast_model")) {
    const auto& fm = detail::require_object(doc, "forecast_model", "config");
    detail::reject_unknown_keys(fm, "forecast_model", {"kappa", "coeffs"});
    std::pair<double, double> coeffs = one_hour_sigma_coeffs;
    if (fm.contains("coeffs")) {
      const auto& c = fm.at("coeffs");
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
        throw ConfigError("forecast_model.coeffs: expected [a0, a1]");
      }
      coeffs = {c[0].get<double>(), c[1].get<double>()};
    }
    forecast = WindForecastModel{number_field(fm, "kappa", "forecast_model"), coeffs, cap_w};
    if (doc.contains("supply")) {
      throw ConfigError("supply: give either a supply block or a forecast_model, not both");
    }
    try {
      supply = beta_from_capacity_factor(*forecast);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("forecast_model: ") + e.what());
    }
  } else {
    if (!(cap_w > 0.0)) throw ConfigError("system.cap_stochastic: must be > 0");
    supply = detail::parse_supply(detail::require_object(doc, "supply", "config"), cap_w);
  }

  const auto pinned = detail::optional_number(sys, "expected_wind", "system");
  CaseConfig cfg{make_system(number_field(sys, "cap_inflexible", "system"),
                             number_field(sys, "cap_flexible", "system"),
                             number_field(sys, "cost_inflexible", "system"),
                             number_field(sys, "cost_flexible", "system"), number_field(sys, "cost_up", "system"),
                             number_field(sys, "cost_down", "system"), number_field(sys, "voll", "system"),
                             number_field(sys, "load", "system"), std::move(*supply),
                             pinned ? pinned : forecast ? std::optional(forecast->kappa * cap_w) : std::nullopt),
                 forecast, pinned.has_value()};
  validate(cfg.system);
  return cfg;
}

inline CaseConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

inline PowerSystem with_load(PowerSystem s, double load)
{
  s.load = load;
  return s;
}

/// Re-derives the supply for a different capacity factor. The expected wind
/// follows kappa * p̄_W unless the config pinned it.
inline PowerSystem with_kappa(const CaseConfig& cfg, double kappa)
{
  if (!cfg.forecast) throw ConfigError("forecast_model: a kappa sweep needs a forecast_model block");
  WindForecastModel model = *cfg.forecast;
  model.kappa = kappa;
  PowerSystem s = cfg.system;
  s.supply = beta_from_capacity_factor(model);
  if (!cfg.expected_wind_pinned) s.expected_wind = kappa * s.cap_stochastic;
  return s;
}

} // namespace meritorder

#endif // MERITORDER_CONFIG_HPP
