#ifndef MERITORDER_REPORT_HPP
#define MERITORDER_REPORT_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meritorder/errors.hpp"
#include "meritorder/power_system.hpp"
#include "meritorder/thresholds.hpp"

namespace meritorder {

/// Fixed CSV column set, in order.
inline constexpr const char* csv_header =
    "axis,market,status,rule,p_w,p_i,p_f,p_v,forward_price,expected_balancing_price,cost,gap_pct";

/// Shortest decimal text that parses back to the same double.
inline std::string exact_number(double x)
{
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string fixed_number(double x, int decimals = 4)
{
  if (std::isnan(x)) return "-";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << x;
  return out.str();
}

struct ReportRow {
  double axis;
  MarketOutcome outcome;
};

inline void write_csv_row(std::ostream& out, const ReportRow& row)
{
  const MarketOutcome& o = row.outcome;
  out << exact_number(row.axis) << ',' << display_name(o.market) << ',';
  if (!o.dispatch) {
    out << "infeasible,,,,,,,,,\n";
    return;
  }
  const Dispatch& d = *o.dispatch;
  out << "ok," << d.rule << ',' << exact_number(d.p_w) << ',' << exact_number(d.p_i) << ','
      << exact_number(d.p_f) << ',' << exact_number(d.p_v) << ',' << exact_number(o.forward_price) << ','
      << exact_number(o.expected_balancing_price) << ',' << exact_number(o.expected_total_cost) << ','
      << exact_number(o.efficiency_gap) << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<ReportRow>& rows)
{
  out << csv_header << '\n';
  for (const ReportRow& r : rows) write_csv_row(out, r);
}

inline void write_table(std::ostream& out, const std::vector<MarketOutcome>& outcomes)
{
  const char* heads[] = {"market", "rule", "p_w", "p_i", "p_f", "p_v", "lambda_f", "E[lambda_b]", "cost", "gap_%"};
  std::vector<std::vector<std::string>> cells;
  for (const MarketOutcome& o : outcomes) {
    std::vector<std::string> row{std::string(display_name(o.market))};
    if (!o.dispatch) {
      row.push_back("infeasible");
      for (int i = 0; i < 8; ++i) row.emplace_back("-");
    } else {
      const Dispatch& d = *o.dispatch;
      row.push_back(std::to_string(d.rule));
      for (double x : {d.p_w, d.p_i, d.p_f, d.p_v, o.forward_price, o.expected_balancing_price,
                       o.expected_total_cost, o.efficiency_gap}) {
        row.push_back(fixed_number(x));
      }
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width;
  for (const char* h : heads) width.push_back(std::string(h).size());
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  const auto emit = [&](const auto& row) {
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string text(row[i]);
      if (i == 0) out << std::left << std::setw(static_cast<int>(width[i])) << text;
      else out << "  " << std::right << std::setw(static_cast<int>(width[i])) << text;
    }
    out << '\n';
  };
  emit(heads);
  for (const auto& row : cells) emit(row);
}

inline nlohmann::json to_json(const MarketOutcome& o)
{
  nlohmann::json j;
  j["market"] = std::string(display_name(o.market));
  if (!o.dispatch) {
    j["status"] = "infeasible";
    return j;
  }
  const Dispatch& d = *o.dispatch;
  j["status"] = "ok";
  j["rule"] = d.rule;
  j["dispatch"] = {{"p_w", d.p_w}, {"p_i", d.p_i}, {"p_f", d.p_f}, {"p_v", d.p_v}};
  j["forward_price"] = o.forward_price;
  j["expected_balancing_price"] = o.expected_balancing_price;
  j["expected_total_cost"] = o.expected_total_cost;
  j["efficiency_gap"] = o.efficiency_gap;
  return j;
}

namespace detail {

inline double number_or_nan(const nlohmann::json& j)
{
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

} // namespace detail

inline MarketOutcome outcome_from_json(const nlohmann::json& j)
{
  MarketOutcome o;
  const auto market = parse_market(j.at("market").get<std::string>());
  if (!market) throw ConfigError("unknown market in report: " + j.at("market").get<std::string>());
  o.market = *market;
  if (j.at("status").get<std::string>() != "ok") {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    o.forward_price = o.expected_balancing_price = o.expected_total_cost = o.efficiency_gap = nan;
    return o;
  }
  const auto& d = j.at("dispatch");
  o.dispatch = Dispatch{d.at("p_w").get<double>(), d.at("p_i").get<double>(), d.at("p_f").get<double>(),
                        d.at("p_v").get<double>(), j.at("rule").get<int>()};
  o.forward_price = detail::number_or_nan(j.at("forward_price"));
  o.expected_balancing_price = detail::number_or_nan(j.at("expected_balancing_price"));
  o.expected_total_cost = detail::number_or_nan(j.at("expected_total_cost"));
  o.efficiency_gap = detail::number_or_nan(j.at("efficiency_gap"));
  return o;
}

inline nlohmann::json to_json(const std::vector<MarketOutcome>& outcomes)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const MarketOutcome& o : outcomes) arr.push_back(to_json(o));
  return arr;
}

inline void write_thresholds(std::ostream& out, const PowerSystem& s, const Thresholds& t, int active_rule)
{
  const auto line = [&](const char* name, double v) { out << std::left << std::setw(6) << name << fixed_number(v) << '\n'; };
  line("l1", t.l1);
  line("l2", t.l2);
  line("l3", t.l3);
  line("l4", t.l4);
  line("l5", t.l5);
  line("l6", t.l6);
  out << std::left << std::setw(6) << "l8" << (t.l8 ? fixed_number(*t.l8) : std::string("undefined")) << '\n';
  out << "branch: " << (t.merit_branch() ? "l1 >= l2" : t.l1_rule < t.l2 ? "l1 < l2" : "l1 = l2 on an atom");
  if (!t.merit_branch()) out << (t.l3 <= t.l1_rule + s.cap_flexible ? ", l3 <= l1+pF" : ", l3 > l1+pF");
  out << '\n';
  out << "symmetric regulation (c_up = c_down): " << (t.symmetric_regulation ? "yes" : "no") << '\n';
  out << "capacity adequate (pF >= pW): " << (s.cap_flexible >= s.cap_stochastic ? "yes" : "no") << '\n';
  out << "stochastic dispatch rule at load " << fixed_number(s.load) << ": " << active_rule << '\n';
}

} // namespace meritorder

#endif // MERITORDER_REPORT_HPP
