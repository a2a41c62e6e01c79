#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meritorder/config.hpp"
#include "meritorder/markets.hpp"
#include "meritorder/report.hpp"
#include "meritorder/sweep.hpp"
#include "meritorder/verify.hpp"

namespace {

using namespace meritorder;

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_bad_input = 2;

std::vector<Market> parse_markets(const std::string& list)
{
  if (list.empty()) return {std::begin(all_markets), std::end(all_markets)};
  std::vector<Market> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto m = parse_market(item);
    if (!m) throw ConfigError("--markets: unknown market '" + item + "' (expected conv, sto, vb, cd)");
    out.push_back(*m);
  }
  return out;
}

int cmd_solve(const std::string& config, const std::string& markets, const std::string& format)
{
  const CaseConfig cfg = load_config(config);
  const auto selected = parse_markets(markets);
  const auto outcomes = solve_markets(cfg.system, selected);
  if (format == "json") {
    std::cout << to_json(outcomes).dump(2) << '\n';
  } else if (format == "csv") {
    std::vector<ReportRow> rows;
    for (const auto& o : outcomes) rows.push_back({cfg.system.load, o});
    write_csv(std::cout, rows);
  } else {
    write_table(std::cout, outcomes);
  }
  return exit_ok;
}

int cmd_sweep(const std::string& config, const std::string& axis, double from, double to, double step,
              const std::string& markets, const std::string& out_path)
{
  const CaseConfig cfg = load_config(config);
  const SweepAxis which = axis == "kappa" ? SweepAxis::kappa : SweepAxis::load;
  if (which == SweepAxis::kappa && !cfg.forecast) {
    throw ConfigError("forecast_model: --axis kappa needs a forecast_model block in the config");
  }
  const auto points = sweep_points(from, to, step);
  const auto selected = parse_markets(markets);
  const auto rows = run_sweep(cfg, which, points, selected);
  if (out_path.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError(out_path + ": cannot open for writing");
    write_csv(out, rows);
  }
  return exit_ok;
}

int cmd_verify(const std::string& config, double grid_step, int nodes, double corrupt_l2)
{
  const CaseConfig cfg = load_config(config);
  Thresholds t = compute_thresholds(cfg.system);
  t.l2 += corrupt_l2;
  VerifyOptions opt;
  opt.grid_step = grid_step;
  opt.nodes = nodes;
  const auto checks = run_verification(cfg.system, t, opt);
  write_verification(std::cout, checks);
  return all_pass(checks) ? exit_ok : exit_verify_failed;
}

int cmd_thresholds(const std::string& config)
{
  const CaseConfig cfg = load_config(config);
  const Thresholds t = compute_thresholds(cfg.system);
  write_thresholds(std::cout, cfg.system, t, sto_rule(cfg.system, t));
  return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Closed-form clearing of conventional, stochastic, virtual-bidding and centralized-dispatch markets"};
  app.require_subcommand(1);

  std::string config;
  std::string markets;
  std::string format = "table";
  std::string axis = "load";
  std::string out_path;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  double grid_step = 0.25;
  int nodes = 20000;
  double corrupt_l2 = 0.0;

  auto* solve = app.add_subcommand("solve", "Solve one case for the selected markets");
  solve->add_option("--config", config, "Case file (JSON)")->required();
  solve->add_option("--markets", markets, "Comma list of conv,sto,vb,cd (default: all)");
  solve->add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));

  auto* sweep = app.add_subcommand("sweep", "Sweep load or capacity factor and write CSV");
  sweep->add_option("--config", config, "Case file (JSON)")->required();
  sweep->add_option("--axis", axis, "load or kappa")->check(CLI::IsMember({"load", "kappa"}));
  sweep->add_option("--from", from, "First axis value")->required();
  sweep->add_option("--to", to, "Last axis value")->required();
  sweep->add_option("--step", step, "Axis increment")->required();
  sweep->add_option("--markets", markets, "Comma list of conv,sto,vb,cd (default: all)");
  sweep->add_option("--out", out_path, "CSV output path (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Check closed forms against brute-force oracles");
  verify->add_option("--config", config, "Case file (JSON)")->required();
  verify->add_option("--grid-step", grid_step, "Oracle grid step in MW")->check(CLI::PositiveNumber);
  verify->add_option("--nodes", nodes, "Quantile nodes for the recourse oracle")->check(CLI::Range(100, 100000000));
  verify->add_option("--corrupt-l2", corrupt_l2, "Shift l2 before verifying (negative control)")->group("");

  auto* thresholds = app.add_subcommand("thresholds", "Print characteristic loads and branch flags");
  thresholds->add_option("--config", config, "Case file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_bad_input;
  }

  try {
    if (solve->parsed()) return cmd_solve(config, markets, format);
    if (sweep->parsed()) return cmd_sweep(config, axis, from, to, step, markets, out_path);
    if (verify->parsed()) return cmd_verify(config, grid_step, nodes, corrupt_l2);
    if (thresholds->parsed()) return cmd_thresholds(config);
  } catch (const ValidationError& e) {
    std::cerr << "invalid system: " << e.what() << '\n';
    return exit_bad_input;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_bad_input;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return exit_bad_input;
  }
  return exit_bad_input;
}
