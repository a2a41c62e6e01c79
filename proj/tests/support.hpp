#ifndef MERITORDER_TESTS_SUPPORT_HPP
#define MERITORDER_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "meritorder/config.hpp"
#include "meritorder/markets.hpp"

namespace meritorder::testing {

inline SupplyDistribution reference_wind(double kappa = 0.5)
{
  return beta_from_capacity_factor({kappa, one_hour_sigma_coeffs, 100.0});
}

/// Table rows of the worked examples, v = 1000 and p̂_W = 50 throughout.
inline PowerSystem reference_case(char name)
{
  struct Row {
    double pi, pf, ci, cf, cu, cd, l;
  };
  Row r{};
  switch (name) {
  case 'a': r = {500, 500, 30, 35, 35, 30, 250}; break;
  case 'b': r = {500, 500, 30, 35, 40, 30, 250}; break;
  case 'c': r = {100, 50, 30, 35, 35, 30, 170}; break;
  case 'd': r = {500, 500, 30, 35, 40, 35, 250}; break;
  case 'e': r = {100, 50, 30, 35, 40, 35, 155}; break;
  default: throw std::invalid_argument(std::string("no such case: ") + name);
  }
  return make_system(r.pi, r.pf, r.ci, r.cf, r.cu, r.cd, 1000.0, r.l, reference_wind(), 50.0);
}

inline std::string config_path(const std::string& name)
{
  return std::string(MERITORDER_CONFIG_DIR) + "/" + name;
}

enum class Regulation { any, free_down, free_up, symmetric };
enum class SupplyMix { mixed, continuous, discrete };

struct Constraints {
  Regulation regulation = Regulation::any;
  SupplyMix supply = SupplyMix::mixed;
  bool capacity_adequate = false;   // p̄_F >= p̄_W
  bool inflexible_covers_load = false;  // p̄_I >= l
};

/// Random systems satisfying the cost ordering with c_I < c_F. Capacities
/// are log-uniform, costs are integers, and the load lies in
/// [0, p̂_W + p̄_I + p̄_F] so that every market is feasible.
class SystemGenerator {
public:
  explicit SystemGenerator(std::uint64_t seed) : rng_(seed) {}

  PowerSystem next(const Constraints& c = {})
  {
    const double cap_w = log_uniform(20.0, 300.0);
    const double cap_i = log_uniform(20.0, 500.0);
    const double cap_f = c.capacity_adequate ? cap_w * uniform(1.0, 3.0) : log_uniform(10.0, 300.0);

    const double c_i = integer(1, 60);
    const double c_f = c_i + integer(1, 40);
    double c_up = c_f + integer(0, 40);
    double c_down = integer(0, static_cast<int>(c_f));
    switch (c.regulation) {
    case Regulation::free_down:
      c_down = c_f;
      if (c_up == c_f) c_up += integer(1, 40);
      break;
    case Regulation::free_up:
      c_up = c_f;
      if (c_down == c_f) c_down = integer(0, static_cast<int>(c_f) - 1);
      break;
    case Regulation::symmetric:
      c_up = c_down = c_f;
      break;
    case Regulation::any:
      break;
    }
    const double v = c_up + integer(10, 1500);

    SupplyDistribution supply = draw_supply(cap_w, c.supply);
    const double p_hat = supply.mean();
    double load = uniform(0.0, p_hat + cap_i + cap_f);
    if (c.inflexible_covers_load) load = uniform(0.0, cap_i);
    return make_system(cap_i, cap_f, c_i, c_f, c_up, c_down, v, load, std::move(supply), p_hat);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng_); }
  std::mt19937_64& engine() { return rng_; }

private:
  SupplyDistribution draw_supply(double cap, SupplyMix mix)
  {
    int kind = 0;
    const double u = uniform(0.0, 1.0);
    if (mix == SupplyMix::continuous) kind = u < 0.7 ? 0 : 1;
    else if (mix == SupplyMix::discrete) kind = u < 0.85 ? 2 : 3;
    else kind = u < 0.45 ? 0 : u < 0.65 ? 1 : u < 0.95 ? 2 : 3;

    switch (kind) {
    case 0:
      return SupplyDistribution::scaled_beta(log_uniform(0.6, 15.0), log_uniform(0.6, 15.0), cap);
    case 1:
      return SupplyDistribution::uniform(cap);
    case 2: {
      const int n = static_cast<int>(integer(2, 6));
      std::vector<double> values;
      while (static_cast<int>(values.size()) < n) {
        const double x = std::floor(uniform(0.0, cap) * 2.0) / 2.0;
        if (std::find(values.begin(), values.end(), x) == values.end()) values.push_back(x);
      }
      std::sort(values.begin(), values.end());
      std::vector<double> weights;
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        weights.push_back(uniform(0.05, 1.0));
        total += weights.back();
      }
      std::vector<Atom> atoms;
      for (int i = 0; i < n; ++i) atoms.push_back({values[static_cast<std::size_t>(i)], weights[static_cast<std::size_t>(i)] / total});
      return SupplyDistribution::discrete(std::move(atoms), cap);
    }
    default:
      return SupplyDistribution::degenerate(std::floor(uniform(0.0, cap)), cap);
    }
  }

  std::mt19937_64 rng_;
};

inline double relative_difference(double a, double b, double floor = 1e-9)
{
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

inline bool violates_merit_order(const PowerSystem& s, const Dispatch& d)
{
  const double eps = 1e-9 * std::max(1.0, s.load);
  return d.p_f > eps && d.p_i < s.cap_inflexible - eps;
}

} // namespace meritorder::testing

#endif // MERITORDER_TESTS_SUPPORT_HPP
