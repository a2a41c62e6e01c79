#ifndef MERITORDER_SUPPLY_DISTRIBUTION_HPP
#define MERITORDER_SUPPLY_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meritorder/errors.hpp"
#include "meritorder/quadrature.hpp"
#include "meritorder/special_functions.hpp"

namespace meritorder {

enum class SupplyKind { scaled_beta, uniform, discrete, degenerate };

inline std::string_view to_string(SupplyKind kind)
{
  switch (kind) {
  case SupplyKind::scaled_beta: return "scaled-beta";
  case SupplyKind::uniform: return "uniform";
  case SupplyKind::discrete: return "discrete";
  case SupplyKind::degenerate: return "degenerate";
  }
  return "unknown";
}

struct Atom {
  double value;        // MW
  double probability;
};

enum class IntegrationMethod { analytic, quadrature };

/// Probability law of the stochastic production W, supported on [0, capacity].
///
/// The CDF is extended to the whole real line (F = 0 below zero, F = 1 from
/// the capacity on), so integrals whose limits fall outside the support need
/// no special casing by callers. Instances are immutable.
class SupplyDistribution {
public:
  static SupplyDistribution scaled_beta(double alpha, double beta, double capacity)
  {
    require_capacity(capacity);
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
      throw DomainError("beta shape parameters must be positive and finite");
    }
    SupplyDistribution d(SupplyKind::scaled_beta, capacity);
    d.alpha_ = alpha;
    d.beta_ = beta;
    d.log_beta_ = log_beta(alpha, beta);
    return d;
  }

  static SupplyDistribution uniform(double capacity)
  {
    require_capacity(capacity);
    return SupplyDistribution(SupplyKind::uniform, capacity);
  }

  static SupplyDistribution discrete(std::vector<Atom> atoms, double capacity)
  {
    require_capacity(capacity);
    if (atoms.empty()) throw DomainError("discrete distribution needs at least one atom");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Atom& a = atoms[i];
      if (!(a.value >= 0.0) || !(a.value <= capacity)) {
        throw DomainError("discrete atom lies outside [0, capacity]");
      }
      if (!(a.probability >= 0.0) || !(a.probability <= 1.0)) {
        throw DomainError("discrete atom probability must lie in [0, 1]");
      }
      if (i > 0 && !(a.value > atoms[i - 1].value)) {
        throw DomainError("discrete atoms must be strictly increasing in value");
      }
      total += a.probability;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "discrete atom probabilities sum to " << total << ", expected 1";
      throw DomainError(msg.str());
    }
    SupplyDistribution d(SupplyKind::discrete, capacity);
    d.values_.reserve(atoms.size());
    d.cumulative_.reserve(atoms.size());
    double running = 0.0;
    for (const Atom& a : atoms) {
      running += a.probability;
      d.values_.push_back(a.value);
      d.cumulative_.push_back(running);
    }
    d.cumulative_.back() = 1.0;
    d.atoms_ = std::move(atoms);
    return d;
  }

  /// W is known with certainty; modelled as a one-atom discrete law.
  static SupplyDistribution degenerate(double point, double capacity)
  {
    SupplyDistribution d = discrete({Atom{point, 1.0}}, capacity);
    d.kind_ = SupplyKind::degenerate;
    return d;
  }

  SupplyKind kind() const { return kind_; }
  double capacity() const { return capacity_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::span<const Atom> atoms() const { return atoms_; }
  bool is_continuous() const { return kind_ == SupplyKind::scaled_beta || kind_ == SupplyKind::uniform; }

  double cdf(double x) const
  {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.0) return 0.0;
    if (x >= capacity_) return 1.0;
    switch (kind_) {
    case SupplyKind::uniform:
      return x / capacity_;
    case SupplyKind::scaled_beta:
      return regularized_incomplete_beta(alpha_, beta_, x / capacity_, log_beta_);
    case SupplyKind::discrete:
    case SupplyKind::degenerate: {
      const auto it = std::upper_bound(values_.begin(), values_.end(), x);
      const auto k = static_cast<std::size_t>(it - values_.begin());
      return k == 0 ? 0.0 : cumulative_[k - 1];
    }
    }
    return 0.0;
  }

  /// Density for continuous kinds; zero for discrete ones (see point_mass).
  double density(double x) const
  {
    if (!(x >= 0.0) || !(x <= capacity_)) return 0.0;
    switch (kind_) {
    case SupplyKind::uniform:
      return 1.0 / capacity_;
    case SupplyKind::scaled_beta: {
      const double u = x / capacity_;
      if (u <= 0.0 || u >= 1.0) {
        const double edge_shape = u <= 0.0 ? alpha_ : beta_;
        if (edge_shape < 1.0) return std::numeric_limits<double>::infinity();
        if (edge_shape > 1.0) return 0.0;
        return std::exp(-log_beta_) / capacity_;
      }
      return std::exp(log_beta_kernel(alpha_ - 1.0, beta_ - 1.0, u, log_beta_)) / capacity_;
    }
    default:
      return 0.0;
    }
  }

  double point_mass(double x) const
  {
    if (is_continuous()) return 0.0;
    const auto it = std::lower_bound(values_.begin(), values_.end(), x);
    if (it == values_.end() || *it != x) return 0.0;
    return atoms_[static_cast<std::size_t>(it - values_.begin())].probability;
  }

  /// Generalized inverse inf{x : F(x) >= alpha}, clamped to [0, capacity].
  double quantile(double alpha) const
  {
    if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
      throw DomainError("quantile level must lie in [0, 1]");
    }
    if (alpha == 0.0) return 0.0;
    switch (kind_) {
    case SupplyKind::uniform:
      return round_up_to_level(alpha * capacity_, alpha);
    case SupplyKind::scaled_beta:
      return round_up_to_level(capacity_ * beta_quantile(alpha), alpha);
    case SupplyKind::discrete:
    case SupplyKind::degenerate: {
      const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), alpha);
      const auto k = static_cast<std::size_t>(it - cumulative_.begin());
      return values_[std::min(k, values_.size() - 1)];
    }
    }
    return 0.0;
  }

  /// Integral of the extended CDF from minus infinity to x, i.e. E[(x - W)^+].
  double integral_below(double x) const
  {
    if (!(x > 0.0)) return 0.0;
    if (x >= capacity_) return x - mean();
    switch (kind_) {
    case SupplyKind::uniform:
      return 0.5 * x * x / capacity_;
    case SupplyKind::scaled_beta:
      return x * cdf(x) - partial_expectation(x);
    case SupplyKind::discrete:
    case SupplyKind::degenerate: {
      double acc = 0.0;
      for (const Atom& a : atoms_) {
        if (a.value > x) break;
        acc += a.probability * (x - a.value);
      }
      return acc;
    }
    }
    return 0.0;
  }

  /// E[W 1{W <= x}].
  double partial_expectation(double x) const
  {
    if (x < 0.0) return 0.0;
    if (x >= capacity_) return mean();
    switch (kind_) {
    case SupplyKind::uniform:
      return 0.5 * x * x / capacity_;
    case SupplyKind::scaled_beta: {
      const double u = x / capacity_;
      if (u <= 0.0) return 0.0;
      // I_u(a + 1, b) = I_u(a, b) - u^a (1 - u)^b / (a B(a, b))
      const double shifted = regularized_incomplete_beta(alpha_, beta_, u, log_beta_)
                           - std::exp(log_beta_kernel(alpha_, beta_, u, log_beta_)) / alpha_;
      return mean() * std::max(shifted, 0.0);
    }
    case SupplyKind::discrete:
    case SupplyKind::degenerate: {
      double acc = 0.0;
      for (const Atom& a : atoms_) {
        if (a.value > x) break;
        acc += a.probability * a.value;
      }
      return acc;
    }
    }
    return 0.0;
  }

  /// Integral of the extended CDF over [a, b]; empty or reversed ranges give 0.
  double cdf_integral(double a, double b, IntegrationMethod method = IntegrationMethod::analytic) const
  {
    if (!(b > a)) return 0.0;
    if (method == IntegrationMethod::quadrature) {
      const std::vector<double> cuts = kinks();
      return piecewise_simpson([this](double s) { return cdf(s); }, a, b, cuts, 1e-9);
    }
    return integral_below(b) - integral_below(a);
  }

  double mean() const
  {
    switch (kind_) {
    case SupplyKind::uniform:
      return 0.5 * capacity_;
    case SupplyKind::scaled_beta:
      return capacity_ * alpha_ / (alpha_ + beta_);
    case SupplyKind::discrete:
    case SupplyKind::degenerate: {
      double acc = 0.0;
      for (const Atom& a : atoms_) acc += a.probability * a.value;
      return acc;
    }
    }
    return 0.0;
  }

  /// Points where F is not smooth: the support ends and every atom.
  std::vector<double> kinks() const
  {
    std::vector<double> out{0.0, capacity_};
    out.insert(out.end(), values_.begin(), values_.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  SupplyDistribution(SupplyKind kind, double capacity) : kind_(kind), capacity_(capacity) {}

  static void require_capacity(double capacity)
  {
    if (!(capacity > 0.0) || !std::isfinite(capacity)) {
      throw DomainError("supply capacity must be positive and finite");
    }
  }

  // Safeguarded Newton on I_u(a, b) = p over the unit interval.
  // Scaling by the capacity can leave cdf(x) a rounding error below alpha;
  // step up to the first double where the generalized-inverse property holds.
  double round_up_to_level(double x, double alpha) const
  {
    for (int i = 0; i < 64 && x < capacity_ && cdf(x) < alpha; ++i) x = std::nextafter(x, capacity_);
    return x;
  }

  double beta_quantile(double p) const
  {
    if (p >= 1.0) return 1.0;
    const auto unit_cdf = [this](double u) {
      return regularized_incomplete_beta(alpha_, beta_, u, log_beta_);
    };
    double lo = 0.0;
    double hi = 1.0;
    double u = alpha_ / (alpha_ + beta_);
    for (int iter = 0; iter < 300; ++iter) {
      const double fu = unit_cdf(u);
      if (fu < p) lo = u;
      else hi = u;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(hi, 1e-300)) break;
      const double dens = std::exp(log_beta_kernel(alpha_ - 1.0, beta_ - 1.0, u, log_beta_));
      double next = u - (fu - p) / dens;
      if (!(dens > 0.0) || !std::isfinite(next) || !(next > lo && next < hi)) {
        next = 0.5 * (lo + hi);
      }
      if (std::fabs(next - u) <= 1e-16 * std::max(u, 1e-300)) {
        u = next;
        break;
      }
      u = next;
    }
    // Return a point that satisfies F(u) >= p, as the generalized inverse does.
    return unit_cdf(u) >= p ? u : hi;
  }

  SupplyKind kind_;
  double capacity_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double log_beta_ = 0.0;
  std::vector<Atom> atoms_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// Affine link between the mean capacity factor of a wind farm and the
/// standard deviation of its forecast error: sigma = a0 + a1 * kappa.
struct WindForecastModel {
  double kappa;
  std::pair<double, double> sigma_coeffs;
  double capacity;

  double sigma() const { return sigma_coeffs.first + sigma_coeffs.second * kappa; }
};

/// Coefficients of the one-hour-ahead forecast horizon.
inline constexpr std::pair<double, double> one_hour_sigma_coeffs{0.01837, 0.20355};

/// Moment-matched Beta law for the capacity factor, scaled to the farm capacity.
inline SupplyDistribution beta_from_capacity_factor(const WindForecastModel& model)
{
  const double kappa = model.kappa;
  const double sigma = model.sigma();
  if (!(kappa > 0.0) || !(kappa < 1.0)) {
    std::ostringstream msg;
    msg << "capacity factor kappa=" << kappa << " must lie strictly inside (0, 1)";
    throw DomainError(msg.str());
  }
  const double var = sigma * sigma;
  if (!(sigma > 0.0) || !(var < kappa * (1.0 - kappa))) {
    std::ostringstream msg;
    msg << "infeasible Beta moments: sigma=" << sigma << " at kappa=" << kappa
        << " requires 0 < sigma^2 < kappa(1-kappa)=" << kappa * (1.0 - kappa);
    throw DomainError(msg.str());
  }
  const double alpha = (1.0 - kappa) * kappa * kappa / var - kappa;
  const double beta = alpha * (1.0 - kappa) / kappa;
  return SupplyDistribution::scaled_beta(alpha, beta, model.capacity);
}

} // namespace meritorder

#endif // MERITORDER_SUPPLY_DISTRIBUTION_HPP
