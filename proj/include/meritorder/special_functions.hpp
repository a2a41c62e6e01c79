#ifndef MERITORDER_SPECIAL_FUNCTIONS_HPP
#define MERITORDER_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace meritorder {

/// Natural log of the gamma function for positive arguments.
/// glibc's lgamma writes the global `signgam`; lgamma_r does not.
inline double log_gamma(double x)
{
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double log_beta(double a, double b)
{
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace detail {

// Continued fraction for I_x(a, b) evaluated with the modified Lentz method.
// Converges quickly for x < (a + 1) / (a + b + 2).
inline double incomplete_beta_fraction(double a, double b, double x)
{
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iterations = 20000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= max_iterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

} // namespace detail

/// log of x^a (1-x)^b / B(a, b), the common prefactor of I_x(a, b) and the beta density.
inline double log_beta_kernel(double a, double b, double x, double lbeta)
{
  return a * std::log(x) + b * std::log1p(-x) - lbeta;
}

/// Regularized incomplete beta function I_x(a, b), with log B(a, b) supplied by
/// the caller so repeated evaluations for fixed shapes skip the gamma calls.
inline double regularized_incomplete_beta(double a, double b, double x, double lbeta)
{
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("incomplete beta requires positive shape parameters");
  }
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double front = std::exp(log_beta_kernel(a, b, x, lbeta));
  // Symmetry split keeps the continued fraction in its fast-converging region.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::incomplete_beta_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::incomplete_beta_fraction(b, a, 1.0 - x) / b;
}

inline double regularized_incomplete_beta(double a, double b, double x)
{
  return regularized_incomplete_beta(a, b, x, log_beta(a, b));
}

} // namespace meritorder

#endif // MERITORDER_SPECIAL_FUNCTIONS_HPP
