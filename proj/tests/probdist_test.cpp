#include <cmath>
#include <random>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "meritorder/quadrature.hpp"
#include "meritorder/special_functions.hpp"
#include "meritorder/supply_distribution.hpp"
#include "support.hpp"

using namespace meritorder;
using meritorder::testing::reference_wind;

namespace {

std::vector<SupplyDistribution> sample_distributions()
{
  return {
      SupplyDistribution::uniform(100.0),
      SupplyDistribution::scaled_beta(8.15961550777177, 8.15961550777177, 100.0),
      SupplyDistribution::scaled_beta(0.7, 2.5, 80.0),
      SupplyDistribution::scaled_beta(4.98131, 2.13485, 100.0),
      SupplyDistribution::discrete({{20.0, 0.3}, {80.0, 0.7}}, 100.0),
      SupplyDistribution::discrete({{0.0, 0.1}, {12.5, 0.25}, {40.0, 0.4}, {150.0, 0.25}}, 150.0),
      SupplyDistribution::degenerate(30.0, 100.0),
  };
}

} // namespace

TEST(IncompleteBeta, MatchesBoostAcrossShapes)
{
  const double shapes[] = {0.3, 0.7, 1.0, 2.5, 8.15961550777177, 25.0, 140.0};
  for (double a : shapes) {
    for (double b : shapes) {
      for (int k = 1; k < 50; ++k) {
        const double x = k / 50.0;
        EXPECT_NEAR(regularized_incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12)
            << "a=" << a << " b=" << b << " x=" << x;
      }
    }
  }
}

TEST(IncompleteBeta, EdgesAndDomain)
{
  EXPECT_EQ(regularized_incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(regularized_incomplete_beta(2.0, 3.0, 1.0), 1.0);
  EXPECT_EQ(regularized_incomplete_beta(2.0, 3.0, -0.5), 0.0);
  EXPECT_THROW(regularized_incomplete_beta(0.0, 3.0, 0.5), std::domain_error);
}

TEST(Quadrature, PiecewiseHandlesJumps)
{
  const auto step = [](double x) { return x < 1.0 ? 0.0 : 1.0; };
  const double cuts[] = {1.0};
  EXPECT_NEAR(piecewise_simpson(step, 0.0, 3.0, cuts), 2.0, 1e-12);
  EXPECT_NEAR(adaptive_simpson([](double x) { return x * x; }, 0.0, 3.0), 9.0, 1e-12);
  EXPECT_NEAR(adaptive_simpson([](double x) { return x; }, 2.0, 0.0), -2.0, 1e-12);
}

TEST(Cdf, Examples)
{
  EXPECT_DOUBLE_EQ(SupplyDistribution::uniform(100.0).cdf(50.0), 0.5);
  for (const auto& d : sample_distributions()) {
    EXPECT_EQ(d.cdf(-1.0), 0.0);
    EXPECT_EQ(d.cdf(d.capacity()), 1.0);
    EXPECT_EQ(d.cdf(d.capacity() + 5.0), 1.0);
  }
  EXPECT_NEAR(SupplyDistribution::scaled_beta(8.1595, 8.1595, 100.0).cdf(50.0), 0.5, 1e-14);
}

TEST(Cdf, BetaMatchesBoostInScaledUnits)
{
  const auto d = SupplyDistribution::scaled_beta(0.7, 2.5, 80.0);
  for (int k = 0; k <= 100; ++k) {
    const double x = 0.8 * k;
    EXPECT_NEAR(d.cdf(x), boost::math::ibeta(0.7, 2.5, std::min(x / 80.0, 1.0)), 1e-12);
  }
}

TEST(Cdf, NondecreasingOnFineGrid)
{
  for (const auto& d : sample_distributions()) {
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double x = -5.0 + (d.capacity() + 10.0) * k / 1000.0;
      const double f = d.cdf(x);
      EXPECT_GE(f, prev);
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
      prev = f;
    }
  }
}

TEST(Cdf, DiscreteIsRightContinuous)
{
  const auto d = SupplyDistribution::discrete({{20.0, 0.3}, {80.0, 0.7}}, 100.0);
  EXPECT_EQ(d.cdf(std::nextafter(20.0, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(20.0), 0.3);
  EXPECT_DOUBLE_EQ(d.cdf(79.999), 0.3);
  EXPECT_EQ(d.cdf(80.0), 1.0);
  EXPECT_DOUBLE_EQ(d.point_mass(20.0), 0.3);
  EXPECT_EQ(d.point_mass(21.0), 0.0);
}

TEST(Quantile, Examples)
{
  EXPECT_DOUBLE_EQ(SupplyDistribution::uniform(100.0).quantile(0.5), 50.0);
  const auto d = SupplyDistribution::discrete({{20.0, 0.3}, {80.0, 0.7}}, 100.0);
  EXPECT_EQ(d.quantile(0.3), 20.0);
  EXPECT_EQ(d.quantile(0.31), 80.0);
  EXPECT_EQ(d.quantile(0.0), 0.0);
  EXPECT_EQ(d.quantile(1.0), 80.0);
  EXPECT_EQ(reference_wind().quantile(0.0), 0.0);
  EXPECT_EQ(reference_wind().quantile(1.0), 100.0);
}

TEST(Quantile, CaseAUpperQuantileNearTableValue)
{
  // The reference StoM wind schedule for Case a (about 63.5) is F^-1(30/35).
  EXPECT_NEAR(reference_wind().quantile(30.0 / 35.0), 63.5, 1.0);
  EXPECT_NEAR(reference_wind().quantile(30.0 / 35.0), 63.17819, 1e-4);
}

TEST(Quantile, RejectsLevelsOutsideUnitInterval)
{
  const auto d = SupplyDistribution::uniform(10.0);
  EXPECT_THROW(d.quantile(-0.01), DomainError);
  EXPECT_THROW(d.quantile(1.01), DomainError);
  EXPECT_THROW(d.quantile(std::nan("")), DomainError);
}

TEST(Quantile, GaloisPropertyOnGrid)
{
  for (const auto& d : sample_distributions()) {
    for (int i = 1; i <= 100; ++i) {
      const double a = i / 100.0;
      const double q = d.quantile(a);
      EXPECT_GE(d.cdf(q), a) << "alpha=" << a;
      for (int k = 0; k <= 200; ++k) {
        const double x = d.capacity() * k / 200.0;
        if (x < q) {
          // Continuous laws are inverted numerically; allow a sliver below q.
          if (d.is_continuous() && q - x < 1e-9 * d.capacity()) continue;
          EXPECT_LT(d.cdf(x), a) << "alpha=" << a << " x=" << x << " q=" << q;
        } else {
          EXPECT_GE(d.cdf(x), a) << "alpha=" << a << " x=" << x << " q=" << q;
        }
      }
    }
  }
}

TEST(Quantile, NondecreasingAndInvertsContinuousCdf)
{
  for (const auto& d : sample_distributions()) {
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double q = d.quantile(i / 1000.0);
      EXPECT_GE(q, prev);
      prev = q;
    }
    if (!d.is_continuous()) continue;
    for (int k = 1; k < 100; ++k) {
      const double x = d.capacity() * k / 100.0;
      EXPECT_LE(d.quantile(d.cdf(x)), x + 1e-9 * d.capacity());
      EXPECT_NEAR(d.quantile(d.cdf(x)), x, 1e-7 * d.capacity());
    }
  }
}

TEST(CdfIntegral, Examples)
{
  const auto u = SupplyDistribution::uniform(100.0);
  EXPECT_DOUBLE_EQ(u.cdf_integral(0.0, 100.0), 50.0);
  for (const auto& d : sample_distributions()) EXPECT_EQ(d.cdf_integral(5.0, -3.0), 0.0);
  EXPECT_NEAR(reference_wind().cdf_integral(0.0, 100.0), 50.0, 1e-6);
  EXPECT_NEAR(reference_wind().cdf_integral(0.0, 100.0, IntegrationMethod::quadrature), 50.0, 1e-6);
  EXPECT_NEAR(reference_wind().cdf_integral(0.0, 50.0), 4.862742, 1e-6);
}

TEST(CdfIntegral, AnalyticAgreesWithQuadrature)
{
  for (const auto& d : sample_distributions()) {
    const double cap = d.capacity();
    const double ends[] = {-20.0, 0.0, 0.13 * cap, 0.5 * cap, 0.77 * cap, cap, cap + 35.0};
    for (double a : ends) {
      for (double b : ends) {
        EXPECT_NEAR(d.cdf_integral(a, b), d.cdf_integral(a, b, IntegrationMethod::quadrature), 1e-7)
            << "a=" << a << " b=" << b;
      }
    }
  }
}

TEST(CdfIntegral, Additivity)
{
  std::mt19937_64 rng(7);
  for (const auto& d : sample_distributions()) {
    std::uniform_real_distribution<double> pick(-10.0, d.capacity() + 10.0);
    for (int i = 0; i < 200; ++i) {
      double p[] = {pick(rng), pick(rng), pick(rng)};
      std::sort(std::begin(p), std::end(p));
      EXPECT_NEAR(d.cdf_integral(p[0], p[2]), d.cdf_integral(p[0], p[1]) + d.cdf_integral(p[1], p[2]), 1e-9);
    }
  }
}

TEST(CdfIntegral, IntegrationByPartsIdentity)
{
  // x2 F(x2) - x1 F(x1) - int F = int s f(s) ds, the right side by quadrature of the density.
  for (const auto& d : sample_distributions()) {
    if (!d.is_continuous()) continue;
    const double cap = d.capacity();
    for (double x1 : {0.05 * cap, 0.3 * cap}) {
      for (double x2 : {0.5 * cap, 0.95 * cap}) {
        const double lhs = x2 * d.cdf(x2) - x1 * d.cdf(x1) - d.cdf_integral(x1, x2);
        const double rhs = adaptive_simpson([&](double s) { return s * d.density(s); }, x1, x2, 1e-11);
        EXPECT_NEAR(lhs, rhs, 1e-7);
      }
    }
  }
}

TEST(CdfIntegral, PartialExpectationUsesShiftedIncompleteBeta)
{
  const double a = 2.3;
  const double b = 5.1;
  const auto d = SupplyDistribution::scaled_beta(a, b, 40.0);
  for (double x : {3.0, 11.0, 27.0, 39.0}) {
    const double expected = 40.0 * a / (a + b) * boost::math::ibeta(a + 1.0, b, x / 40.0);
    EXPECT_NEAR(d.partial_expectation(x), expected, 1e-11);
  }
}

TEST(Mean, Examples)
{
  EXPECT_DOUBLE_EQ(SupplyDistribution::uniform(100.0).mean(), 50.0);
  EXPECT_DOUBLE_EQ(SupplyDistribution::degenerate(30.0, 100.0).mean(), 30.0);
  EXPECT_NEAR(reference_wind().mean(), 50.0, 1e-6);
  for (const auto& d : sample_distributions()) {
    EXPECT_NEAR(d.mean(), d.capacity() - d.cdf_integral(0.0, d.capacity(), IntegrationMethod::quadrature), 1e-7);
  }
}

TEST(BetaFromCapacityFactor, DefaultCoefficients)
{
  const WindForecastModel model{0.5, one_hour_sigma_coeffs, 100.0};
  EXPECT_NEAR(model.sigma(), 0.120145, 1e-12);
  const auto d = beta_from_capacity_factor(model);
  EXPECT_EQ(d.kind(), SupplyKind::scaled_beta);
  EXPECT_NEAR(d.alpha(), 8.15961550777177, 1e-12);
  EXPECT_NEAR(d.beta(), 8.15961550777177, 1e-12);
  EXPECT_NEAR(d.mean(), 50.0, 1e-9);
}

TEST(BetaFromCapacityFactor, SymmetricHandAlgebra)
{
  const auto d = beta_from_capacity_factor({0.5, {0.0, 0.2}, 100.0});
  EXPECT_NEAR(d.alpha(), 12.0, 1e-12);
  EXPECT_NEAR(d.beta(), 12.0, 1e-12);
  EXPECT_NEAR(d.mean(), 50.0, 1e-12);
}

TEST(BetaFromCapacityFactor, HighCapacityFactorIsLeftSkewed)
{
  const auto d = beta_from_capacity_factor({0.7, one_hour_sigma_coeffs, 100.0});
  EXPECT_NEAR(d.alpha(), 4.98131, 1e-5);
  EXPECT_NEAR(d.beta(), 2.13485, 1e-5);
  EXPECT_NEAR(d.mean(), 70.0, 1e-9);
  // Independent check by quadrature of the density.
  const double by_density = adaptive_simpson([&](double s) { return d.density(s); }, 0.0, 70.0, 1e-12);
  EXPECT_NEAR(d.cdf(70.0), by_density, 1e-9);
  EXPECT_NEAR(d.cdf(70.0), 0.455789, 1e-6);
  EXPECT_LT(d.cdf(70.0), 0.5);
}

TEST(BetaFromCapacityFactor, MeanTracksKappaAcrossRange)
{
  for (int i = 1; i <= 17; ++i) {
    const double kappa = 0.05 * (i + 1);
    const auto d = beta_from_capacity_factor({kappa, one_hour_sigma_coeffs, 250.0});
    EXPECT_NEAR(d.mean(), kappa * 250.0, 1e-9);
  }
}

TEST(BetaFromCapacityFactor, RejectsInfeasibleMoments)
{
  EXPECT_THROW(beta_from_capacity_factor({0.5, {0.6, 0.0}, 100.0}), DomainError);
  EXPECT_THROW(beta_from_capacity_factor({0.0, one_hour_sigma_coeffs, 100.0}), DomainError);
  EXPECT_THROW(beta_from_capacity_factor({1.0, one_hour_sigma_coeffs, 100.0}), DomainError);
  EXPECT_THROW(beta_from_capacity_factor({0.5, {-0.5, 0.0}, 100.0}), DomainError);
}

TEST(SupplyDistribution, RejectsBadParameters)
{
  EXPECT_THROW(SupplyDistribution::uniform(0.0), DomainError);
  EXPECT_THROW(SupplyDistribution::scaled_beta(-1.0, 2.0, 10.0), DomainError);
  EXPECT_THROW(SupplyDistribution::discrete({{5.0, 0.5}, {3.0, 0.5}}, 10.0), DomainError);
  EXPECT_THROW(SupplyDistribution::discrete({{5.0, 0.5}, {6.0, 0.4}}, 10.0), DomainError);
  EXPECT_THROW(SupplyDistribution::discrete({{5.0, 0.5}, {12.0, 0.5}}, 10.0), DomainError);
  EXPECT_THROW(SupplyDistribution::discrete({}, 10.0), DomainError);
  EXPECT_THROW(SupplyDistribution::degenerate(11.0, 10.0), DomainError);
}
