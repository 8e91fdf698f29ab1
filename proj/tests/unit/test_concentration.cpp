#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hrlab/concentration/profile.hpp"

using namespace hrlab;

namespace {

double chi3_cdf(double x) {
  return std::erf(x / std::sqrt(2.0)) - std::sqrt(2.0 / std::numbers::pi) * x * std::exp(-x * x / 2.0);
}

double bisect(double (*f)(double), double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ConcentrationProfile synthetic(const std::vector<double>& grid, const std::vector<double>& tails, double rho_p) {
  ConcentrationProfile p;
  p.rho_grid = grid;
  p.tail_prob = tails;
  p.rho_p = rho_p;
  p.n_samples = 1000000;
  for (double t : tails) p.n_exceed.push_back(static_cast<std::size_t>(t * 1e6));
  return p;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
  return g;
}

}  // namespace

TEST(Sampler, SphereSamplesAreUnitVectors) {
  auto s = MMSpaceSampler::sphere(9, 1);
  EXPECT_EQ(s.dimension(), 10u);
  EXPECT_EQ(s.intrinsic_dimension(), 9u);
  Rng rng = make_rng(1, "t");
  Vec x;
  for (int k = 0; k < 1000; ++k) {
    s.sample(rng, x);
    EXPECT_NEAR(x.norm(), 1.0, 1e-14);
  }
  EXPECT_THROW(MMSpaceSampler::sphere(0, 1), DimensionError);
  EXPECT_THROW(MMSpaceSampler::gaussian(0, 1.0, 1), DimensionError);
  EXPECT_THROW(MMSpaceSampler::gaussian(2, -1.0, 1), ValidationError);
  EXPECT_THROW(MMSpaceSampler::product_uniform(Vec::Zero(2), Vec::Zero(2), 1), ValidationError);
}

TEST(Sampler, ValuesIndependentOfThreads) {
  auto s = MMSpaceSampler::gaussian(3, 2.0, 77);
  auto f = [](const ConstVecRef& x) { return x.sum(); };
  EXPECT_EQ(sample_values(f, s, 10000, "x", 1), sample_values(f, s, 10000, "x", 3));
  EXPECT_NE(sample_values(f, s, 10, "x", 1), sample_values(f, s, 10, "y", 1));
}

TEST(Median, OddEvenAndFractions) {
  EXPECT_EQ(sample_median({3, 1, 2}), 2.0);
  EXPECT_EQ(sample_median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(sample_median({}), ValidationError);
  const auto m = median_of({1, 1, 1, 5});
  EXPECT_EQ(m.median_hat, 1.0);
  EXPECT_EQ(m.fraction_above, 0.25);
  EXPECT_EQ(m.fraction_below, 0.0);
}

TEST(Median, ChiThreeAgainstCdf) {
  const double exact = bisect(chi3_cdf, 0.5, 0.0, 10.0);
  EXPECT_NEAR(chi3_cdf(exact), 0.5, 1e-14);
  auto s = MMSpaceSampler::gaussian(3, 1.0, 5);
  const auto m = levy_median([](const ConstVecRef& x) { return x.norm(); }, s, 200000);
  EXPECT_NEAR(m.median_hat, exact, 0.01);
  EXPECT_THROW(levy_median([](const ConstVecRef& x) { return x[0]; }, s, 99), ValidationError);
}

TEST(Median, StableAcrossSeeds) {
  auto f = [](const ConstVecRef& x) { return x.squaredNorm(); };
  const double a = levy_median(f, MMSpaceSampler::sphere(20, 1), 1000).median_hat;
  const double b = levy_median(f, MMSpaceSampler::sphere(20, 2), 1000).median_hat;
  EXPECT_NEAR(a, 1.0, 1e-12);
  EXPECT_NEAR(b, 1.0, 1e-12);
  const double c = levy_median([](const ConstVecRef& x) { return x[0]; }, MMSpaceSampler::sphere(20, 3), 40000).median_hat;
  EXPECT_NEAR(c, 0.0, 0.01);
}

TEST(Profile, GaussianTailMatchesErfc) {
  auto s = MMSpaceSampler::gaussian(1, 1.0, 11);
  const auto grid = linspace(0.25, 3.0, 12);
  const auto p = concentration_profile([](const ConstVecRef& x) { return x[0]; }, s, grid, 400000, 1.0);
  EXPECT_EQ(p.n_median_samples, 200000u);
  EXPECT_EQ(p.n_samples, 200000u);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = std::erfc(grid[i] / std::sqrt(2.0));
    const double se = std::sqrt(exact * (1 - exact) / p.n_samples);
    EXPECT_NEAR(p.tail_prob[i], exact, 5 * se + 0.004) << grid[i];
  }
}

TEST(Profile, SphereCoordinateBelowBound) {
  const std::size_t n = 50;
  auto s = MMSpaceSampler::sphere(n, 3);
  const auto grid = linspace(0.02, 0.5, 25);
  const auto p = concentration_profile([](const ConstVecRef& x) { return x[0]; }, s, grid, 100000, 1.0);
  EXPECT_DOUBLE_EQ(p.rho_p, 1.0 / std::sqrt(49.0));
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(p.tail_prob[i], p.bound_sphere(grid[i]) + 3 * p.standard_error(i));
  ASSERT_TRUE(p.fit.has_value());
  EXPECT_GT(p.fit->C2_hat, 0.5);
}

TEST(Profile, BoundsFormulae) {
  ConcentrationProfile p;
  p.rho_p = 0.5;
  p.sigma_f = 2.0;
  EXPECT_DOUBLE_EQ(p.bound_sphere(1.0), 2 * std::exp(-2.0));
  EXPECT_DOUBLE_EQ(p.bound_gaussian(1.0), 0.5 * std::exp(-0.125));
}

TEST(Fit, RecoversSyntheticConstants) {
  const double c1 = 1.7, c2 = 0.8, rp = 0.3;
  const auto grid = linspace(0.1, 0.9, 9);
  std::vector<double> tails;
  for (double r : grid) tails.push_back(c1 * std::exp(-c2 * r * r / (2 * rp * rp)));
  const auto fit = fit_decay_constant(synthetic(grid, tails, rp));
  EXPECT_NEAR(fit.C1_hat, c1, 1e-10);
  EXPECT_NEAR(fit.C2_hat, c2, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_LT(fit.stderr_C2, 1e-8);
}

TEST(Fit, NeedsThreeUsablePoints) {
  auto p = synthetic({0.1, 0.2, 0.3}, {0.5, 0.2, 0.1}, 1.0);
  p.n_exceed = {100, 100, 9};
  EXPECT_THROW(fit_decay_constant(p), FitError);
  const auto prof = tail_profile({0.0, 1.0, 2.0}, 1.0, {0.5, 1.5}, 1.0, 1.0);
  EXPECT_FALSE(prof.fit.has_value());
  EXPECT_THROW(tail_profile({1.0}, 0.0, {0.2, 0.1}, 1.0, 1.0), ValidationError);
}

TEST(Fit, GaussianMeanAgainstExactTailFit) {
  // f = mean of d standard normals has law N(0, 1/d); fit the exact erfc tail
  // on the same usable grid points as the oracle for C2.
  const std::size_t d = 100;
  const double sf = 1.0 / std::sqrt(static_cast<double>(d));
  auto s = MMSpaceSampler::gaussian(d, 1.0, 21);
  const auto grid = linspace(0.02, 0.3, 15);
  const auto p = concentration_profile([](const ConstVecRef& x) { return x.mean(); }, s, grid, 200000, sf, sf);
  ASSERT_TRUE(p.fit.has_value());
  std::vector<double> g, t;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (p.n_exceed[i] >= kMinExceedances) {
      g.push_back(grid[i]);
      t.push_back(std::erfc(grid[i] / (sf * std::sqrt(2.0))));
    }
  const auto oracle = fit_decay_constant(synthetic(g, t, sf));
  EXPECT_NEAR(p.fit->C2_hat, oracle.C2_hat, 0.1 * oracle.C2_hat);
  EXPECT_EQ(p.fit->points, g.size());
}

TEST(Isoperimetric, BoundHoldsOnSpheres) {
  EXPECT_NEAR(sphere_isoperimetric_bound(10, 0.0), 1 - std::sqrt(std::numbers::pi / 8), 1e-15);
  for (std::size_t n : {5u, 20u, 100u}) {
    const auto r = sphere_isoperimetric_check(n, {0.0, 0.05, 0.1, 0.2, 0.4}, 20000, 7);
    EXPECT_TRUE(r.all_pass) << n;
    EXPECT_NEAR(r.entries[0].measure, 0.5, 0.02);
    for (std::size_t i = 1; i < r.entries.size(); ++i) EXPECT_GE(r.entries[i].measure, r.entries[i - 1].measure);
  }
  EXPECT_THROW(sphere_isoperimetric_check(1, {0.1}, 10, 1), DimensionError);
}
