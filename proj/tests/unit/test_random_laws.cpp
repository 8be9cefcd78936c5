#include "oracles.hpp"

#include "xbf/errors.hpp"
#include "xbf/monte_carlo.hpp"
#include "xbf/random_laws.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace xbf {
namespace {

constexpr double kPi = std::numbers::pi;

// Density of 1 / (2 gamma_mu).
double inverse_gamma_density(double mu, double x) {
  return std::exp(-(mu + 1.0) * std::log(x) - mu * std::log(2.0) - 0.5 / x - std::lgamma(mu));
}

TEST(Gig, Normalized) {
  for (const GigParams g : {GigParams{0.5, 1.0, 1.0}, GigParams{-1.5, 2.0, 0.5},
                            GigParams{3.0, 0.3, 2.0}, GigParams{1.2, 0.0, 1.5}}) {
    const double mass = oracle::tanh_sinh_inf([&](double x) { return gig_density(g, x); }, 0.0);
    EXPECT_NEAR(mass, 1.0, 1e-9) << g.order << " " << g.a << " " << g.b;
  }
}

TEST(Gig, MinusHalfIsInverseGaussian) {
  // Inverse Gaussian with mean 1 and shape 1.
  const GigParams g{-0.5, 1.0, 1.0};
  for (double x : {0.1, 0.5, 1.0, 2.0, 7.0}) {
    const double ig = std::exp(1.0 - 0.5 * (x + 1.0 / x)) / std::sqrt(2.0 * kPi * x * x * x);
    EXPECT_LE(oracle::rel_err(gig_density(g, x), ig), 1e-10) << x;
  }
}

TEST(Gig, GammaLimit) {
  // a = 0: gamma with shape `order` and rate b^2 / 2.
  const GigParams g{2.5, 0.0, 1.0};
  for (double x : {0.2, 1.0, 4.0}) {
    const double ref = std::exp(1.5 * std::log(x) - 0.5 * x - std::lgamma(2.5) - 2.5 * std::log(2.0));
    EXPECT_LE(oracle::rel_err(gig_density(g, x), ref), 1e-10) << x;
  }
}

TEST(Gig, LaplaceIsBesselRatio) {
  for (const GigParams g : {GigParams{0.5, 1.0, 1.0}, GigParams{-1.0, 2.0, 0.7}}) {
    for (double s : {0.1, 1.0, 5.0}) {
      const double c = std::sqrt(g.b * g.b + 2.0 * s);
      const double ref = std::pow(g.b / c, g.order) * oracle::bessel_k_integral(g.order, g.a * c) /
                         oracle::bessel_k_integral(g.order, g.a * g.b);
      EXPECT_LE(oracle::rel_err(gig_laplace(g, s), ref), 1e-8) << g.order << " " << s;
    }
  }
}

TEST(Gig, CdfIsIntegratedDensity) {
  const GigParams g{0.3, 1.5, 0.8};
  for (double x : {0.3, 1.0, 3.0, 10.0}) {
    const double ref = oracle::tanh_sinh([&](double y) { return gig_density(g, y); }, 0.0, x);
    EXPECT_NEAR(gig_cdf(g, x), ref, 1e-9) << x;
  }
}

TEST(Gig, SamplerMatchesCdf) {
  for (const GigParams g : {GigParams{0.5, 1.0, 1.0}, GigParams{0.0, 2.0, 1.0},
                            GigParams{-2.0, 1.0, 3.0}, GigParams{4.0, 0.5, 1.0}}) {
    auto x = gig_sample(g, 20000, 11);
    std::sort(x.begin(), x.end());
    const auto ks = ks_test(x, [&](double v) { return gig_cdf(g, v); });
    EXPECT_GT(ks.p_value, 1e-3) << g.order << " " << g.a << " " << g.b;
  }
}

TEST(Gig, RejectsBadParameters) {
  EXPECT_THROW(gig_density(GigParams{-0.5, 0.0, 1.0}, 1.0), DomainError);
  EXPECT_THROW(gig_density(GigParams{0.5, 1.0, -1.0}, 1.0), DomainError);
}

TEST(ExpTime, MarginalOfExpB) {
  // mu = 0, lambda = 1: B_T is two-sided exponential with rate sqrt 2.
  const ExpTimeParams p{0.0, 1.0};
  const double r = std::numbers::sqrt2;
  for (double y : {0.5, 0.9, 1.5, 3.0}) {
    const double m = oracle::tanh_sinh_inf([&](double u) { return exp_time_joint_density(p, y, u); },
                                           0.0, 1e-10);
    const double ref = 0.5 * r * std::exp(-r * std::abs(std::log(y))) / y;
    EXPECT_LE(oracle::rel_err(m, ref), 1e-7) << y;
  }
}

TEST(ExpTime, MarginalOfA) {
  for (const ExpTimeParams p : {ExpTimeParams{0.0, 1.0}, ExpTimeParams{1.0, 2.0}}) {
    for (double u : {0.05, 0.2, 0.5, 1.0, 3.0}) {
      const double m = oracle::tanh_sinh_inf(
          [&](double y) { return exp_time_joint_density(p, y, u); }, 0.0, 1e-10);
      EXPECT_LE(oracle::rel_err(exp_time_density(p, u), m), 1e-7) << p.mu << " " << u;
    }
  }
}

TEST(ExpTime, CdfIsIntegratedDensity) {
  const ExpTimeParams p{0.5, 1.5};
  for (double u : {0.001, 0.1, 1.0, 5.0}) {
    const double ref = oracle::tanh_sinh([&](double v) { return exp_time_density(p, v); }, 0.0, u);
    EXPECT_NEAR(exp_time_cdf(p, u), ref, 1e-8) << u;
  }
}

TEST(ExpTime, DensityPositive) {
  for (const ExpTimeParams p : {ExpTimeParams{0.0, 1.0}, ExpTimeParams{-1.0, 0.5}}) {
    for (double u : {1e-4, 0.003, 0.1, 1.0, 100.0}) {
      EXPECT_GT(exp_time_density(p, u), 0.0) << u;
    }
  }
}

TEST(ExpTime, SampleMean) {
  // E[A_T] = 1 / (lambda - 2 - 2 mu) when lambda > 2 + 2 mu; the variance is
  // finite once lambda > 8 + 4 mu.
  for (const ExpTimeParams p : {ExpTimeParams{0.0, 10.0}, ExpTimeParams{0.5, 14.0}}) {
    const auto x = exp_time_sample(p, 200000, 3);
    const double k = 2.0 + 2.0 * p.mu;
    const auto est = estimate_mean(x);
    EXPECT_NEAR(est.mean, 1.0 / (p.lambda - k), 5.0 * est.std_error) << p.mu;
  }
}

TEST(ExpTime, SamplerMatchesCdf) {
  const ExpTimeParams p{0.5, 1.0};
  auto x = exp_time_sample(p, 20000, 5);
  std::sort(x.begin(), x.end());
  EXPECT_GT(ks_test(x, [&](double u) { return exp_time_cdf(p, u); }).p_value, 1e-3);
}

TEST(Perpetuity, HalfOrderClosedValue) {
  EXPECT_NEAR(perpetuity_laplace(0.5, 1.0), std::exp(-1.0), 1e-14);
}

TEST(Perpetuity, InverseGammaTransform) {
  for (double mu : {0.5, 1.0, 2.0}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      const double ref = oracle::tanh_sinh_inf(
          [&](double x) {
            return std::exp(-0.5 * alpha * alpha * x) * inverse_gamma_density(mu, x);
          },
          0.0, 1e-12);
      EXPECT_LE(oracle::rel_err(perpetuity_laplace(mu, alpha), ref), 1e-9) << mu << " " << alpha;
    }
  }
}

TEST(Perpetuity, InverseGammaCdf) {
  for (double mu : {0.5, 2.0}) {
    for (double x : {0.1, 1.0, 4.0}) {
      const double ref = oracle::tanh_sinh([&](double v) { return inverse_gamma_density(mu, v); },
                                           0.0, x);
      EXPECT_NEAR(inverse_gamma_cdf(mu, x), ref, 1e-10) << mu << " " << x;
    }
  }
}

TEST(Perpetuity, TwoSidedReducesAtEqualRates) {
  for (double mu : {0.5, 1.0, 2.5}) {
    for (double alpha : {0.3, 1.0, 4.0}) {
      EXPECT_LE(oracle::rel_err(two_sided_perpetuity_laplace(mu, alpha, alpha),
                                perpetuity_laplace(mu, alpha)),
                1e-12)
          << mu << " " << alpha;
    }
  }
}

TEST(Perpetuity, TwoSidedMonotone) {
  double prev = 1.0;
  for (double alpha : {0.2, 0.5, 1.0, 2.0}) {
    const double v = two_sided_perpetuity_laplace(1.0, alpha, 1.0);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
  prev = 1.0;
  for (double beta : {0.2, 0.5, 1.0, 2.0}) {
    const double v = two_sided_perpetuity_laplace(1.0, 1.0, beta);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(PathTransform, ZeroIsIdentity) {
  const std::vector<double> path{0.0, 0.3, -0.2, 0.5, 0.1};
  const auto out = path_transform(path, 1.0, 0.0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    EXPECT_DOUBLE_EQ(out[i], path[i]);
  }
}

TEST(PathTransform, ZeroPath) {
  // A_s = s, so the endpoint is -log(1 + z).
  const std::vector<double> path(101, 0.0);
  EXPECT_NEAR(path_transform(path, 1.0, 1.0).back(), -std::log(2.0), 1e-14);
  EXPECT_NEAR(path_transform(path, 2.0, 3.0).back(), -std::log(7.0), 1e-14);
}

TEST(PathTransform, DecreasingInZ) {
  const std::vector<double> path{0.0, 0.4, 0.1, -0.3, 0.2};
  double prev = std::numeric_limits<double>::infinity();
  for (double z : {0.0, 0.5, 1.0, 10.0}) {
    const double v = path_transform(path, 1.0, z).back();
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(path_transform(path, 1.0, -1.0), DomainError);
}

TEST(LimitLaw, Deterministic) {
  const LimitLaw law{LimitKind::gibbs, 0.0, 0.5};
  EXPECT_EQ(limit_law_sample(law, 2.0, 500, 9, 64), limit_law_sample(law, 2.0, 500, 9, 64));
  EXPECT_NE(limit_law_sample(law, 2.0, 500, 9, 64), limit_law_sample(law, 2.0, 500, 10, 64));
}

TEST(LimitLaw, Recipes) {
  const auto gibbs = limit_recipe(LimitLaw{LimitKind::gibbs, -0.5, 2.0});
  EXPECT_EQ(gibbs.randomizer, LimitRecipe::Randomizer::gig);
  EXPECT_DOUBLE_EQ(gibbs.shape, 0.5);
  EXPECT_DOUBLE_EQ(gibbs.gig_a, 2.0);
  const auto plain = limit_recipe(LimitLaw{LimitKind::moment_density, 2.0, 1.0});
  EXPECT_EQ(plain.randomizer, LimitRecipe::Randomizer::none);
  EXPECT_DOUBLE_EQ(plain.drift, 0.0);
}

TEST(LimitLaw, DriftOnlyRecipeIsBrownian) {
  // No randomizer and zero drift: the limit is B itself.
  const double t = 2.0;
  auto x = limit_law_sample(LimitLaw{LimitKind::moment_density, 2.0, 1.0}, t, 20000, 4, 32);
  std::sort(x.begin(), x.end());
  const auto ks = ks_test(x, [&](double v) { return oracle::normal_cdf(v / std::sqrt(t)); });
  EXPECT_GT(ks.p_value, 1e-3);
}

} // namespace
} // namespace xbf
