#include "oracles.hpp"

#include "xbf/errors.hpp"
#include "xbf/moments.hpp"
#include "xbf/monte_carlo.hpp"
#include "xbf/parallel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace xbf {
namespace {

SimConfig config(std::size_t paths, std::size_t steps, std::uint64_t seed = 1) {
  SimConfig c;
  c.n_paths = paths;
  c.n_steps = steps;
  c.seed = seed;
  return c;
}

std::vector<double> normals(std::size_t n, double shift, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(shift, 1.0);
  std::vector<double> x(n);
  for (double &v : x) {
    v = normal(engine);
  }
  return x;
}

TEST(Simulation, FirstMoment) {
  const auto est = mc_moment(0.0, 1.0, 1, config(40000, 256));
  EXPECT_NEAR(est.mean, oracle::iterated_moment(1), 3.5 * est.std_error);
}

TEST(Simulation, TiltedSecondMoment) {
  const auto est = mc_moment(0.0, 1.0, 2, config(40000, 256), 4.0);
  EXPECT_NEAR(est.mean, oracle::iterated_moment(2), 3.5 * est.std_error);
}

TEST(Simulation, DriftFirstMoment) {
  // E[A_t^{(mu)}] = (e^{k t} - 1) / k with k = 2 + 2 mu.
  const double mu = -0.5;
  const double t = 2.0;
  const double k = 2.0 + 2.0 * mu;
  const auto est = mc_moment(mu, t, 1, config(40000, 256));
  EXPECT_NEAR(est.mean, std::expm1(k * t) / k, 3.5 * est.std_error);
}

TEST(Simulation, SmallTime) {
  const double t = 1e-4;
  const auto paths = simulate_A(0.0, t, config(2000, 16));
  for (const auto &p : paths) {
    EXPECT_NEAR(p.a / t, 1.0, 0.1);
  }
}

TEST(Simulation, SeedDeterminism) {
  const auto a = simulate_A(0.3, 1.0, config(3000, 32, 5));
  const auto b = simulate_A(0.3, 1.0, config(3000, 32, 5));
  const auto c = simulate_A(0.3, 1.0, config(3000, 32, 6));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].a, b[i].a);
  }
  EXPECT_NE(a[0].a, c[0].a);
}

TEST(Simulation, WorkerCountDoesNotChangeResults) {
  setenv("XBF_THREADS", "1", 1);
  const auto one = simulate_A(0.0, 1.0, config(5000, 32));
  setenv("XBF_THREADS", "4", 1);
  const auto four = simulate_A(0.0, 1.0, config(5000, 32));
  unsetenv("XBF_THREADS");
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].a, four[i].a);
  }
}

TEST(Simulation, NearbySeedsUseDistinctStreams) {
  const auto a = simulate_A(0.0, 1.0, config(4 * kStreamChunk, 8, 1));
  const auto b = simulate_A(0.0, 1.0, config(4 * kStreamChunk, 8, 2));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_NE(a[i].a, b[i].a) << i;
  }
}

TEST(Simulation, RejectsBadConfig) {
  EXPECT_THROW(simulate_A(0.0, 1.0, config(0, 8)), Error);
  EXPECT_THROW(simulate_A(0.0, 1.0, config(10, 0)), Error);
  EXPECT_THROW(simulate_A(0.0, -1.0, config(10, 8)), DomainError);
}

TEST(Bridge, ConditionalMean) {
  const double t = 1.0;
  for (double x : {-1.0, 0.0, 1.0}) {
    // E[e^{2 X_s}] for the bridge: mean s x / t, variance s (t - s) / t.
    const double ref = oracle::tanh_sinh(
        [&](double s) { return std::exp(2.0 * s * x / t + 2.0 * s * (t - s) / t); }, 0.0, t);
    const auto est = estimate_mean(simulate_bridge_A(t, x, config(40000, 256)));
    EXPECT_NEAR(est.mean, ref, 3.5 * est.std_error) << x;
    EXPECT_LE(oracle::rel_err(conditional_moment(1, t, x), ref), 1e-10) << x;
  }
}

TEST(Bridge, ConditionalReciprocal) {
  for (double x : {0.0, 1.0}) {
    auto values = simulate_bridge_A(1.0, x, config(40000, 256));
    for (double &v : values) {
      v = 1.0 / v;
    }
    const auto est = estimate_mean(values);
    const double ref = conditional_negative_moment(1.0, 1.0, x).value;
    EXPECT_NEAR(est.mean, ref, 3.5 * est.std_error) << x;
  }
}

TEST(KsTest, RejectsUnsorted) {
  const auto x = normals(100, 0.0, 1);
  EXPECT_THROW(ks_test(x, oracle::normal_cdf), ContractError);
}

TEST(KsTest, DetectsShift) {
  auto x = normals(5000, 0.1, 3);
  std::sort(x.begin(), x.end());
  EXPECT_LT(ks_test(x, oracle::normal_cdf).p_value, 1e-3);
}

TEST(KsTest, CalibratedUnderNull) {
  int rejected = 0;
  const int runs = 400;
  for (int k = 0; k < runs; ++k) {
    auto x = normals(200, 0.0, 100 + k);
    std::sort(x.begin(), x.end());
    rejected += ks_test(x, oracle::normal_cdf).p_value < 0.05;
  }
  // Binomial(400, 0.05): mean 20, standard deviation 4.4.
  EXPECT_GE(rejected, 6);
  EXPECT_LE(rejected, 36);
}

TEST(KsTest, KolmogorovQuantiles) {
  // Asymptotic critical values of sqrt(n) D.
  EXPECT_NEAR(kolmogorov_p_value(1.3581 / 1000.0, 1e6), 0.05, 1e-3);
  EXPECT_NEAR(kolmogorov_p_value(1.6276 / 1000.0, 1e6), 0.01, 1e-3);
  EXPECT_DOUBLE_EQ(kolmogorov_p_value(0.0, 100.0), 1.0);
}

TEST(KsTest, TwoSample) {
  EXPECT_GT(ks_two_sample(normals(4000, 0.0, 1), normals(5000, 0.0, 2)).p_value, 1e-3);
  EXPECT_LT(ks_two_sample(normals(4000, 0.0, 1), normals(5000, 0.15, 2)).p_value, 1e-3);
}

TEST(KsTest, WeightedMatchesTiltedReference) {
  // N(0, 1) reweighted by exp(theta x - theta^2 / 2) is N(theta, 1).
  const double theta = 0.5;
  const auto x = normals(20000, 0.0, 7);
  std::vector<double> log_w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    log_w[i] = theta * x[i] - 0.5 * theta * theta;
  }
  const auto hit = ks_weighted(x, log_w, normals(20000, theta, 8));
  EXPECT_GT(hit.p_value, 1e-3);
  EXPECT_GT(hit.ess, 10000.0);
  EXPECT_LT(hit.ess, 20000.0);
  const auto miss = ks_weighted(x, log_w, normals(20000, 0.0, 8));
  EXPECT_LT(miss.p_value, 1e-3);
}

TEST(Finiteness, Growth) {
  const auto cfg = config(500, 200);
  EXPECT_NEAR(finiteness_growth([](double) { return 1.0; }, -1.0, 10.0, cfg), 9.0, 1e-9);
  EXPECT_LT(finiteness_growth([](double b) { return std::exp(2.0 * b); }, -1.0, 10.0, cfg), 1e-3);
}

TEST(Lamperti, SmallDiscrepancy) {
  EXPECT_LT(lamperti_rms(1.0, config(2000, 4096)), lamperti_rms(1.0, config(2000, 256)));
  EXPECT_LT(lamperti_rms(1.0, config(2000, 4096)), 0.05);
}

TEST(Suites, ParseAndNames) {
  for (Suite s : all_suites()) {
    EXPECT_EQ(parse_suite(to_string(s)), s);
  }
  EXPECT_THROW(parse_suite("nope"), ConfigurationError);
}

TEST(Suites, ConditionalScalingSuitePasses) {
  SimConfig cfg = default_config(Suite::thm55);
  cfg.n_paths = 20000;
  const auto r = identity_suite(Suite::thm55, cfg);
  EXPECT_EQ(r.verdict, Verdict::pass) << r.statistic << " " << r.p_value.value_or(-1.0);
}

TEST(Suites, FinitenessPasses) {
  const auto r = identity_suite(Suite::finiteness, default_config(Suite::finiteness));
  EXPECT_EQ(r.verdict, Verdict::pass) << r.statistic;
}

} // namespace
} // namespace xbf
