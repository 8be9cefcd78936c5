#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace xbf {

struct SimConfig {
  enum class Scheme { trapezoid, left_point };

  std::size_t n_steps = 512;
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::trapezoid;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

struct PathSample {
  double a; // A_t
  double b; // B_t
};

// (A_t, B_t) per path: exact Gaussian increments, A by the configured scheme.
std::vector<PathSample> simulate_A(double mu, double t, const SimConfig &cfg);

// A_t along Brownian bridges from 0 to `endpoint` over [0, t].
std::vector<double> simulate_bridge_A(double t, double endpoint,
                                      const SimConfig &cfg);

McEstimate estimate_mean(const std::vector<double> &values, std::uint64_t seed = 0);

// E[(A_t^{(mu)})^n] by simulation under drift mu + tilt with the Girsanov
// weight; tilt = 0 is plain Monte Carlo.
McEstimate mc_moment(double mu, double t, int n, const SimConfig &cfg,
                     double tilt = 0.0);

// RMS over paths of exp(B_t) - R_{A_t}, with R the Bessel process of index
// 0 started at 1, driven on the clock A by the increments e^{B} dB.
double lamperti_rms(double t, const SimConfig &cfg);

// P(sup |F_n - F| > d) for the asymptotic Kolmogorov law, with Stephens'
// finite-n correction at effective size n.
double kolmogorov_p_value(double d, double n);

using Cdf = std::function<double(double)>;

KsResult ks_test(const std::vector<double> &sorted_samples, const Cdf &cdf);
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

struct WeightedKsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double ess = 0.0;
};

// Self-normalized weighted empirical CDF of (values, weights) against the
// empirical CDF of `reference`. Weights are given in log form.
WeightedKsResult ks_weighted(const std::vector<double> &values,
                             const std::vector<double> &log_weights,
                             std::vector<double> reference);

// Relative growth of \int_0^T f(B_s^{(mu)}) ds from T to 10 T, median over
// paths; near 0 when the integral converges, near 9 for f = 1.
double finiteness_growth(const std::function<double(double)> &f, double mu,
                         double horizon, const SimConfig &cfg);

enum class Suite {
  bougerol,
  bougerol_sde,
  winding,
  exp_time,
  perpetuity,
  finiteness,
  thm55,
  limit64,
  gibbs_limit,
  moment_limit,
};

enum class Verdict { pass, fail, inconclusive };

const char *to_string(Suite suite);
const char *to_string(Verdict verdict);
// Throws ConfigurationError for an unknown name.
Suite parse_suite(const std::string &name);
const std::vector<Suite> &all_suites();

struct SuiteReport {
  std::string suite;
  double statistic = 0.0;
  double threshold = 0.0;
  std::optional<double> p_value;
  std::optional<double> ess;
  Verdict verdict = Verdict::fail;
  std::uint64_t seed = 0;
};

// Path counts and grid sizes used when the caller does not override them.
SimConfig default_config(Suite suite);

inline constexpr double kSuiteLevel = 0.01;
inline constexpr int kSuiteAttempts = 3;
inline constexpr double kMinEss = 1000.0;

// Runs the suite up to kSuiteAttempts times with derived seeds and reports
// the first passing attempt, or the last one.
SuiteReport identity_suite(Suite suite, const SimConfig &cfg);
// A single attempt with cfg.seed.
SuiteReport identity_suite_once(Suite suite, const SimConfig &cfg);

} // namespace xbf
