#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace xbf {

// GIG(order; a, b), density (b/a)^order x^{order-1} / (2 K_order(ab))
// exp(-(b^2 x + a^2 / x) / 2). a = 0 is the gamma limit and needs order > 0.
struct GigParams {
  double order = 0.5;
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

// Drift mu and rate lambda of the independent exponential time T_lambda.
struct ExpTimeParams {
  double mu = 0.0;
  double lambda = 1.0;

  void validate() const;
  double nu() const; // sqrt(2 lambda + mu^2)
  double a() const;  // (nu + mu) / 2
  double b() const;  // (nu - mu) / 2
};

// Density of (exp(B_T), A_T) at (y, u).
double exp_time_joint_density(const ExpTimeParams &p, double y, double u);

// Law of A_T = Z_{1,a} / (2 gamma_b).
double exp_time_density(const ExpTimeParams &p, double u);
double exp_time_cdf(const ExpTimeParams &p, double u);
std::vector<double> exp_time_sample(const ExpTimeParams &p, std::size_t count,
                                    std::uint64_t seed);

// E[exp(-alpha^2 A_inf^{(-mu)} / 2)] for the perpetuity A_inf^{(-mu)}.
double perpetuity_laplace(double mu, double alpha);
// Same with separate rates on the positive and negative half lines.
double two_sided_perpetuity_laplace(double mu, double alpha, double beta);
// CDF of 1 / (2 gamma_mu).
double inverse_gamma_cdf(double mu, double x);

double gig_density(const GigParams &g, double x);
double gig_cdf(const GigParams &g, double x);
// E[exp(-s X)] by quadrature.
double gig_laplace(const GigParams &g, double s);
std::vector<double> gig_sample(const GigParams &g, std::size_t count,
                               std::uint64_t seed);

// T_z(X)(s) = X_s - log(1 + z A_s(X)) on a uniform grid over [0, horizon],
// with A_s(X) the running trapezoid integral of exp(2X).
std::vector<double> path_transform(const std::vector<double> &path,
                                   double horizon, double z);

enum class LimitKind { gibbs, moment_density };

// gibbs: (mu, alpha) of exp(-alpha A_t). moment_density: (mu, m) of A_t^{-m}.
struct LimitLaw {
  LimitKind kind = LimitKind::gibbs;
  double mu = 0.0;
  double param = 0.5;

  void validate() const;
};

// Randomizer and drift of the limiting path law T_Z(B^{(drift)}).
struct LimitRecipe {
  enum class Randomizer { none, gig, twice_gamma };
  Randomizer randomizer = Randomizer::none;
  double shape = 0.0; // GIG order or gamma parameter
  double gig_a = 0.0;
  double drift = 0.0;
};

LimitRecipe limit_recipe(const LimitLaw &law);

// Values at time t of the limiting process, n_steps grid steps per path.
std::vector<double> limit_law_sample(const LimitLaw &law, double t,
                                     std::size_t count, std::uint64_t seed,
                                     std::size_t n_steps = 256);

} // namespace xbf
