#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace xbf {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  std::size_t max_subdivisions = 4000;
  // Tail cut: stop marching once |f| < truncation_threshold * running max.
  double truncation_threshold = 1e-18;

  void validate() const;
  double target(double value) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions_used = 0;
  bool converged = true;
};

// Endpoints may be infinite.
struct Interval {
  double lower;
  double upper;
};

using Integrand = std::function<double(double)>;
using ExtendedIntegrand = std::function<long double(long double)>;

// k-th sign change (k = 1, 2, ...) strictly increasing; +inf once exhausted.
using ZeroSequence = std::function<double(std::size_t)>;

IntegralResult integrate_adaptive(const Integrand &f, Interval domain,
                                  const QuadratureSpec &spec = {});

// Same engine with the integrand evaluated in extended precision.
IntegralResult integrate_adaptive_extended(const ExtendedIntegrand &f,
                                           Interval domain,
                                           const QuadratureSpec &spec = {});

struct OscillatoryOptions {
  double upper = std::numeric_limits<double>::infinity();
  bool accelerate = true;
};

IntegralResult integrate_oscillatory(const Integrand &f, double lower,
                                     const ZeroSequence &zeros,
                                     const QuadratureSpec &spec = {},
                                     OscillatoryOptions options = {});

IntegralResult integrate_oscillatory_extended(const ExtendedIntegrand &f,
                                              double lower,
                                              const ZeroSequence &zeros,
                                              const QuadratureSpec &spec = {},
                                              OscillatoryOptions options = {});

// \int_0^1 w^{p-1} (1-w)^{q-1} g(w) dw with both endpoint powers removed
// by substitution. Requires p, q > 0.
IntegralResult integrate_beta_weighted(double p, double q, const Integrand &g,
                                       const QuadratureSpec &spec = {});

// Wynn epsilon extrapolation of a sequence of partial sums.
struct Extrapolation {
  double value;
  double error_estimate;
};
Extrapolation wynn_epsilon(const double *partial_sums, std::size_t count);

} // namespace xbf
