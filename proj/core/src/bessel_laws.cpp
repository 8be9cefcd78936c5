#include "xbf/bessel_laws.hpp"

#include "xbf/errors.hpp"
#include "xbf/special_functions.hpp"

#include <cmath>

namespace xbf {

namespace {

constexpr double kZeroStart = 1e-12;

void check(const BesselParams &p) {
  if (!(p.index > -1.0)) {
    throw DomainError("Bessel index must exceed -1");
  }
  if (!(p.start >= 0.0)) {
    throw DomainError("Bessel starting point must be nonnegative");
  }
}

} // namespace

double log_transition_density(const BesselParams &p, double t, double y) {
  check(p);
  if (!(t > 0.0) || !(y > 0.0)) {
    throw DomainError("transition_density: t and y must be positive");
  }
  const double mu = p.index;
  const double x = p.start;
  if (x < kZeroStart) {
    return (1.0 + 2.0 * mu) * std::log(y) - y * y / (2.0 * t) -
           mu * std::log(2.0) - (1.0 + mu) * std::log(t) - std::lgamma(1.0 + mu);
  }
  const double z = x * y / t;
  const double prefix = std::log(y / t) + mu * std::log(y / x);
  if (z > 1.0) {
    // e^{-(x^2+y^2)/2t} I(z) = e^{-(x-y)^2/2t} [e^{-z} I(z)].
    return prefix - (x - y) * (x - y) / (2.0 * t) +
           std::log(bessel_i_scaled(mu, z));
  }
  return prefix - (x * x + y * y) / (2.0 * t) + log_bessel_i(mu, z);
}

double transition_density(const BesselParams &p, double t, double y) {
  return std::exp(log_transition_density(p, t, y));
}

double green_function(const BesselParams &p, double alpha, double y) {
  check(p);
  if (!(alpha > 0.0) || !(p.start > 0.0) || !(y > 0.0)) {
    throw DomainError("green_function: alpha, x and y must be positive");
  }
  const double mu = p.index;
  const double s = std::sqrt(2.0 * alpha);
  return std::exp(std::log(2.0 * y) + mu * std::log(y / p.start) +
                  log_f_product(mu, s * p.start, s * y));
}

double hw_conditional_char(double x, double y, double t, double mu) {
  if (!(x > 0.0) || !(y > 0.0) || !(t > 0.0)) {
    throw DomainError("hw_conditional_char: x, y, t must be positive");
  }
  const double r = x * y / t;
  return bessel_i_scaled(std::fabs(mu), r) / bessel_i_scaled(0.0, r);
}

} // namespace xbf
