#include "xbf/special_functions.hpp"

#include "xbf/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace xbf {

namespace {

constexpr double kScaledSwitchI = 500.0;
constexpr double kScaledSwitchK = 600.0;

// sum_k s^k a_k(nu) / x^k with a_k = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k).
double large_argument_series(double nu, double x, double sign) {
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double previous = std::fabs(term);
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu4 - odd * odd) / (8.0 * k * x);
    const double size = std::fabs(term);
    if (size > previous) {
      break;
    }
    sum += term;
    if (size < 1e-17 * std::fabs(sum)) {
      break;
    }
    previous = size;
  }
  return sum;
}

void check_positive(double x, const char *what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be positive, got " +
                      std::to_string(x));
  }
}

} // namespace

double bessel_i(BesselOrder order, double x) {
  if (order.is_imaginary) {
    throw DomainError("bessel_i: imaginary order is not supported");
  }
  return bessel_i(order.order, x);
}

double bessel_i(double order, double x) {
  if (!(order > -1.0)) {
    throw DomainError("bessel_i: order must exceed -1");
  }
  check_positive(x, "bessel_i");
  if (x <= kScaledSwitchI) {
    return boost::math::cyl_bessel_i(order, x);
  }
  return std::exp(log_bessel_i(order, x));
}

double bessel_i_scaled(double order, double x) {
  if (!(order > -1.0)) {
    throw DomainError("bessel_i: order must exceed -1");
  }
  check_positive(x, "bessel_i");
  if (x <= kScaledSwitchI) {
    return boost::math::cyl_bessel_i(order, x) * std::exp(-x);
  }
  return large_argument_series(order, x, -1.0) /
         std::sqrt(2.0 * std::numbers::pi * x);
}

double log_bessel_i(double order, double x) {
  if (!(order > -1.0)) {
    throw DomainError("bessel_i: order must exceed -1");
  }
  check_positive(x, "bessel_i");
  if (x > kScaledSwitchI) {
    return std::log(bessel_i_scaled(order, x)) + x;
  }
  const double value = boost::math::cyl_bessel_i(order, x);
  if (value > 1e-290) {
    return std::log(value);
  }
  // Tiny argument with positive order: leading series term.
  return order * std::log(0.5 * x) - std::lgamma(order + 1.0) +
         std::log1p(0.25 * x * x / (order + 1.0));
}

double bessel_k(double order, double x) {
  check_positive(x, "bessel_k");
  const double nu = std::fabs(order);
  if (x <= kScaledSwitchK) {
    return boost::math::cyl_bessel_k(nu, x);
  }
  return bessel_k_scaled(nu, x) * std::exp(-x);
}

double bessel_k_scaled(double order, double x) {
  check_positive(x, "bessel_k");
  const double nu = std::fabs(order);
  if (x <= kScaledSwitchK) {
    return boost::math::cyl_bessel_k(nu, x) * std::exp(x);
  }
  return large_argument_series(nu, x, 1.0) *
         std::sqrt(std::numbers::pi / (2.0 * x));
}

double log_bessel_k(double order, double x) {
  check_positive(x, "bessel_k");
  const double nu = std::fabs(order);
  if (x > 1.0) {
    return std::log(bessel_k_scaled(nu, x)) - x;
  }
  const double value = boost::math::cyl_bessel_k(nu, x);
  if (std::isfinite(value)) {
    return std::log(value);
  }
  // Overflow for tiny x and large order: K ~ Gamma(nu) 2^{nu-1} x^{-nu}.
  return std::lgamma(nu) + (nu - 1.0) * std::log(2.0) - nu * std::log(x);
}

IntegralResult bessel_k_imag(double eta, double x, const QuadratureSpec &spec) {
  check_positive(x, "bessel_k_imag");
  const double scale = std::exp(-x);
  // e^{-x(cosh u - 1)} written with 2 sinh^2(u/2) to keep small-u accuracy.
  auto integrand = [eta, x](double u) {
    const double s = std::sinh(0.5 * u);
    return std::exp(-2.0 * x * s * s) * std::cos(eta * u);
  };
  QuadratureSpec inner = spec;
  inner.abs_tol = spec.abs_tol / scale;
  IntegralResult r = integrate_adaptive(integrand, Interval{0.0, INFINITY}, inner);
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

double bessel_j0(double x) {
  const double ax = std::fabs(x);
  if (ax <= 20.0) {
    const long double q = -0.25L * static_cast<long double>(ax) * ax;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int n = 1; n < 300; ++n) {
      term *= q / (static_cast<long double>(n) * n);
      sum += term;
      if (std::fabs(term) < 1e-21L * (1.0L + std::fabs(sum)) && n > ax) {
        break;
      }
    }
    return static_cast<double>(sum);
  }
  // Hankel expansion J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), with
  // b_k = prod_{j<=k} (2j-1)^2 / (k! (8x)^k).
  long double p = 1.0L;
  long double q = 0.0L;
  long double b = 1.0L;
  const long double z = 8.0L * ax;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    const long double next = b * odd * odd / (k * z);
    if (next > b) {
      break;
    }
    b = next;
    const int m = k / 2;
    const long double sign = m % 2 == 0 ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      p += sign * b;
    } else {
      q -= sign * b;
    }
    if (b < 1e-20L) {
      break;
    }
  }
  const long double chi = ax - std::numbers::pi_v<long double> / 4.0L;
  const long double amp =
      std::sqrt(2.0L / (std::numbers::pi_v<long double> * ax));
  return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

namespace {

double hypergeometric_series(double a, double b, double c, double z) {
  long double term = 1.0L;
  long double sum = 1.0L;
  int small = 0;
  for (int n = 0; n < 200000; ++n) {
    term *= (static_cast<long double>(a) + n) * (static_cast<long double>(b) + n) /
            ((static_cast<long double>(c) + n) * (n + 1.0L)) * z;
    sum += term;
    if (term == 0.0L) {
      break;
    }
    if (std::fabs(term) < 1e-19L * std::fabs(sum)) {
      if (++small >= 3) {
        break;
      }
    } else {
      small = 0;
    }
  }
  return static_cast<double>(sum);
}

double hypergeometric_euler(double a, double b, double c, double z) {
  if (!(c > b && b > 0.0)) {
    throw DomainError("gauss_2f1: Euler integral needs c > b > 0");
  }
  // 2F1 = Gamma(c)/(Gamma(b)Gamma(c-b)) int t^{b-1}(1-t)^{c-b-1}(1-tz)^{-a}.
  const double log_norm =
      std::lgamma(c) - std::lgamma(b) - std::lgamma(c - b);
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-300;
  IntegralResult r;
  if (z == 1.0) {
    // (1-t)^{c-b-1} (1-t)^{-a}: fold the power into the substitution.
    r = integrate_beta_weighted(
        b, c - b - a, [](double) { return 1.0; }, spec);
  } else {
    r = integrate_beta_weighted(
        b, c - b, [a, z](double t) { return std::pow(1.0 - t * z, -a); }, spec);
  }
  if (!r.converged) {
    throw NumericalFailure("gauss_2f1: Euler integral did not converge");
  }
  return std::exp(log_norm) * r.value;
}

} // namespace

double gauss_2f1(double a, double b, double c, double z,
                 HypergeometricMethod method) {
  if (!(z > 0.0) || !(z <= 1.0)) {
    throw DomainError("gauss_2f1: argument must lie in (0, 1]");
  }
  if (z == 1.0 && !(c - a - b > 0.0)) {
    throw DivergenceError("gauss_2f1: divergent at z = 1 since c - a - b <= 0");
  }
  if (method == HypergeometricMethod::series) {
    if (z == 1.0) {
      throw ConfigurationError("gauss_2f1: series path needs z < 1");
    }
    return hypergeometric_series(a, b, c, z);
  }
  const bool b_ok = c > b && b > 0.0;
  const bool a_ok = c > a && a > 0.0;
  if (method == HypergeometricMethod::euler_integral) {
    if (b_ok) {
      return hypergeometric_euler(a, b, c, z);
    }
    if (a_ok) {
      return hypergeometric_euler(b, a, c, z);
    }
    throw DomainError("gauss_2f1: Euler integral needs c > b > 0");
  }
  if (z <= 0.9) {
    return hypergeometric_series(a, b, c, z);
  }
  if (b_ok) {
    return hypergeometric_euler(a, b, c, z);
  }
  if (a_ok) {
    return hypergeometric_euler(b, a, c, z);
  }
  if (z < 1.0) {
    return hypergeometric_series(a, b, c, z);
  }
  throw DomainError("gauss_2f1: no convergent representation at z = 1");
}

double log_f_product(double mu, double x, double y) {
  if (!(mu > -1.0)) {
    throw DomainError("f_product: order must exceed -1");
  }
  check_positive(x, "f_product");
  check_positive(y, "f_product");
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  return log_bessel_i(mu, lo) + log_bessel_k(mu, hi);
}

double f_product(double mu, double x, double y) {
  return std::exp(log_f_product(mu, x, y));
}

} // namespace xbf
