#include "xbf/hartman_watson.hpp"

#include "xbf/errors.hpp"
#include "xbf/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace xbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Routing thresholds for ThetaMethod::automatic.
constexpr double kContourBelowT = 1.0;
constexpr double kContourAboveRT = 3.0;
// For small r the sine integral is a near-total cancellation (each Taylor
// term in r vanishes), so only the contour keeps relative accuracy.
constexpr double kContourBelowR = 0.1;
// A stalled route is retried on the other one only above this relative error.
constexpr double kRetryRelError = 1e-7;

double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r > 1.0) {
    r -= 2.0;
  } else if (r < -1.0) {
    r += 2.0;
  }
  return std::sin(kPi * r);
}

long double sinpi(long double x) {
  long double r = std::fmod(x, 2.0L);
  if (r > 1.0L) {
    r -= 2.0L;
  } else if (r < -1.0L) {
    r += 2.0L;
  }
  return std::sin(std::numbers::pi_v<long double> * r);
}

// Root of r sinh(x) = x / t on (0, inf); needs r t < 1.
double real_saddle(double r, double t) {
  const double target = 1.0 / (r * t);
  double lo = 0.0;
  double hi = 1.0;
  while (std::sinh(hi) / hi < target) {
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::sinh(mid) / mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Root of sin(y) / y = 1 / (r t) on (0, pi); needs r t > 1.
double imaginary_saddle(double r, double t) {
  const double target = 1.0 / (r * t);
  double lo = 0.0;
  double hi = kPi;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::sin(mid) / mid > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ScaledIntegral {
  double log_prefactor;
  IntegralResult integral;
};

ScaledIntegral theta_oscillatory(double r, double t, const ThetaEngine &e) {
  auto integrand = [r, t](double xi) {
    const double s = std::sinh(0.5 * xi);
    const double weight = std::exp(-xi * xi / (2.0 * t) - 2.0 * r * s * s);
    if (weight == 0.0) {
      return 0.0;
    }
    return weight * std::sinh(xi) * sinpi(xi / t);
  };
  auto zeros = [t](std::size_t k) { return static_cast<double>(k) * t; };
  OscillatoryOptions options;
  options.accelerate = e.acceleration_enabled;
  ScaledIntegral out;
  out.integral = integrate_oscillatory(integrand, 0.0, zeros, e.spec, options);
  out.log_prefactor = std::log(r) - 0.5 * std::log(2.0 * kPi * kPi * kPi * t) +
                      kPi * kPi / (2.0 * t) - r;
  return out;
}

ScaledIntegral theta_contour(double r, double t, const ThetaEngine &e) {
  const double rt = r * t;
  const double xs = rt < 1.0 ? real_saddle(r, t) : 0.0;
  // Above pi/2 the horizontal line gains the decay exp(r cosh(xi) cos(c)),
  // which sets in where the phase r sinh(xi) starts to oscillate.
  double c = 0.75 * kPi;
  if (rt > 1.0) {
    c = std::max(c, imaginary_saddle(r, t));
  }
  const bool quarter = c == kHalfPi;
  const double cos_c = quarter ? 0.0 : std::cos(c);
  const double sin_c = quarter ? 1.0 : std::sin(c);

  const double at_axis = r * std::cosh(xs) - xs * xs / (2.0 * t);
  const double at_corner =
      r * std::cosh(xs) * cos_c - (xs * xs - c * c) / (2.0 * t);
  const double shift = std::max(at_axis, at_corner);

  // Real part of w exp(r cosh w - w^2/2t) on w = xs + iy.
  auto vertical = [=](double y) {
    const double re = r * std::cosh(xs) * std::cos(y) -
                      (xs * xs - y * y) / (2.0 * t) - shift;
    const double mag = std::exp(re);
    if (mag == 0.0) {
      return 0.0;
    }
    const double im = r * std::sinh(xs) * std::sin(y) - xs * y / t;
    return mag * (xs * std::cos(im) - y * std::sin(im));
  };
  // Imaginary part of the same on w = xi + ic.
  auto horizontal = [=](double xi) {
    double re = -(xi * xi - c * c) / (2.0 * t) - shift;
    if (cos_c != 0.0) {
      re += r * std::cosh(xi) * cos_c;
    }
    const double mag = std::exp(re);
    if (mag == 0.0) {
      return 0.0;
    }
    const double im = r * std::sinh(xi) * sin_c - xi * c / t;
    return mag * (xi * std::sin(im) + c * std::cos(im));
  };

  IntegralResult total =
      integrate_adaptive(horizontal, Interval{xs, INFINITY}, e.spec);
  if (xs > 0.0) {
    const IntegralResult v =
        integrate_adaptive(vertical, Interval{0.0, c}, e.spec);
    total.value += v.value;
    total.error_estimate += v.error_estimate;
    total.subdivisions_used += v.subdivisions_used;
    total.converged = total.converged && v.converged;
  }
  ScaledIntegral out;
  out.integral = total;
  out.log_prefactor = shift - std::log(kPi) - 0.5 * std::log(2.0 * kPi * t * t * t);
  return out;
}

ThetaMethod resolve(ThetaMethod method, double r, double t) {
  if (method != ThetaMethod::automatic) {
    return method;
  }
  if (t < kContourBelowT || r < kContourBelowR || r * t >= kContourAboveRT) {
    return ThetaMethod::contour;
  }
  return ThetaMethod::oscillatory;
}

} // namespace

void ThetaEngine::validate() const {
  spec.validate();
  if (!(t_min > 0.0)) {
    throw ConfigurationError("ThetaEngine: t_min must be positive");
  }
}

void HwQuery::validate() const {
  if (!(r > 0.0) || !(t > 0.0) || !std::isfinite(r) || !std::isfinite(t)) {
    throw DomainError("theta: r and t must be positive and finite");
  }
}

Evaluation theta_scaled(const HwQuery &q, double log_shift,
                        const ThetaEngine &engine) {
  engine.validate();
  q.validate();
  const ThetaMethod method = resolve(engine.method, q.r, q.t);
  const auto run = [&](ThetaMethod m) {
    return m == ThetaMethod::contour ? theta_contour(q.r, q.t, engine)
                                     : theta_oscillatory(q.r, q.t, engine);
  };
  ScaledIntegral s = run(method);
  // Near the routing boundaries either form can stall; when the first one
  // is clearly poor, keep whichever has the smaller relative error.
  const auto rel = [](const IntegralResult &r) {
    return r.error_estimate / std::fabs(r.value);
  };
  if (engine.method == ThetaMethod::automatic && !s.integral.converged &&
      !(rel(s.integral) <= kRetryRelError)) {
    const ScaledIntegral other = run(method == ThetaMethod::contour
                                         ? ThetaMethod::oscillatory
                                         : ThetaMethod::contour);
    if (other.integral.converged || rel(other.integral) < rel(s.integral)) {
      s = other;
    }
  }
  const double factor = std::exp(s.log_prefactor - log_shift);
  Evaluation out;
  out.value = factor * s.integral.value;
  out.error_estimate = factor * s.integral.error_estimate;
  out.degraded = q.t < engine.t_min || !s.integral.converged;
  if (out.value < 0.0) {
    const double slack = 2.0 * out.error_estimate + factor * engine.spec.abs_tol;
    if (-out.value <= slack) {
      out.value = 0.0;
    } else {
      throw NumericalFailure("theta: negative value beyond error bar at r=" +
                             std::to_string(q.r) + ", t=" + std::to_string(q.t));
    }
  }
  return out;
}

Evaluation theta(const HwQuery &q, const ThetaEngine &engine) {
  return theta_scaled(q, 0.0, engine);
}

Evaluation hw_density(const HwQuery &q, const ThetaEngine &engine) {
  Evaluation e = theta_scaled(q, q.r, engine);
  const double norm = bessel_i_scaled(0.0, q.r);
  e.value /= norm;
  e.error_estimate /= norm;
  return e;
}

double theta_laplace_in_r(double x, double t, LaplaceWeight weight) {
  if (!(x > -1.0)) {
    throw DomainError("theta_laplace_in_r: x must exceed -1");
  }
  if (!(t > 0.0)) {
    throw DomainError("theta_laplace_in_r: t must be positive");
  }
  const double root = std::sqrt(2.0 * kPi * t);
  if (weight == LaplaceWeight::over_r) {
    if (x >= 1.0) {
      const double a = std::acosh(x);
      return std::exp(-a * a / (2.0 * t)) / root;
    }
    const double a = std::acos(x);
    return std::exp(a * a / (2.0 * t)) / root;
  }
  // Minus the x-derivative of the over_r form.
  const double root3 = root * t;
  if (std::fabs(x - 1.0) < 1e-9) {
    return 1.0 / root3;
  }
  if (x > 1.0) {
    const double a = std::acosh(x);
    return a / std::sqrt(x * x - 1.0) * std::exp(-a * a / (2.0 * t)) / root3;
  }
  const double a = std::acos(x);
  return a / std::sqrt(1.0 - x * x) * std::exp(a * a / (2.0 * t)) / root3;
}

IntegralResult theta_laplace_in_r_quadrature(double x, double t,
                                             LaplaceWeight weight,
                                             const ThetaEngine &engine) {
  if (!(x > -1.0)) {
    throw DomainError("theta_laplace_in_r: x must exceed -1");
  }
  auto integrand = [&](double r) {
    if (r <= 0.0) {
      return 0.0;
    }
    const double v = theta_scaled(HwQuery{r, t}, x * r, engine).value;
    return weight == LaplaceWeight::over_r ? v / r : v;
  };
  QuadratureSpec outer{1e-9, 1e-13, 2000, 1e-16};
  return integrate_adaptive(integrand, Interval{0.0, INFINITY}, outer);
}

IntegralResult stieltjes_integral(int n, double t, const QuadratureSpec &spec) {
  if (n < 1) {
    throw DomainError("stieltjes_integral: n must be at least 1");
  }
  if (!(t > 0.0)) {
    throw DomainError("stieltjes_integral: t must be positive");
  }
  const long double lt = t;
  const long double shift = n * lt;
  const long double amplitude = 0.5L * std::exp(0.5L * n * n * lt);
  // e^{-xi^2/2t} sinh(n xi) with the square completed around +-nt.
  auto integrand = [=](long double xi) {
    const long double dm = xi - shift;
    const long double dp = xi + shift;
    const long double bracket =
        std::exp(-dm * dm / (2.0L * lt)) - std::exp(-dp * dp / (2.0L * lt));
    return amplitude * bracket * sinpi(xi / lt);
  };
  auto zeros = [t](std::size_t k) { return static_cast<double>(k) * t; };
  return integrate_oscillatory_extended(integrand, 0.0, zeros, spec);
}

IntegralResult lognormal_moment(int n, double t, double lambda,
                                const QuadratureSpec &spec) {
  if (!(std::fabs(lambda) < 1.0)) {
    throw DomainError("lognormal_moment: |lambda| must be below 1");
  }
  if (!(t > 0.0)) {
    throw DomainError("lognormal_moment: t must be positive");
  }
  // e^{n xi} phi_t(xi) = e^{n^2 t/2} phi_t(xi - n t); fold xi -> -xi onto
  // the half line.
  const double center = n * t;
  const double norm = 1.0 / std::sqrt(2.0 * kPi * t);
  auto half = [=](double xi) {
    const double up = xi - center;
    const double down = -xi - center;
    const double s = lambda * sinpi(xi / t);
    return norm * (std::exp(-up * up / (2.0 * t)) * (1.0 + s) +
                   std::exp(-down * down / (2.0 * t)) * (1.0 - s));
  };
  auto zeros = [t](std::size_t k) { return static_cast<double>(k) * t; };
  IntegralResult r = integrate_oscillatory(half, 0.0, zeros, spec);
  const double scale = std::exp(0.5 * n * n * t);
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

} // namespace xbf
