#include "xbf/moments.hpp"

#include "xbf/errors.hpp"
#include "xbf/fixed_time.hpp"
#include "xbf/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace xbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
const QuadratureSpec kOuterSpec{1e-9, 1e-300, 2000, 1e-17};

void check_t(double t, const char *what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + ": t must be positive and finite");
  }
}

long double log_binomial(int n, int j) {
  return std::lgamma(n + 1.0L) - std::lgamma(j + 1.0L) - std::lgamma(n - j + 1.0L);
}

// \int_0^\infty x^{c-1} e^{-x/2} (a x + xi)^{-m} dx, in s = log x.
double gamma_type_integral(double c, double m, double a, double xi) {
  if (a == 0.0) {
    return std::exp(std::lgamma(c) + c * std::log(2.0) - m * std::log(xi));
  }
  auto integrand = [=](double s) {
    const double x = std::exp(s);
    if (x > 1e4) {
      return 0.0;
    }
    return std::exp(c * s - 0.5 * x - m * std::log(a * x + xi));
  };
  const QuadratureSpec spec{1e-12, 1e-300, 2000, 1e-20};
  const IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, spec);
  return r.value;
}

// \int g(u) dens(u | x) du with g = u^{power}, in s = log u.
IntegralResult conditional_power(double power, double t, double x,
                                 const ThetaEngine &engine) {
  const LawQuery q{0.0, t};
  auto integrand = [&](double s) {
    const double u = std::exp(s);
    if (!(u > 0.0) || !std::isfinite(u)) {
      return 0.0;
    }
    const double w = std::exp((power + 1.0) * s);
    return w * conditional_density(q, u, x, engine).value;
  };
  return integrate_adaptive(integrand, Interval{-kInf, kInf}, kOuterSpec);
}

} // namespace

void MomentQuery::validate() const {
  if (!std::isfinite(mu)) {
    throw DomainError("MomentQuery: mu must be finite");
  }
  check_t(t, "MomentQuery");
  if (n < 0) {
    throw DomainError("MomentQuery: n must be nonnegative");
  }
}

const char *to_string(Regime regime) {
  switch (regime) {
  case Regime::R1: return "R1";
  case Regime::L1: return "L1";
  case Regime::R2: return "R2";
  case Regime::L2: return "L2";
  case Regime::R3: return "R3";
  case Regime::L3: return "L3";
  }
  return "unknown";
}

Regime classify_regime(double mu, double m) {
  if (!std::isfinite(mu) || !std::isfinite(m)) {
    throw DomainError("classify_regime: mu and m must be finite");
  }
  if (mu > 0.0 && 2.0 * m > mu) {
    return Regime::R1;
  }
  if (mu > 0.0 && 2.0 * m == mu) {
    return Regime::L1;
  }
  if (m < mu && 2.0 * m < mu) {
    return Regime::R2;
  }
  if (mu < 0.0 && m == mu) {
    return Regime::L2;
  }
  if (mu < 0.0 && m > mu) {
    return Regime::R3;
  }
  if (mu == 0.0 && m > 0.0) {
    return Regime::L3;
  }
  throw DomainError("classify_regime: (mu, m) = (0, 0) lies in no regime");
}

void RegimeKey::validate() const {
  if (classify_regime(mu, m) != regime) {
    throw DomainError(std::string("RegimeKey: (mu, m) is not in ") + to_string(regime));
  }
}

double moment_coefficient(int n, int j, double mu) {
  if (n < 0 || j < 0 || j > n) {
    throw DomainError("moment_coefficient: need 0 <= j <= n");
  }
  long double prod = 1.0L;
  for (int k = 0; k <= n; ++k) {
    if (k == j) {
      continue;
    }
    const long double f = static_cast<long double>(mu) + j + k;
    if (f == 0.0L) {
      throw DivergenceError("moment_coefficient: pole at mu + j + k = 0");
    }
    prod /= f;
  }
  const long double sign = (n - j) % 2 == 0 ? 1.0L : -1.0L;
  return static_cast<double>(sign * std::exp(log_binomial(n, j) - n * std::log(2.0L)) * prod);
}

double moment_exact(const MomentQuery &q) {
  q.validate();
  if (q.n == 0) {
    return 1.0;
  }
  // e^{-mu^2 t/2} e^{t phi(mu + 2j)} = e^{t (2 mu j + 2 j^2)}.
  long double sum = 0.0L;
  for (int j = 0; j <= q.n; ++j) {
    const long double e = static_cast<long double>(q.t) * (2.0L * q.mu * j + 2.0L * j * j);
    sum += static_cast<long double>(moment_coefficient(q.n, j, q.mu)) * std::exp(e);
  }
  return static_cast<double>(sum);
}

std::complex<double> moment_oscillating(double alpha, int n, double t) {
  check_t(t, "moment_oscillating");
  if (n < 0) {
    throw DomainError("moment_oscillating: n must be nonnegative");
  }
  using C = std::complex<long double>;
  const C mu(0.0L, alpha);
  C sum(0.0L, 0.0L);
  for (int j = 0; j <= n; ++j) {
    C coeff(((n - j) % 2 == 0 ? 1.0L : -1.0L) *
                std::exp(log_binomial(n, j) - n * std::log(2.0L)),
            0.0L);
    for (int k = 0; k <= n; ++k) {
      if (k != j) {
        coeff /= mu + static_cast<long double>(j + k);
      }
    }
    // t phi(i alpha + 2j) = t (4 j^2 - alpha^2)/2 + i 2 j alpha t.
    const long double lt = t;
    const long double re = lt * (2.0L * j * j - 0.5L * alpha * alpha);
    const long double im = 2.0L * j * alpha * lt;
    sum += coeff * std::exp(re) * C(std::cos(im), std::sin(im));
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double moment_bougerol(int n, double t) {
  check_t(t, "moment_bougerol");
  if (n < 1) {
    throw DomainError("moment_bougerol: n must be positive");
  }
  // Gaussian moment E[B_1^{2n}] = (2n - 1)!!.
  double double_factorial = 1.0;
  for (int k = 1; k <= n; ++k) {
    double_factorial *= 2.0 * k - 1.0;
  }
  const double peak = 2.0 * n * n * t;
  auto integrand = [=](double x) {
    if (x == 0.0) {
      return 0.0;
    }
    const double s = std::fabs(std::sinh(x));
    return std::exp(2.0 * n * std::log(s) - x * x / (2.0 * t) - peak);
  };
  const QuadratureSpec spec{1e-13, 1e-300, 2000, 1e-20};
  const IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, spec);
  return r.value * std::exp(peak) / std::sqrt(2.0 * kPi * t) / double_factorial;
}

double moment_laplace(double mu, int n, double lambda) {
  if (n < 0) {
    throw DomainError("moment_laplace: n must be nonnegative");
  }
  const double top = 0.5 * (mu + 2.0 * n) * (mu + 2.0 * n);
  double largest = 0.0;
  for (int j = 0; j <= n; ++j) {
    largest = std::max(largest, 0.5 * (mu + 2.0 * j) * (mu + 2.0 * j));
  }
  if (!(lambda > largest) || !(lambda > top)) {
    throw DomainError("moment_laplace: lambda must exceed every pole phi(mu + 2j)");
  }
  long double value = std::tgamma(n + 1.0L);
  for (int j = 0; j <= n; ++j) {
    value /= static_cast<long double>(lambda) - 0.5L * (mu + 2.0L * j) * (mu + 2.0L * j);
  }
  return static_cast<double>(value);
}

double log_conditional_moment_kernel(int n, double t, double x) {
  check_t(t, "conditional_moment");
  if (n < 0) {
    throw DomainError("conditional_moment: n must be nonnegative");
  }
  const double ax = std::fabs(x);
  // Peak of n log(cosh b) - b^2/2t sits near b = n t.
  const double b_peak = std::max(ax + 1.0, n * t);
  const double peak = n * std::log(std::cosh(b_peak)) - b_peak * b_peak / (2.0 * t);
  auto integrand = [=](double b) {
    if (!(b > ax)) {
      return 0.0;
    }
    const double gap = 2.0 * std::sinh(0.5 * (b + ax)) * std::sinh(0.5 * (b - ax));
    const double lg = n == 0 ? 0.0 : n * std::log(gap);
    return b * std::exp(lg - b * b / (2.0 * t) - peak);
  };
  const QuadratureSpec spec{1e-13, 1e-300, 2000, 1e-20};
  const IntegralResult r = integrate_adaptive(integrand, Interval{ax, kInf}, spec);
  return std::log(r.value) + peak + n * x - std::lgamma(n + 1.0) -
         0.5 * std::log(2.0 * kPi * t * t * t);
}

double conditional_moment(int n, double t, double x) {
  if (n < 1) {
    throw DomainError("conditional_moment: n must be positive");
  }
  if (!std::isfinite(x)) {
    throw DomainError("conditional_moment: x must be finite");
  }
  const double log_gauss = -x * x / (2.0 * t) - 0.5 * std::log(2.0 * kPi * t);
  return std::exp(log_conditional_moment_kernel(n, t, x) - log_gauss);
}

IntegralResult conditional_moment_density(int n, double t, double x,
                                          const ThetaEngine &engine) {
  check_t(t, "conditional_moment");
  if (n < 1) {
    throw DomainError("conditional_moment: n must be positive");
  }
  return conditional_power(static_cast<double>(n), t, x, engine);
}

IntegralResult conditional_negative_moment(double p, double t, double x,
                                           const ThetaEngine &engine) {
  check_t(t, "conditional_negative_moment");
  if (!(p > 0.0)) {
    throw DomainError("conditional_negative_moment: p must be positive");
  }
  return conditional_power(-p, t, x, engine);
}

IntegralResult negative_moment(const MomentQuery &q, const ThetaEngine &engine) {
  q.validate();
  if (!(q.p > 0.0)) {
    throw DomainError("negative_moment: p must be positive");
  }
  const LawQuery law{q.mu, q.t};
  // (2a)^p f(a) da with a = e^s.
  auto integrand = [&](double s) {
    const double a = std::exp(s);
    if (!(a > 0.0) || !std::isfinite(a)) {
      return 0.0;
    }
    const double w = std::exp(q.p * std::log(2.0 * a) + s);
    return w * f_reciprocal(law, a, engine).value;
  };
  return integrate_adaptive(integrand, Interval{-kInf, kInf}, kOuterSpec);
}

double positive_moment_constant(int n) {
  if (n < 1) {
    throw DomainError("positive_moment_constant: n must be positive");
  }
  return std::sqrt(kPi) / (std::tgamma(n + 0.5) * std::pow(2.0, 3.0 * n - 1.0));
}

double negative_moment_constant(double p) {
  if (!(p > 0.0)) {
    throw DomainError("negative_moment_constant: p must be positive");
  }
  return std::tgamma(p) / (std::pow(2.0, 0.5 - p) * std::sqrt(kPi));
}

double laplace_constant(double mu, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(mu)) {
    throw DomainError("laplace_constant: alpha must be positive");
  }
  const double z = std::sqrt(2.0 * alpha);
  if (mu > 0.0) {
    const double g = std::tgamma(0.5 * mu);
    return std::pow(2.0, mu - 1.5) / std::sqrt(kPi) * g * g * bessel_k(0.0, z) /
           std::pow(z, mu);
  }
  if (mu == 0.0) {
    return std::sqrt(2.0 / kPi) * bessel_k(0.0, z);
  }
  return std::pow(2.0, mu + 1.0) / std::tgamma(-mu) * bessel_k(mu, z) / std::pow(z, mu);
}

double laplace_scale(double mu, double t) {
  check_t(t, "laplace_scale");
  if (mu > 0.0) {
    return std::pow(t, 1.5) * std::exp(0.5 * mu * mu * t);
  }
  if (mu == 0.0) {
    return std::sqrt(t);
  }
  return 1.0;
}

double regime_constant(const RegimeKey &key, double a, double xi) {
  key.validate();
  if (!(a >= 0.0) || !(xi > 0.0)) {
    throw DomainError("regime_constant: need a >= 0 and xi > 0");
  }
  const double mu = key.mu;
  const double m = key.m;
  switch (key.regime) {
  case Regime::R1: {
    const double h = 0.5 * mu;
    const double beta = std::exp(std::lgamma(h) + std::lgamma(m - h) - std::lgamma(m));
    return std::pow(2.0, 0.5 * (mu - 5.0)) / std::sqrt(kPi) * std::tgamma(h) * beta *
           std::pow(xi, -h) * gamma_type_integral(m - h, m - h, a, xi);
  }
  case Regime::L1:
    return std::pow(2.0, m - 0.5) / std::sqrt(kPi) * std::tgamma(m) * std::pow(xi, -m);
  case Regime::R2:
    return std::pow(2.0, m) * std::tgamma(mu - m) / std::tgamma(mu - 2.0 * m) *
           std::pow(xi, -m);
  case Regime::L2:
    return std::pow(2.0, m + 1.0) * std::fabs(mu) / std::tgamma(std::fabs(mu)) *
           std::pow(xi, -m);
  case Regime::R3:
    return std::pow(2.0, mu) / std::tgamma(std::fabs(mu)) *
           gamma_type_integral(m - mu, m, a, xi);
  case Regime::L3:
    return 1.0 / std::sqrt(2.0 * kPi) * gamma_type_integral(m, m, a, xi);
  }
  throw DomainError("regime_constant: unknown regime");
}

double regime_scale(const RegimeKey &key, double t) {
  key.validate();
  check_t(t, "regime_scale");
  const double mu = key.mu;
  const double m = key.m;
  switch (key.regime) {
  case Regime::R1: return std::pow(t, 1.5) * std::exp(0.5 * mu * mu * t);
  case Regime::L1: return std::sqrt(t) * std::exp(0.5 * mu * mu * t);
  case Regime::R2: return std::exp(2.0 * m * (mu - m) * t);
  case Regime::L2: return 1.0 / t;
  case Regime::R3: return 1.0;
  case Regime::L3: return std::sqrt(t);
  }
  throw DomainError("regime_scale: unknown regime");
}

IntegralResult delta_general(double mu, double m, double a, double xi, double t,
                             const ThetaEngine &engine) {
  check_t(t, "delta_general");
  if (!(xi > 0.0) || !(a >= 0.0) || !std::isfinite(m) || !std::isfinite(mu)) {
    throw DomainError("delta_general: need xi > 0, a >= 0");
  }
  if (m == 0.0) {
    return IntegralResult{1.0, 0.0, 0, true};
  }
  const LawQuery law{mu, t};
  // A = 1 / (2b), b = e^s.
  auto integrand = [&](double s) {
    const double b = std::exp(s);
    if (!(b > 0.0) || !std::isfinite(b)) {
      return 0.0;
    }
    const double base = a + xi / (2.0 * b);
    const double w = std::exp(-m * std::log(base) + s);
    if (w == 0.0 || !std::isfinite(w)) {
      return 0.0;
    }
    return w * f_reciprocal(law, b, engine).value;
  };
  return integrate_adaptive(integrand, Interval{-kInf, kInf}, kOuterSpec);
}

double carleman_partial_sum(int N, double t, double x) {
  if (N < 1) {
    throw DomainError("carleman_partial_sum: N must be positive");
  }
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) {
    sum += std::exp(-log_conditional_moment_kernel(n, t, x) / (2.0 * n));
  }
  return sum;
}

} // namespace xbf
