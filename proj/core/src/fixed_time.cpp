#include "xbf/fixed_time.hpp"

#include "xbf/errors.hpp"
#include "xbf/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace xbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Outer integrals wrap theta evaluations that carry ~1e-10 relative error.
const QuadratureSpec kOuterSpec{1e-8, 1e-300, 2000, 1e-17};
// Integrals that are themselves integrated again must resolve well below the
// outer tolerance, or the outer adaptive pass chases their noise.
const QuadratureSpec kInnerSpec{1e-11, 1e-300, 2000, 1e-18};

void check_positive(double v, const char *what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

Evaluation to_evaluation(const IntegralResult &r, bool degraded) {
  Evaluation e;
  e.value = r.value;
  e.error_estimate = r.error_estimate;
  e.degraded = degraded || !r.converged;
  return e;
}

// f^{(0)}(a, t), single oscillatory integral with zeros at (2k - 1) t.
Evaluation f0_dufresne(double a, double t, const ThetaEngine &engine) {
  auto integrand = [a, t](double y) {
    const double s = std::sinh(y);
    const double w = std::exp(-y * y / (2.0 * t) - a * s * s);
    if (w == 0.0) {
      return 0.0;
    }
    return w * std::cosh(y) * std::cos(kPi * y / (2.0 * t));
  };
  auto zeros = [t](std::size_t k) { return (2.0 * static_cast<double>(k) - 1.0) * t; };
  QuadratureSpec spec = engine.spec;
  spec.abs_tol = std::min(spec.abs_tol, 1e-16);
  const IntegralResult r = integrate_oscillatory(integrand, 0.0, zeros, spec);
  const double pref = 2.0 * std::exp(kPi * kPi / (8.0 * t) - a) /
                      (kPi * std::sqrt(2.0 * t * a));
  Evaluation e;
  e.value = std::max(0.0, pref * r.value);
  e.error_estimate = pref * r.error_estimate;
  e.degraded = !r.converged;
  return e;
}

// f^{(1)}(a, t), zeros at 2 k t.
Evaluation f1_dufresne(double a, double t, const ThetaEngine &engine) {
  auto integrand = [a, t](double y) {
    const double s = std::sinh(y);
    const double w = std::exp(-y * y / (2.0 * t) - a * s * s);
    if (w == 0.0) {
      return 0.0;
    }
    return w * s * std::cosh(y) * std::sin(kPi * y / (2.0 * t));
  };
  auto zeros = [t](std::size_t k) { return 2.0 * static_cast<double>(k) * t; };
  QuadratureSpec spec = engine.spec;
  spec.abs_tol = std::min(spec.abs_tol, 1e-16);
  const IntegralResult r = integrate_oscillatory(integrand, 0.0, zeros, spec);
  const double pref = 2.0 * std::exp(kPi * kPi / (8.0 * t) - 0.5 * t - a) /
                      (kPi * std::sqrt(2.0 * t * a));
  Evaluation e;
  e.value = std::max(0.0, pref * r.value);
  e.error_estimate = pref * r.error_estimate;
  e.degraded = !r.converged;
  return e;
}

// f^{(mu)}(a, t) = 2 e^{-mu^2 t/2 - a} a^{-(mu+1)/2}
//   \int_0^\infty eta^mu e^{-eta^2} theta(2 sqrt(a) eta, t) / (2 sqrt(a) eta) d eta,
// integrated in s = log(eta) so that mass at tiny eta is resolved.
Evaluation f_theta_integral(double mu, double a, double t,
                            const ThetaEngine &engine) {
  const double root_a = std::sqrt(a);
  const double base = std::log(2.0) - 0.5 * mu * mu * t - a -
                      0.5 * (mu + 1.0) * std::log(a) - std::log(2.0 * root_a);
  bool degraded = false;
  auto integrand = [&](double s) {
    const double eta = std::exp(s);
    const double r = 2.0 * root_a * eta;
    // theta is O(r) as r -> 0; below 1e-250 the term is negligible and subnormal r breaks theta.
    if (!(r > 1e-250) || !std::isfinite(r) || eta * eta > 800.0) {
      return 0.0;
    }
    const double log_factor = base + mu * s - eta * eta;
    const Evaluation th = theta_scaled(HwQuery{r, t}, -log_factor, engine);
    degraded = degraded || th.degraded;
    return th.value;
  };
  const IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, kInnerSpec);
  Evaluation e = to_evaluation(r, degraded);
  e.value = std::max(0.0, e.value);
  return e;
}

// sinh(2 xi) / (cosh(2 xi) + cosh(2 eta)) without overflow.
long double tanh_ratio(long double xi, long double eta) {
  const long double m = std::max(xi, eta);
  const long double num = std::exp(2.0L * xi - 2.0L * m) - std::exp(-2.0L * xi - 2.0L * m);
  const long double den = std::exp(2.0L * xi - 2.0L * m) + std::exp(-2.0L * xi - 2.0L * m) +
                          std::exp(2.0L * eta - 2.0L * m) + std::exp(-2.0L * eta - 2.0L * m);
  return num / den;
}

// The mu = 0 double integral over (eta, xi).
Evaluation f0_double_integral(double a, double t) {
  const long double lt = t;
  const long double pi = std::numbers::pi_v<long double>;
  bool degraded = false;
  QuadratureSpec inner{1e-13, 1e-17, 4000, 1e-20};
  auto outer = [&](double eta) {
    const double s = std::sinh(eta);
    const double w = std::exp(-a * s * s);
    if (w == 0.0) {
      return 0.0;
    }
    const long double le = eta;
    auto f = [=](long double xi) {
      return std::exp(-xi * xi / (2.0L * lt)) * tanh_ratio(xi, le) *
             std::sin(pi * xi / lt);
    };
    auto zeros = [t](std::size_t k) { return static_cast<double>(k) * t; };
    const IntegralResult r = integrate_oscillatory_extended(f, 0.0, zeros, inner);
    degraded = degraded || !r.converged;
    return w * std::cosh(eta) * r.value;
  };
  const IntegralResult r = integrate_adaptive(outer, Interval{0.0, kInf}, kOuterSpec);
  const double pref = 2.0 * std::exp(kPi * kPi / (2.0 * t) - a) /
                      (kPi * kPi * std::sqrt(2.0 * t) * std::sqrt(a));
  Evaluation e;
  e.value = std::max(0.0, pref * r.value);
  e.error_estimate = pref * r.error_estimate;
  e.degraded = degraded || !r.converged;
  return e;
}

void check_h_domain(const HFunctionQuery &hq) { hq.validate(); }

} // namespace

void LawQuery::validate() const {
  if (!std::isfinite(mu)) {
    throw DomainError("LawQuery: mu must be finite");
  }
  check_positive(t, "LawQuery: t");
}

void DensityGrid::validate() const {
  if (abscissae.size() != values.size() || abscissae.size() < 2) {
    throw ContractError("DensityGrid: need at least two matching points");
  }
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    if (!(abscissae[i] > 0.0)) {
      throw ContractError("DensityGrid: abscissae must be positive");
    }
    if (i > 0 && !(abscissae[i] > abscissae[i - 1])) {
      throw ContractError("DensityGrid: abscissae must increase strictly");
    }
    if (!(values[i] >= 0.0)) {
      throw ContractError("DensityGrid: values must be nonnegative");
    }
  }
}

double DensityGrid::operator()(double x) const {
  if (abscissae.empty() || x < abscissae.front() || x > abscissae.back()) {
    return 0.0;
  }
  const auto it = std::upper_bound(abscissae.begin(), abscissae.end(), x);
  if (it == abscissae.end()) {
    return values.back();
  }
  const std::size_t j = static_cast<std::size_t>(it - abscissae.begin());
  const double x0 = abscissae[j - 1];
  const double x1 = abscissae[j];
  const double w = (x - x0) / (x1 - x0);
  return (1.0 - w) * values[j - 1] + w * values[j];
}

void HFunctionQuery::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(r)) {
    throw DomainError("HFunctionQuery: mu and r must be finite");
  }
  if (!(s <= 0.0)) {
    throw DomainError("HFunctionQuery: s must be nonpositive");
  }
  check_positive(t, "HFunctionQuery: t");
}

Evaluation joint_density(const LawQuery &q, double u, double x,
                         const ThetaEngine &engine) {
  q.validate();
  check_positive(u, "joint_density: u");
  if (!std::isfinite(x)) {
    throw DomainError("joint_density: x must be finite");
  }
  const double r = std::exp(x) / u;
  if (!(r > 0.0) || !std::isfinite(r)) {
    return Evaluation{};
  }
  // (1 + e^{2x}) / 2u = r cosh(x).
  const double shift = r * std::cosh(x) - q.mu * x + 0.5 * q.mu * q.mu * q.t + std::log(u);
  return theta_scaled(HwQuery{r, q.t}, shift, engine);
}

Evaluation conditional_density(const LawQuery &q, double u, double given_x,
                               const ThetaEngine &engine) {
  q.validate();
  check_positive(u, "conditional_density: u");
  if (!std::isfinite(given_x)) {
    throw DomainError("conditional_density: x must be finite");
  }
  const double r = std::exp(given_x) / u;
  if (!(r > 0.0) || !std::isfinite(r)) {
    return Evaluation{};
  }
  // The drift cancels against the Gaussian density of B_t^{(mu)}.
  const double shift = r * std::cosh(given_x) + std::log(u) -
                       given_x * given_x / (2.0 * q.t) -
                       0.5 * std::log(2.0 * kPi * q.t);
  return theta_scaled(HwQuery{r, q.t}, shift, engine);
}

ReciprocalMethod default_reciprocal_method(double mu) {
  if (mu == 0.0 || mu == 1.0) {
    return ReciprocalMethod::dufresne;
  }
  return ReciprocalMethod::theta_integral;
}

Evaluation f_reciprocal(const LawQuery &q, double a, ReciprocalMethod method,
                        const ThetaEngine &engine) {
  q.validate();
  engine.validate();
  check_positive(a, "f_reciprocal: a");
  switch (method) {
  case ReciprocalMethod::dufresne:
    if (q.mu == 0.0) {
      return f0_dufresne(a, q.t, engine);
    }
    if (q.mu == 1.0) {
      return f1_dufresne(a, q.t, engine);
    }
    throw ConfigurationError("f_reciprocal: dufresne method needs mu in {0, 1}");
  case ReciprocalMethod::theta_integral:
    return f_theta_integral(q.mu, a, q.t, engine);
  case ReciprocalMethod::convolution: {
    if (!(q.mu < 1.0)) {
      throw ConfigurationError("f_reciprocal: convolution needs mu < 1");
    }
    bool degraded = false;
    auto base = [&](double b) {
      const Evaluation e = f1_dufresne(b, q.t, engine);
      degraded = degraded || e.degraded;
      return e.value;
    };
    Evaluation e;
    e.value = dufresne_convolve(base, 1.0, q.mu, q.t, a);
    e.degraded = degraded;
    return e;
  }
  case ReciprocalMethod::double_integral:
    if (q.mu != 0.0) {
      throw ConfigurationError("f_reciprocal: double_integral needs mu = 0");
    }
    return f0_double_integral(a, q.t);
  }
  throw ConfigurationError("f_reciprocal: unknown method");
}

Evaluation f_reciprocal(const LawQuery &q, double a, const ThetaEngine &engine) {
  const ReciprocalMethod m = default_reciprocal_method(q.mu);
  const Evaluation e = f_reciprocal(q, a, m, engine);
  // Dufresne's cosine integral cancels badly in the far left tail of a; the
  // theta route keeps relative accuracy there.
  constexpr double kFallbackRelError = 1e-7;
  if (m == ReciprocalMethod::dufresne && e.degraded &&
      !(e.error_estimate <= kFallbackRelError * e.value)) {
    return f_theta_integral(q.mu, a, q.t, engine);
  }
  return e;
}

Evaluation density_of_A(const LawQuery &q, double u, DensityMethod method,
                        const ThetaEngine &engine) {
  q.validate();
  check_positive(u, "density_of_A: u");
  if (method == DensityMethod::reciprocal) {
    Evaluation e = f_reciprocal(q, 0.5 / u, engine);
    const double jac = 0.5 / (u * u);
    e.value *= jac;
    e.error_estimate *= jac;
    return e;
  }
  if (q.mu != 0.0) {
    throw ConfigurationError("density_of_A: contour method needs mu = 0");
  }
  // Re[cosh(xi) exp(-cosh^2(xi)/2u - (xi + i pi/2)^2 / 2t)] over the real line,
  // with e^{-1/2u + pi^2/8t} taken out.
  const double t = q.t;
  auto integrand = [u, t](double xi) {
    const double s = std::sinh(xi);
    const double w = std::exp(-s * s / (2.0 * u) - xi * xi / (2.0 * t));
    if (w == 0.0) {
      return 0.0;
    }
    return w * std::cosh(xi) * std::cos(kPi * xi / (2.0 * t));
  };
  QuadratureSpec spec = engine.spec;
  spec.abs_tol = std::min(spec.abs_tol, 1e-16);
  const IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, spec);
  const double pref = std::exp(-0.5 / u + kPi * kPi / (8.0 * t)) /
                      (2.0 * kPi * std::sqrt(t) * u * std::sqrt(u));
  Evaluation e;
  e.value = std::max(0.0, pref * r.value);
  e.error_estimate = pref * r.error_estimate;
  e.degraded = !r.converged;
  return e;
}

IntegralResult laplace_of_A(const LawQuery &q, double alpha, LaplaceMethod method,
                            const ThetaEngine &engine) {
  q.validate();
  check_positive(alpha, "laplace_of_A: alpha");
  const double t = q.t;
  switch (method) {
  case LaplaceMethod::density_quadrature: {
    const double c = 0.25 * alpha * alpha;
    // In s = log a, split where 1/(2 A_t) concentrates for small t.
    auto integrand = [&](double s) {
      const double a = std::exp(s);
      if (!(a > 0.0) || !std::isfinite(a)) {
        return 0.0;
      }
      const double w = std::exp(-c / a);
      if (w == 0.0) {
        return 0.0;
      }
      return a * w * f_reciprocal(q, a, engine).value;
    };
    const double mid = -std::log(2.0 * t);
    IntegralResult lo = integrate_adaptive(integrand, Interval{-kInf, mid}, kOuterSpec);
    const IntegralResult hi = integrate_adaptive(integrand, Interval{mid, kInf}, kOuterSpec);
    lo.value += hi.value;
    lo.error_estimate += hi.error_estimate;
    lo.subdivisions_used += hi.subdivisions_used;
    lo.converged = lo.converged && hi.converged;
    return lo;
  }
  case LaplaceMethod::bougerol_cos: {
    if (q.mu != 0.0) {
      throw ConfigurationError("laplace_of_A: bougerol_cos needs mu = 0");
    }
    // \int_0^\infty cos(alpha sinh xi) e^{-xi^2/2t} d xi, zeros where
    // alpha sinh(xi) = (k - 1/2) pi.
    auto integrand = [alpha, t](double xi) {
      const double g = std::exp(-xi * xi / (2.0 * t));
      return g == 0.0 ? 0.0 : std::cos(alpha * std::sinh(xi)) * g;
    };
    auto zeros = [alpha](std::size_t k) {
      return std::asinh((static_cast<double>(k) - 0.5) * kPi / alpha);
    };
    QuadratureSpec spec{1e-11, 1e-15, 20000, 1e-18};
    IntegralResult r = integrate_oscillatory(integrand, 0.0, zeros, spec);
    const double pref = std::sqrt(2.0 / (kPi * t));
    r.value *= pref;
    r.error_estimate *= pref;
    return r;
  }
  case LaplaceMethod::plancherel: {
    if (q.mu != 0.0) {
      throw ConfigurationError("laplace_of_A: plancherel needs mu = 0");
    }
    const QuadratureSpec kspec{1e-12, 1e-300, 4000, 1e-20};
    bool ok = true;
    auto integrand = [&](double eta) {
      const double g = std::exp(-0.5 * eta * eta * t + 0.5 * kPi * eta);
      if (g == 0.0) {
        return 0.0;
      }
      const IntegralResult k = bessel_k_imag(eta, alpha, kspec);
      ok = ok && k.converged;
      // cosh(pi eta / 2) = e^{pi eta/2} (1 + e^{-pi eta}) / 2.
      return g * 0.5 * (1.0 + std::exp(-kPi * eta)) * k.value;
    };
    IntegralResult r = integrate_adaptive(integrand, Interval{0.0, kInf}, kOuterSpec);
    r.value *= 2.0 / kPi;
    r.error_estimate *= 2.0 / kPi;
    r.converged = r.converged && ok;
    return r;
  }
  }
  throw ConfigurationError("laplace_of_A: unknown method");
}

double bougerol_reciprocal(const LawQuery &q, double alpha) {
  q.validate();
  if (q.mu != 0.0) {
    throw DomainError("bougerol_reciprocal: mu must be 0");
  }
  if (!std::isfinite(alpha)) {
    throw DomainError("bougerol_reciprocal: alpha must be finite");
  }
  const double h = std::asinh(alpha);
  return std::exp(-h * h / (2.0 * q.t)) / std::sqrt((1.0 + alpha * alpha) * q.t);
}

IntegralResult bougerol_reciprocal_quadrature(const LawQuery &q, double alpha,
                                              const ThetaEngine &engine) {
  q.validate();
  if (q.mu != 0.0) {
    throw DomainError("bougerol_reciprocal: mu must be 0");
  }
  // A^{-1/2} = (2a)^{1/2} and alpha^2 / 2A = alpha^2 a.
  auto integrand = [&](double a) {
    if (!(a > 0.0)) {
      return 0.0;
    }
    const double w = std::sqrt(2.0 * a) * std::exp(-alpha * alpha * a);
    if (w == 0.0) {
      return 0.0;
    }
    return w * f_reciprocal(q, a, engine).value;
  };
  return integrate_adaptive(integrand, Interval{0.0, kInf}, kOuterSpec);
}

double h_function(const HFunctionQuery &hq, HMethod method,
                  const ThetaEngine &engine) {
  check_h_domain(hq);
  if (method == HMethod::closed) {
    if (hq.r != 0.5 || (hq.mu != 0.0 && hq.mu != 1.0)) {
      throw ConfigurationError(
          "h_function: closed form only for (mu, r) in {(0, 1/2), (1, 1/2)}");
    }
    const double h = std::asinh(std::sqrt(-hq.s));
    const double g = std::exp(-h * h / (2.0 * hq.t));
    if (hq.mu == 0.0) {
      return g / std::sqrt(2.0 * hq.t * (1.0 - hq.s));
    }
    return g / std::sqrt(2.0 * hq.t);
  }
  const LawQuery q{hq.mu, hq.t};
  // a^r e^{s a} f(a) in log a, to follow densities that sit at tiny a.
  auto integrand = [&](double la) {
    const double a = std::exp(la);
    if (!(a > 0.0) || !std::isfinite(a)) {
      return 0.0;
    }
    const double w = std::exp((hq.r + 1.0) * la + hq.s * a);
    if (w == 0.0 || !std::isfinite(w)) {
      return 0.0;
    }
    return w * f_reciprocal(q, a, engine).value;
  };
  const IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, kOuterSpec);
  if (!r.converged) {
    throw NumericalFailure("h_function: moment quadrature did not converge");
  }
  return std::exp(0.5 * hq.mu * hq.mu * hq.t) * r.value;
}

double h_time_laplace(double mu, double r, double s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(mu) || !std::isfinite(r)) {
    throw DomainError("h_time_laplace: lambda must be positive");
  }
  const double root = std::sqrt(2.0 * lambda);
  if (!(root > std::max(-mu, mu - 2.0 * r))) {
    throw DomainError("h_time_laplace: need sqrt(2 lambda) > max(-mu, mu - 2r)");
  }
  if (!(s < 0.0 || (s == 0.0 && r < 1.0))) {
    throw DomainError("h_time_laplace: need s < 0, or s = 0 with r < 1");
  }
  const double al = 0.5 * (root + mu);
  const double be = 0.5 * (root - mu);
  const double log_pref = std::lgamma(al) + std::lgamma(be + r) - std::log(2.0) -
                          (be + r) * std::log1p(-s) - std::lgamma(al + be + 1.0);
  const double z = 1.0 / (1.0 - s);
  return std::exp(log_pref) * gauss_2f1(al, be + r, al + be + 1.0, z);
}

double dufresne_convolve(const std::function<double(double)> &nu_density,
                         double nu, double mu, double t, double a) {
  if (!(mu < nu)) {
    throw DomainError("dufresne_convolve: need mu < nu");
  }
  check_positive(t, "dufresne_convolve: t");
  check_positive(a, "dufresne_convolve: a");
  const double m = 0.5 * (mu + nu);
  const double delta = 0.5 * (nu - mu);
  // a - b = a v^{1/delta} turns (a - b)^{delta-1} db into (a^delta / delta) dv.
  auto integrand = [&](double v) {
    const double gap = a * std::pow(v, 1.0 / delta);
    const double b = a - gap;
    if (!(b > 0.0)) {
      return 0.0;
    }
    return std::exp(m * std::log(b / a) - gap) * nu_density(b);
  };
  const IntegralResult r = integrate_adaptive(integrand, Interval{0.0, 1.0}, kInnerSpec);
  const double log_pref = 0.5 * (nu * nu - mu * mu) * t + delta * std::log(a) -
                          std::lgamma(delta + 1.0);
  return std::exp(log_pref) * r.value;
}

double dufresne_convolve(const DensityGrid &nu_density, double nu, double mu,
                         double t, double a) {
  nu_density.validate();
  return dufresne_convolve([&](double b) { return nu_density(b); }, nu, mu, t, a);
}

Evaluation heat_kernel(double t, double x, double y, double lambda,
                       HeatKernelMethod method, const ThetaEngine &engine) {
  check_positive(t, "heat_kernel: t");
  check_positive(lambda, "heat_kernel: lambda");
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("heat_kernel: x and y must be finite");
  }
  const double d = y - x;
  if (method == HeatKernelMethod::theta_form) {
    const double k = lambda * lambda * std::exp(x + y);
    const double ch = std::cosh(d);
    bool degraded = false;
    // r = e^s: exp(-k / 2r - r cosh(y - x)) theta(r, t) dr / r.
    auto integrand = [&](double s) {
      const double r = std::exp(s);
      if (!(r > 0.0) || !std::isfinite(r)) {
        return 0.0;
      }
      const double shift = 0.5 * k / r + r * ch;
      if (shift > 800.0) {
        return 0.0;
      }
      const Evaluation th = theta_scaled(HwQuery{r, t}, shift, engine);
      degraded = degraded || th.degraded;
      return th.value;
    };
    const IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, kOuterSpec);
    Evaluation e = to_evaluation(r, degraded);
    return e;
  }
  const double scale = std::sqrt(2.0) * std::exp(0.5 * (x + y)) * lambda;
  const double ad = std::fabs(d);
  const double sh_half_d = std::sinh(0.5 * ad);
  // Few Bessel oscillations inside the Gaussian window: integrate in b.
  const double b_window = ad + 12.0 * std::sqrt(t);
  if (scale * std::exp(0.5 * b_window) < 50.0) {
    auto in_b = [=](double b) {
      const double g = std::exp(-b * b / (2.0 * t));
      if (g == 0.0) {
        return 0.0;
      }
      // cosh(b) - cosh(d) = 2 sinh((b + |d|)/2) sinh((b - |d|)/2).
      const double gap = 2.0 * std::sinh(0.5 * (b + ad)) * std::sinh(0.5 * (b - ad));
      return b * g * bessel_j0(scale * std::sqrt(std::max(0.0, gap)));
    };
    QuadratureSpec spec{1e-10, 1e-15, 4000, 1e-18};
    const IntegralResult r = integrate_adaptive(in_b, Interval{ad, kInf}, spec);
    const double pref = 1.0 / std::sqrt(2.0 * kPi * t * t * t);
    Evaluation e;
    e.value = pref * r.value;
    e.error_estimate = pref * r.error_estimate;
    e.degraded = !r.converged;
    return e;
  }
  // In z = scale sqrt(cosh b - cosh d) the Bessel factor is J_0(z), so the
  // oscillation has a fixed period and the tail is summed over its zeros.
  auto integrand = [=](double z) {
    // cosh b - 1 = 2 sinh^2(b/2) keeps b accurate near z = 0.
    const double sh_half_b =
        std::sqrt(sh_half_d * sh_half_d + 0.5 * z * z / (scale * scale));
    const double b = 2.0 * std::asinh(sh_half_b);
    const double g = std::exp(-b * b / (2.0 * t));
    if (g == 0.0 || b == 0.0) {
      return 0.0;
    }
    // db/dz = 2 z / (scale^2 sinh b).
    const double sinh_b = 2.0 * sh_half_b * std::sqrt(1.0 + sh_half_b * sh_half_b);
    return b * g * bessel_j0(z) * 2.0 * z / (scale * scale * sinh_b);
  };
  auto zeros = [](std::size_t k) {
    const double beta = (static_cast<double>(k) - 0.25) * kPi;
    return beta + 1.0 / (8.0 * beta);
  };
  QuadratureSpec spec{1e-10, 1e-15, 4000, 1e-18};
  const IntegralResult r = integrate_oscillatory(integrand, 0.0, zeros, spec);
  const double pref = 1.0 / std::sqrt(2.0 * kPi * t * t * t);
  Evaluation e;
  e.value = pref * r.value;
  e.error_estimate = pref * r.error_estimate;
  e.degraded = !r.converged;
  return e;
}

double conditional_laplace_reciprocal(const LawQuery &q, double lambda, double x) {
  q.validate();
  if (q.mu != 0.0) {
    throw DomainError("conditional_laplace_reciprocal: mu must be 0");
  }
  check_positive(lambda, "conditional_laplace_reciprocal: lambda");
  if (!std::isfinite(x)) {
    throw DomainError("conditional_laplace_reciprocal: x must be finite");
  }
  const double phi = std::acosh(lambda * std::exp(-x) + std::cosh(x));
  return std::exp(-(phi * phi - x * x) / (2.0 * q.t));
}

IntegralResult double_laplace(double mu, double alpha, double u) {
  check_positive(alpha, "double_laplace: alpha");
  check_positive(u, "double_laplace: u");
  if (!std::isfinite(mu)) {
    throw DomainError("double_laplace: mu must be finite");
  }
  const double lambda = std::hypot(alpha, mu);
  auto integrand = [=](double y) {
    const double v = u * std::exp(y);
    if (!(v > 0.0) || !std::isfinite(v)) {
      return 0.0;
    }
    return std::exp(mu * y + log_f_product(lambda, u, v));
  };
  const QuadratureSpec spec{1e-12, 1e-300, 2000, 1e-18};
  IntegralResult r = integrate_adaptive(integrand, Interval{-kInf, kInf}, spec);
  r.value *= 2.0;
  r.error_estimate *= 2.0;
  return r;
}

IntegralResult double_laplace_time_side(double mu, double alpha, double u,
                                        LaplaceMethod method,
                                        const ThetaEngine &engine) {
  check_positive(alpha, "double_laplace: alpha");
  check_positive(u, "double_laplace: u");
  auto integrand = [&](double t) {
    if (!(t > 0.0)) {
      return 1.0;
    }
    const double w = std::exp(-0.5 * alpha * alpha * t);
    if (w == 0.0) {
      return 0.0;
    }
    return w * laplace_of_A(LawQuery{mu, t}, u, method, engine).value;
  };
  const QuadratureSpec spec{1e-8, 1e-300, 2000, 1e-14};
  return integrate_adaptive(integrand, Interval{0.0, kInf}, spec);
}

IntegralResult joint_box_probability(const LawQuery &q, Box x_box, Box u_box,
                                     const ThetaEngine &engine) {
  q.validate();
  if (!(x_box.upper > x_box.lower) || !(u_box.upper > u_box.lower) ||
      !(u_box.lower >= 0.0)) {
    throw DomainError("joint_box_probability: empty or invalid box");
  }
  const QuadratureSpec spec{1e-7, 1e-300, 2000, 1e-16};
  bool ok = true;
  auto outer = [&](double x) {
    auto inner = [&](double u) {
      if (!(u > 0.0)) {
        return 0.0;
      }
      return joint_density(q, u, x, engine).value;
    };
    const IntegralResult r = integrate_adaptive(inner, Interval{u_box.lower, u_box.upper}, spec);
    ok = ok && r.converged;
    return r.value;
  };
  IntegralResult r = integrate_adaptive(outer, Interval{x_box.lower, x_box.upper}, spec);
  r.converged = r.converged && ok;
  return r;
}

IntegralResult joint_box_limit(Box x_box, Box u_box) {
  if (!(x_box.upper > x_box.lower) || !(u_box.upper > u_box.lower) ||
      !(u_box.lower >= 0.0)) {
    throw DomainError("joint_box_limit: empty or invalid box");
  }
  const QuadratureSpec spec{1e-10, 1e-300, 2000, 1e-18};
  auto outer = [&](double x) {
    auto inner = [&](double y) {
      if (!(y > 0.0)) {
        return 0.0;
      }
      const double r = std::exp(x) / y;
      return std::exp(log_bessel_k(0.0, r) - r * std::cosh(x)) / y;
    };
    return integrate_adaptive(inner, Interval{u_box.lower, u_box.upper}, spec).value;
  };
  return integrate_adaptive(outer, Interval{x_box.lower, x_box.upper}, spec);
}

} // namespace xbf
