#pragma once

#include "xbf/hartman_watson.hpp"

#include <complex>

namespace xbf {

// Order n (positive moments) or p (negative moments, read as order -p).
struct MomentQuery {
  double mu = 0.0;
  double t = 1.0;
  int n = 0;
  double p = 0.0;

  void validate() const;
};

// Partition of the (mu, m)-plane for the large-t behaviour of E[A_t^{-m}].
enum class Regime { R1, L1, R2, L2, R3, L3 };

const char *to_string(Regime regime);

struct RegimeKey {
  double mu = 0.0;
  double m = 0.0;
  Regime regime = Regime::L3;

  // Throws DomainError if (mu, m) does not lie in `regime`.
  void validate() const;
};

// The regime containing (mu, m); (0, 0) belongs to none.
Regime classify_regime(double mu, double m);

// C(n, j; mu) = 2^{-n} (-1)^{n-j} binom(n, j) prod_{k != j} (mu + j + k)^{-1}.
double moment_coefficient(int n, int j, double mu);

// E[(A_t^{(mu)})^n].
double moment_exact(const MomentQuery &q);

// E[exp(i alpha B_t) A_t^n].
std::complex<double> moment_oscillating(double alpha, int n, double t);

// E[A_t^n] = E[sinh(B_t)^{2n}] / E[B_1^{2n}] at mu = 0, by quadrature.
double moment_bougerol(int n, double t);

// \int_0^\infty e^{-lambda t} E[e^{mu B_t} A_t^n] dt.
double moment_laplace(double mu, int n, double lambda);

// log of e^{nx} / (n! sqrt(2 pi t^3)) \int_{|x|}^\infty b e^{-b^2/2t}
// (cosh b - cosh x)^n db.
double log_conditional_moment_kernel(int n, double t, double x);

// E[A_t^n | B_t = x].
double conditional_moment(int n, double t, double x);
// The same by quadrature of u^n against the conditional density.
IntegralResult conditional_moment_density(int n, double t, double x,
                                          const ThetaEngine &engine = {});

// E[A_t^{-p} | B_t = x] by quadrature against the conditional density.
IntegralResult conditional_negative_moment(double p, double t, double x,
                                           const ThetaEngine &engine = {});

// E[(A_t^{(mu)})^{-p}] by quadrature of (2a)^p against f^{(mu)}(a, t).
IntegralResult negative_moment(const MomentQuery &q,
                               const ThetaEngine &engine = {});

// Large-t constants.
// E[A_t^n] e^{-2 n^2 t} -> sqrt(pi) / (Gamma(n + 1/2) 2^{3n-1}).
double positive_moment_constant(int n);
// t^{1/2} E[A_t^{-p}] -> Gamma(p) / (2^{1/2-p} sqrt(pi)); established at p = 1/2.
double negative_moment_constant(double p);

// Limit of scale(t) E[exp(-alpha A_t^{(mu)})] and the scale itself.
double laplace_constant(double mu, double alpha);
double laplace_scale(double mu, double t);

// Limit of scale(t) E[(a + xi A_t^{(mu)})^{-m}] and the scale itself.
double regime_constant(const RegimeKey &key, double a, double xi);
double regime_scale(const RegimeKey &key, double t);

// E[(a + xi A_t^{(mu)})^{-m}] by quadrature against f^{(mu)}.
IntegralResult delta_general(double mu, double m, double a, double xi, double t,
                             const ThetaEngine &engine = {});

// sum_{n=1}^N C_n^{-1/2n}, C_n the conditional moment kernel above.
double carleman_partial_sum(int N, double t, double x);

} // namespace xbf
