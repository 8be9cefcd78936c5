#pragma once

#include "xbf/quadrature.hpp"

namespace xbf {

// How theta(r, t) is evaluated.
//  oscillatory: the sine integral split at its zeros k*t.
//  contour: the same integral moved onto a steepest-descent contour through
//  the saddle of r cosh(w) - w^2/(2t); exact, free of the e^{pi^2/2t}
//  cancellation that ruins the oscillatory form for small t.
enum class ThetaMethod { automatic, oscillatory, contour };

struct ThetaEngine {
  QuadratureSpec spec{1e-10, 1e-14, 4000, 1e-18};
  double t_min = 0.2;
  bool acceleration_enabled = true;
  ThetaMethod method = ThetaMethod::automatic;

  void validate() const;
};

struct HwQuery {
  double r;
  double t;

  void validate() const;
};

// A value with its error bar; `degraded` marks evaluations outside the
// documented accuracy range.
struct Evaluation {
  double value = 0.0;
  double error_estimate = 0.0;
  bool degraded = false;
};

Evaluation theta(const HwQuery &q, const ThetaEngine &engine = {});

// theta(r, t) * exp(-log_shift). Lets callers fold exponential factors in
// before they overflow or underflow.
Evaluation theta_scaled(const HwQuery &q, double log_shift,
                        const ThetaEngine &engine = {});

// Density of the Hartman-Watson law eta_r at t: theta(r, t) / I_0(r).
Evaluation hw_density(const HwQuery &q, const ThetaEngine &engine = {});

enum class LaplaceWeight { over_r, plain };

// Closed form of \int_0^\infty e^{-x r} theta(r, t) w(r) dr with w = 1/r or 1.
double theta_laplace_in_r(double x, double t, LaplaceWeight weight);

// The same transform by quadrature over r.
IntegralResult theta_laplace_in_r_quadrature(double x, double t,
                                             LaplaceWeight weight,
                                             const ThetaEngine &engine = {});

// \int_0^\infty e^{-xi^2/2t} sinh(n xi) sin(pi xi / t) d xi, which vanishes.
IntegralResult stieltjes_integral(int n, double t,
                                  const QuadratureSpec &spec = {1e-10, 1e-9,
                                                                4000, 1e-20});

// \int e^{n xi} mu_{t,lambda}(d xi) for the perturbed log-normal measure
// (2 pi t)^{-1/2} e^{-xi^2/2t} (1 + lambda sin(pi xi / t)) d xi.
IntegralResult lognormal_moment(int n, double t, double lambda,
                                const QuadratureSpec &spec = {});

} // namespace xbf
