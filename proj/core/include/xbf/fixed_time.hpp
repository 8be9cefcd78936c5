#pragma once

#include "xbf/hartman_watson.hpp"
#include "xbf/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace xbf {

// Drift mu and horizon t of A_t^{(mu)} = \int_0^t exp(2 B_s^{(mu)}) ds.
struct LawQuery {
  double mu = 0.0;
  double t = 1.0;

  void validate() const;
};

// Tabulated density; used to feed dufresne_convolve and the CLI.
struct DensityGrid {
  std::vector<double> abscissae;
  std::vector<double> values;
  std::string law_tag;

  void validate() const;
  // Linear interpolation; zero outside the tabulated range.
  double operator()(double x) const;
};

struct HFunctionQuery {
  double mu = 0.0;
  double r = 0.5;
  double s = 0.0;
  double t = 1.0;

  void validate() const;
};

// Density of (A_t, B_t) at (u, x).
Evaluation joint_density(const LawQuery &q, double u, double x,
                         const ThetaEngine &engine = {});

// Density of A_t at u given B_t = given_x.
Evaluation conditional_density(const LawQuery &q, double u, double given_x,
                               const ThetaEngine &engine = {});

// Routes to f^{(mu)}(a, t), the density of 1 / (2 A_t^{(mu)}).
//  dufresne: single oscillatory integral, mu in {0, 1} only.
//  theta_integral: eta-integral of theta(2 sqrt(a) eta, t); any mu.
//  convolution: gamma convolution of the mu = 1 density; mu < 1.
//  double_integral: the sinh/sin double integral, mu = 0 only.
enum class ReciprocalMethod { dufresne, theta_integral, convolution, double_integral };

// Picks dufresne for mu in {0, 1} and theta_integral otherwise.
ReciprocalMethod default_reciprocal_method(double mu);

Evaluation f_reciprocal(const LawQuery &q, double a, ReciprocalMethod method,
                        const ThetaEngine &engine = {});
Evaluation f_reciprocal(const LawQuery &q, double a,
                        const ThetaEngine &engine = {});

enum class DensityMethod { reciprocal, contour };

// Density of A_t^{(mu)} at u. `contour` is the shifted-Gaussian form, mu = 0.
Evaluation density_of_A(const LawQuery &q, double u,
                        DensityMethod method = DensityMethod::reciprocal,
                        const ThetaEngine &engine = {});

enum class LaplaceMethod { density_quadrature, bougerol_cos, plancherel };

// E[exp(-alpha^2 A_t / 2)].
IntegralResult laplace_of_A(const LawQuery &q, double alpha, LaplaceMethod method,
                            const ThetaEngine &engine = {});

// E[A_t^{-1/2} exp(-alpha^2 / (2 A_t))] at mu = 0, closed form.
double bougerol_reciprocal(const LawQuery &q, double alpha);
// Same expectation by quadrature against f^{(0)}.
IntegralResult bougerol_reciprocal_quadrature(const LawQuery &q, double alpha,
                                              const ThetaEngine &engine = {});

enum class HMethod { closed, moment_quadrature };

// h^{mu,r}(s, t) = e^{mu^2 t/2} E[(2A_t)^{-r} exp(s / (2A_t))], s <= 0.
double h_function(const HFunctionQuery &hq, HMethod method,
                  const ThetaEngine &engine = {});

// \int_0^\infty e^{-lambda t} h^{mu,r}(s, t) dt.
double h_time_laplace(double mu, double r, double s, double lambda);

// f^{(mu)}(a, t) from f^{(nu)}(., t) by the gamma convolution, mu < nu.
double dufresne_convolve(const std::function<double(double)> &nu_density,
                         double nu, double mu, double t, double a);
double dufresne_convolve(const DensityGrid &nu_density, double nu, double mu,
                         double t, double a);

enum class HeatKernelMethod { theta_form, j0_form };

// Kernel of exp(-t H) for H = -(1/2) d^2/dx^2 + (1/2) lambda^2 e^{2x}.
Evaluation heat_kernel(double t, double x, double y, double lambda,
                       HeatKernelMethod method, const ThetaEngine &engine = {});

// E[exp(-lambda / A_t) | B_t = x] at mu = 0.
double conditional_laplace_reciprocal(const LawQuery &q, double lambda, double x);

// 2 \int e^{mu y} F_lambda(u, u e^y) dy with lambda = sqrt(alpha^2 + mu^2).
IntegralResult double_laplace(double mu, double alpha, double u);

// \int_0^\infty e^{-alpha^2 t/2} E[exp(-u^2 A_t^{(mu)} / 2)] dt by time
// quadrature of laplace_of_A.
IntegralResult double_laplace_time_side(double mu, double alpha, double u,
                                        LaplaceMethod method,
                                        const ThetaEngine &engine = {});

// Box indicators for E[f(B_t) g(A_t)].
struct Box {
  double lower;
  double upper;
};

// E[1{B_t in x_box} 1{A_t in u_box}] from the joint density.
IntegralResult joint_box_probability(const LawQuery &q, Box x_box, Box u_box,
                                     const ThetaEngine &engine = {});

// \int\int_{box} K_0(e^x / y) exp(-(1 + e^{2x}) / 2y) dx dy / y.
IntegralResult joint_box_limit(Box x_box, Box u_box);

} // namespace xbf
