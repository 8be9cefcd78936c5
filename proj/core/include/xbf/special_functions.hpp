#pragma once

#include "xbf/quadrature.hpp"

namespace xbf {

struct BesselOrder {
  double order = 0.0;
  bool is_imaginary = false;
};

// I_order(x) for real order > -1.
double bessel_i(BesselOrder order, double x);
double bessel_i(double order, double x);
// e^{-x} I_order(x); finite for all x > 0.
double bessel_i_scaled(double order, double x);
double log_bessel_i(double order, double x);

// Macdonald function K_order(x); even in the order.
double bessel_k(double order, double x);
// e^{x} K_order(x).
double bessel_k_scaled(double order, double x);
double log_bessel_k(double order, double x);

// K_{i eta}(x) = \int_0^\infty e^{-x cosh u} cos(eta u) du.
IntegralResult bessel_k_imag(double eta, double x,
                             const QuadratureSpec &spec = {});

double bessel_j0(double x);

enum class HypergeometricMethod { automatic, series, euler_integral };

// 2F1(a, b; c; z) for z in (0, 1].
double gauss_2f1(double a, double b, double c, double z,
                 HypergeometricMethod method = HypergeometricMethod::automatic);

// F_mu(x, y) = I_mu(min(x, y)) K_mu(max(x, y)).
double f_product(double mu, double x, double y);
double log_f_product(double mu, double x, double y);

} // namespace xbf
