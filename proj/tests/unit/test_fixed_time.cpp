#include "oracles.hpp"

#include "xbf/errors.hpp"
#include "xbf/fixed_time.hpp"
#include "xbf/moments.hpp"
#include "xbf/quadrature.hpp"
#include "xbf/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace xbf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

const QuadratureSpec kOuter{1e-8, 1e-300, 2000, 1e-17};

// \int_0^\infty g(u) density(u) du in s = log u.
double over_log_u(const std::function<double(double)> &density,
                  const std::function<double(double)> &g) {
  const auto f = [&](double s) {
    const double u = std::exp(s);
    if (!(u > 0.0) || !std::isfinite(u)) {
      return 0.0;
    }
    const double w = u * g(u);
    return (w == 0.0 || !std::isfinite(w)) ? 0.0 : w * density(u);
  };
  return integrate_adaptive(f, Interval{-kInf, kInf}, kOuter).value;
}

double one(double) { return 1.0; }

double joint_marginal(const LawQuery &q, double x) {
  return over_log_u([&](double u) { return joint_density(q, u, x).value; }, one);
}

TEST(JointDensity, GaussianMarginal) {
  for (double mu : {-1.0, 0.0, 1.0}) {
    const LawQuery q{mu, 1.0};
    for (double x : {-1.0, 0.3, 1.0}) {
      EXPECT_NEAR(joint_marginal(q, x), oracle::normal_pdf(x, mu, 1.0), 1e-6) << mu << " " << x;
    }
  }
  EXPECT_NEAR(joint_marginal(LawQuery{0.0, 1.0}, 0.3), 0.381388, 1e-6);
}

TEST(JointDensity, Normalized) {
  const LawQuery q{0.0, 1.0};
  // Trapezoid in x; the marginal is Gaussian, so the rule is spectrally accurate.
  const double h = 0.25;
  double mass = 0.0;
  for (double x = -9.0; x <= 9.0 + 1e-12; x += h) {
    mass += h * joint_marginal(q, x);
  }
  EXPECT_NEAR(mass, 1.0, 1e-3);
}

TEST(JointDensity, MeanOfA) {
  const LawQuery q{0.0, 1.0};
  const double m = over_log_u([&](double u) { return density_of_A(q, u).value; },
                              [](double u) { return u; });
  EXPECT_LE(oracle::rel_err(m, oracle::iterated_moment(1)), 1e-6);
}

TEST(ConditionalDensity, NormalizedAndReciprocalMoments) {
  const LawQuery q{0.0, 1.0};
  const double mass = over_log_u([&](double u) { return conditional_density(q, u, 0.0).value; }, one);
  EXPECT_NEAR(mass, 1.0, 1e-6);
  const auto inv = [](double u) { return 1.0 / u; };
  const double at1 = over_log_u([&](double u) { return conditional_density(q, u, 1.0).value; }, inv);
  EXPECT_NEAR(at1, std::exp(-1.0) / std::sinh(1.0), 1e-6);
  const double at0 = over_log_u([&](double u) { return conditional_density(q, u, 0.0).value; }, inv);
  EXPECT_NEAR(at0, 1.0, 1e-6);
}

double f_mass(const LawQuery &q, ReciprocalMethod m, double power = 0.0) {
  return over_log_u([&](double a) { return f_reciprocal(q, a, m).value; },
                    [power](double a) { return std::pow(a, power); });
}

TEST(FReciprocal, Normalized) {
  EXPECT_NEAR(f_mass(LawQuery{0.0, 1.0}, ReciprocalMethod::dufresne), 1.0, 1e-6);
  EXPECT_NEAR(f_mass(LawQuery{1.0, 0.5}, ReciprocalMethod::dufresne), 1.0, 1e-6);
  EXPECT_NEAR(f_mass(LawQuery{-1.0, 2.0}, ReciprocalMethod::theta_integral), 1.0, 1e-4);
}

TEST(FReciprocal, HalfMoment) {
  EXPECT_NEAR(f_mass(LawQuery{0.0, 1.0}, ReciprocalMethod::dufresne, 0.5), 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(FReciprocal, MethodsAgree) {
  for (double t : {0.5, 1.0, 2.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      const LawQuery q{0.0, t};
      const double d = f_reciprocal(q, a, ReciprocalMethod::dufresne).value;
      EXPECT_LE(oracle::rel_err(f_reciprocal(q, a, ReciprocalMethod::double_integral).value, d), 1e-5);
      EXPECT_LE(oracle::rel_err(f_reciprocal(q, a, ReciprocalMethod::theta_integral).value, d), 1e-5);
    }
  }
  const LawQuery q1{1.0, 1.0};
  EXPECT_LE(oracle::rel_err(f_reciprocal(q1, 0.7, ReciprocalMethod::theta_integral).value,
                            f_reciprocal(q1, 0.7, ReciprocalMethod::dufresne).value),
            1e-5);
}

TEST(FReciprocal, ConvolutionForGeneralDrift) {
  const LawQuery q{-0.5, 1.0};
  for (double a : {0.3, 1.0}) {
    EXPECT_LE(oracle::rel_err(f_reciprocal(q, a, ReciprocalMethod::convolution).value,
                              f_reciprocal(q, a, ReciprocalMethod::theta_integral).value),
              1e-4);
  }
}

TEST(FReciprocal, UnsupportedMethodPairs) {
  EXPECT_THROW(f_reciprocal(LawQuery{0.5, 1.0}, 1.0, ReciprocalMethod::dufresne), ConfigurationError);
  EXPECT_THROW(f_reciprocal(LawQuery{1.0, 1.0}, 1.0, ReciprocalMethod::convolution), ConfigurationError);
  EXPECT_THROW(f_reciprocal(LawQuery{1.0, 1.0}, 1.0, ReciprocalMethod::double_integral),
               ConfigurationError);
  EXPECT_THROW(f_reciprocal(LawQuery{0.0, 1.0}, 0.0), DomainError);
  EXPECT_THROW(f_reciprocal(LawQuery{0.0, -1.0}, 1.0), DomainError);
}

TEST(DensityOfA, NormalizedAndContourAgrees) {
  const LawQuery q{0.0, 1.0};
  EXPECT_NEAR(over_log_u([&](double u) { return density_of_A(q, u).value; }, one), 1.0, 1e-6);
  const double a = density_of_A(q, 1.0).value;
  const double b = density_of_A(q, 1.0, DensityMethod::contour).value;
  EXPECT_LE(oracle::rel_err(b, a), 1e-6);
  EXPECT_THROW(density_of_A(LawQuery{1.0, 1.0}, 1.0, DensityMethod::contour), ConfigurationError);
}

TEST(DensityOfA, LargeTimeProfile) {
  const double t = 40.0;
  const double v = std::sqrt(2.0 * kPi * t) * density_of_A(LawQuery{0.0, t}, 1.0).value;
  EXPECT_NEAR(v / std::exp(-0.5), 1.0, 0.03);
}

TEST(LaplaceOfA, MethodsAgree) {
  const LawQuery q{0.0, 1.0};
  const double a = laplace_of_A(q, 1.0, LaplaceMethod::density_quadrature).value;
  const double b = laplace_of_A(q, 1.0, LaplaceMethod::bougerol_cos).value;
  const double c = laplace_of_A(q, 1.0, LaplaceMethod::plancherel).value;
  EXPECT_LE(oracle::rel_err(b, a), 1e-6);
  EXPECT_LE(oracle::rel_err(c, a), 1e-6);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, 1.0);
}

TEST(LaplaceOfA, SmallAlphaAndMismatch) {
  EXPECT_NEAR(laplace_of_A(LawQuery{0.0, 1.0}, 1e-6, LaplaceMethod::bougerol_cos).value, 1.0, 1e-9);
  EXPECT_THROW(laplace_of_A(LawQuery{1.0, 1.0}, 1.0, LaplaceMethod::bougerol_cos), ConfigurationError);
}

TEST(LaplaceOfA, DriftMonotone) {
  // Larger drift makes A_t larger, so the transform smaller.
  const double lo = laplace_of_A(LawQuery{-1.0, 1.0}, 1.0, LaplaceMethod::density_quadrature).value;
  const double hi = laplace_of_A(LawQuery{1.0, 1.0}, 1.0, LaplaceMethod::density_quadrature).value;
  EXPECT_GT(lo, hi);
  EXPECT_THROW(laplace_of_A(LawQuery{1.0, 1.0}, 1.0, LaplaceMethod::plancherel), ConfigurationError);
}

TEST(BougerolReciprocal, ClosedFormValues) {
  EXPECT_NEAR(bougerol_reciprocal(LawQuery{0.0, 1.0}, 0.0), 1.0, 1e-15);
  const double h = std::asinh(1.0);
  const double ref = std::exp(-0.5 * h * h) / std::sqrt(2.0);
  EXPECT_NEAR(bougerol_reciprocal(LawQuery{0.0, 1.0}, 1.0), ref, 1e-15);
  EXPECT_NEAR(ref, 0.4795134715, 1e-10);
  EXPECT_THROW(bougerol_reciprocal(LawQuery{1.0, 1.0}, 1.0), DomainError);
}

TEST(BougerolReciprocal, QuadratureSide) {
  for (double alpha : {0.0, 1.0, 3.0}) {
    const LawQuery q{0.0, 1.0};
    EXPECT_LE(oracle::rel_err(bougerol_reciprocal_quadrature(q, alpha).value,
                              bougerol_reciprocal(q, alpha)),
              1e-6)
        << alpha;
  }
}

TEST(BougerolReciprocal, MatchesHFunction) {
  const LawQuery q{0.0, 1.0};
  const double h = h_function(HFunctionQuery{0.0, 0.5, -1.0, 1.0}, HMethod::closed);
  EXPECT_NEAR(bougerol_reciprocal(q, 1.0), std::sqrt(2.0) * h, 1e-14);
}

TEST(HFunction, ClosedValues) {
  EXPECT_NEAR(h_function(HFunctionQuery{0.0, 0.5, 0.0, 1.0}, HMethod::closed), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(h_function(HFunctionQuery{1.0, 0.5, 0.0, 1.0}, HMethod::closed), 1.0 / std::sqrt(2.0), 1e-15);
  const double h = std::asinh(1.0);
  EXPECT_NEAR(h_function(HFunctionQuery{0.0, 0.5, -1.0, 1.0}, HMethod::closed),
              0.5 * std::exp(-0.5 * h * h), 1e-15);
  EXPECT_THROW(h_function(HFunctionQuery{0.0, 1.0, 0.0, 1.0}, HMethod::closed), ConfigurationError);
  EXPECT_THROW(h_function(HFunctionQuery{0.0, 0.5, 0.5, 1.0}, HMethod::closed), DomainError);
}

TEST(HFunction, QuadratureMatchesClosed) {
  for (double mu : {0.0, 1.0}) {
    const HFunctionQuery hq{mu, 0.5, -1.0, 1.0};
    EXPECT_LE(oracle::rel_err(h_function(hq, HMethod::moment_quadrature), h_function(hq, HMethod::closed)),
              1e-6)
        << mu;
  }
}

TEST(HFunction, DufresneRecursion) {
  const double s = -1.0;
  const double a = h_function(HFunctionQuery{0.0, 0.5, s, 1.0}, HMethod::closed);
  const double b = h_function(HFunctionQuery{1.0, 0.5, s, 1.0}, HMethod::closed);
  EXPECT_NEAR(a, std::pow(1.0 - s, -0.5) * b, 1e-15);
  const double c = h_function(HFunctionQuery{0.0, 1.0, s, 1.0}, HMethod::moment_quadrature);
  const double d = h_function(HFunctionQuery{2.0, 1.0, s, 1.0}, HMethod::moment_quadrature);
  EXPECT_LE(oracle::rel_err(c, std::pow(1.0 - s, -1.0) * d), 1e-4);
}

// Closed forms of h^{mu,1/2}(s, t) written out independently.
double h_half(double mu, double s, double t) {
  const double h = std::asinh(std::sqrt(-s));
  const double g = std::exp(-h * h / (2.0 * t));
  return mu == 0.0 ? g / std::sqrt(2.0 * t * (1.0 - s)) : g / std::sqrt(2.0 * t);
}

double time_laplace_oracle(double mu, double s, double lambda) {
  const auto f = [&](double t) { return std::exp(-lambda * t) * h_half(mu, s, t); };
  return oracle::tanh_sinh(f, 0.0, 1.0) + oracle::tanh_sinh_inf(f, 1.0);
}

TEST(HTimeLaplace, MatchesTimeQuadrature) {
  EXPECT_LE(oracle::rel_err(h_time_laplace(0.0, 0.5, -1.0, 1.0), time_laplace_oracle(0.0, -1.0, 1.0)), 1e-5);
  EXPECT_LE(oracle::rel_err(h_time_laplace(1.0, 0.5, -0.5, 2.0), time_laplace_oracle(1.0, -0.5, 2.0)), 1e-5);
}

TEST(HTimeLaplace, DecaysInS) {
  const double a = h_time_laplace(0.0, 0.5, -10.0, 1.0);
  const double b = h_time_laplace(0.0, 0.5, -100.0, 1.0);
  EXPECT_GT(a, b);
  EXPECT_GT(b, 0.0);
  EXPECT_LT(b, 0.1 * h_time_laplace(0.0, 0.5, -1.0, 1.0));
  EXPECT_THROW(h_time_laplace(0.0, 0.5, 0.5, 1.0), DomainError);
  EXPECT_THROW(h_time_laplace(3.0, 0.5, -1.0, 1.0), DomainError);
}

TEST(DufresneConvolve, RecoversDriftZero) {
  const double t = 1.0;
  const auto f1 = [&](double b) { return f_reciprocal(LawQuery{1.0, t}, b).value; };
  for (double a : {0.5, 1.0, 2.0}) {
    const double v = dufresne_convolve(f1, 1.0, 0.0, t, a);
    EXPECT_LE(oracle::rel_err(v, f_reciprocal(LawQuery{0.0, t}, a).value), 1e-4) << a;
  }
  EXPECT_THROW(dufresne_convolve(f1, 1.0, 1.0, t, 1.0), DomainError);
}

TEST(DufresneConvolve, GridInputMatchesCallable) {
  const double t = 1.0;
  DensityGrid grid;
  grid.law_tag = "f1";
  for (double s = -8.0; s <= 4.0; s += 0.01) {
    const double b = std::exp(s);
    grid.abscissae.push_back(b);
    grid.values.push_back(f_reciprocal(LawQuery{1.0, t}, b).value);
  }
  const auto f1 = [&](double b) { return f_reciprocal(LawQuery{1.0, t}, b).value; };
  for (double a : {0.5, 1.0, 2.0}) {
    EXPECT_LE(oracle::rel_err(dufresne_convolve(grid, 1.0, 0.0, t, a), dufresne_convolve(f1, 1.0, 0.0, t, a)),
              1e-3)
        << a;
  }
}

TEST(DensityGrid, ValidationAndInterpolation) {
  DensityGrid g{{1.0, 2.0, 3.0}, {0.0, 2.0, 4.0}, "x"};
  EXPECT_NO_THROW(g.validate());
  EXPECT_DOUBLE_EQ(g(1.5), 1.0);
  EXPECT_DOUBLE_EQ(g(0.5), 0.0);
  EXPECT_DOUBLE_EQ(g(3.5), 0.0);
  DensityGrid bad{{1.0, 1.0}, {0.0, 1.0}, "x"};
  EXPECT_THROW(bad.validate(), Error);
  DensityGrid neg{{1.0, 2.0}, {-1.0, 1.0}, "x"};
  EXPECT_THROW(neg.validate(), Error);
}

TEST(HeatKernel, FreeLimit) {
  const double v = heat_kernel(1.0, 0.0, 0.0, 1e-8, HeatKernelMethod::j0_form).value;
  EXPECT_NEAR(v, 1.0 / std::sqrt(2.0 * kPi), 1e-8);
}

TEST(HeatKernel, FormsAgree) {
  for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.0}, std::pair{-0.3, 0.8}}) {
    const double a = heat_kernel(1.0, x, y, 1.0, HeatKernelMethod::theta_form).value;
    const double b = heat_kernel(1.0, x, y, 1.0, HeatKernelMethod::j0_form).value;
    EXPECT_LE(oracle::rel_err(a, b), 1e-4) << x << " " << y;
  }
}

TEST(HeatKernel, GreenFunction) {
  const double lambda = 1.0;
  const double alpha = 1.0;
  const auto f = [&](double t) {
    return std::exp(-0.5 * alpha * alpha * t) *
           heat_kernel(t, 0.0, 0.0, lambda, HeatKernelMethod::j0_form).value;
  };
  // t = w^2 removes the 1/sqrt(t) endpoint behaviour.
  const auto g = [&](double w) { return w == 0.0 ? 2.0 / std::sqrt(2.0 * kPi) : 2.0 * w * f(w * w); };
  const double v = integrate_adaptive(g, Interval{0.0, 1.0}, kOuter).value +
                   integrate_adaptive(f, Interval{1.0, kInf}, kOuter).value;
  const double ref = 2.0 * oracle::bessel_i_series(1.0, 1.0) * oracle::bessel_k_integral(1.0, 1.0);
  EXPECT_LE(oracle::rel_err(v, ref), 1e-7);
}

TEST(ConditionalLaplaceReciprocal, Values) {
  const LawQuery q{0.0, 1.0};
  EXPECT_NEAR(conditional_laplace_reciprocal(q, 1e-12, 0.4), 1.0, 1e-10);
  EXPECT_NEAR(conditional_laplace_reciprocal(q, std::cosh(1.0) - 1.0, 0.0), std::exp(-0.5), 1e-14);
  const double h = 1e-7;
  const double slope = (1.0 - conditional_laplace_reciprocal(q, h, 1.0)) / h;
  EXPECT_NEAR(slope, std::exp(-1.0) / std::sinh(1.0), 1e-5);
}

TEST(ConditionalLaplaceReciprocal, MatchesConditionalDensity) {
  const LawQuery q{0.0, 1.0};
  const double lambda = 0.7;
  const double x = 0.5;
  const double v = over_log_u([&](double u) { return conditional_density(q, u, x).value; },
                              [&](double u) { return std::exp(-lambda / u); });
  EXPECT_NEAR(v, conditional_laplace_reciprocal(q, lambda, x), 1e-6);
}

TEST(ConditionalLaplace, J0FormMatchesThetaForm) {
  // E[exp(-lambda^2 A_t / 2) | B_t = x] from both heat-kernel forms.
  const double t = 1.0;
  const double x = 0.5;
  const double lambda = 1.0;
  const double a = heat_kernel(t, 0.0, x, lambda, HeatKernelMethod::j0_form).value;
  const double b = heat_kernel(t, 0.0, x, lambda, HeatKernelMethod::theta_form).value;
  EXPECT_LE(oracle::rel_err(a, b), 1e-4);
}

TEST(DoubleLaplace, SmallU) {
  EXPECT_NEAR(double_laplace(0.0, 1.0, 1e-6).value, 2.0, 1e-3);
  EXPECT_NEAR(double_laplace(0.0, 2.0, 1e-6).value, 0.5, 1e-3);
}

TEST(DoubleLaplace, TimeSide) {
  const double a = double_laplace(0.0, 1.0, 1.0).value;
  const double b = double_laplace_time_side(0.0, 1.0, 1.0, LaplaceMethod::bougerol_cos).value;
  EXPECT_LE(oracle::rel_err(b, a), 1e-5);
}

TEST(DoubleLaplace, FirstOrderInU) {
  // 2/alpha^2 - value ~ (u^2/2) \int e^{-alpha^2 t/2} E[A_t] dt, with
  // E[A_t] = (e^{kt} - 1)/k and k = 2 mu + 2.
  const double mu = 0.5;
  const double alpha = 4.0;
  const double u = 0.01;
  const double k = 2.0 * mu + 2.0;
  const double slope = (1.0 / (0.5 * alpha * alpha - k) - 2.0 / (alpha * alpha)) / k;
  const double v = double_laplace(mu, alpha, u).value;
  EXPECT_LE(oracle::rel_err((2.0 / (alpha * alpha) - v) / (0.5 * u * u), slope), 1e-3);
}

TEST(JointAsymptotics, GapShrinksLikeInverseTime) {
  // sqrt(2 pi t^3) P(B_t in [-1,1], A_t in [1/2, 2]) approaches the K_0
  // double integral with an O(1/t) gap.
  const Box xb{-1.0, 1.0};
  const Box ub{0.5, 2.0};
  const double limit = joint_box_limit(xb, ub).value;
  const auto gap = [&](double t) {
    const double p = joint_box_probability(LawQuery{0.0, t}, xb, ub).value;
    return std::sqrt(2.0 * kPi * t * t * t) * p / limit - 1.0;
  };
  const double g20 = gap(20.0);
  const double g40 = gap(40.0);
  EXPECT_LT(std::abs(g40), std::abs(g20));
  EXPECT_NEAR(g20 / g40, 2.0, 0.3);
}

} // namespace
} // namespace xbf
