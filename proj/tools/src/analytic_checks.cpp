#include "xbf_cli/cli.hpp"

#include "xbf/fixed_time.hpp"
#include "xbf/hartman_watson.hpp"
#include "xbf/moments.hpp"
#include "xbf/quadrature.hpp"
#include "xbf/random_laws.hpp"
#include "xbf/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace xbf::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

SuiteReport check(const std::string &name, double tolerance,
                  const std::function<double()> &statistic) {
  SuiteReport r;
  r.suite = name;
  r.threshold = tolerance;
  r.statistic = statistic();
  r.verdict = r.statistic <= tolerance ? Verdict::pass : Verdict::fail;
  return r;
}

} // namespace

std::vector<SuiteReport> analytic_checks() {
  std::vector<SuiteReport> out;

  out.push_back(check("hw_laplace", 1e-4, [] {
    const double nu = 0.5;
    const double r = 1.0;
    const auto f = [&](double t) {
      return std::exp(-0.5 * nu * nu * t) * theta(HwQuery{r, t}).value;
    };
    // theta(r, t) < e^{-pi^2/2t} below t = 0.005.
    const double head = integrate_adaptive(f, Interval{0.005, 1.0}).value;
    const double tail = integrate_adaptive(f, Interval{1.0, kInf}).value;
    return rel_err(head + tail, bessel_i(nu, r));
  }));

  out.push_back(check("dual_density", 1e-6, [] {
    const LawQuery q{0.0, 1.0};
    return rel_err(f_reciprocal(q, 1.0, ReciprocalMethod::double_integral).value,
                   f_reciprocal(q, 1.0, ReciprocalMethod::dufresne).value);
  }));

  out.push_back(check("negative_moment", 1e-5, [] {
    return rel_err(negative_moment(MomentQuery{0.0, 1.0, 0, 0.5}).value, 1.0);
  }));

  out.push_back(check("conditional_reciprocal", 1e-4, [] {
    const double t = 1.0;
    const double x = 1.0;
    return rel_err(conditional_negative_moment(1.0, t, x).value,
                   x * std::exp(-x) / (t * std::sinh(x)));
  }));

  out.push_back(check("exact_moment", 1e-10, [] {
    return rel_err(moment_exact(MomentQuery{0.0, 1.0, 2, 0.0}), moment_bougerol(2, 1.0));
  }));

  out.push_back(check("four_way_laplace", 1e-3, [] {
    const LawQuery q{0.0, 1.0};
    const double a = laplace_of_A(q, 1.0, LaplaceMethod::density_quadrature).value;
    const double b = laplace_of_A(q, 1.0, LaplaceMethod::bougerol_cos).value;
    const double c = laplace_of_A(q, 1.0, LaplaceMethod::plancherel).value;
    const double d = double_laplace(0.0, 1.0, 1.0).value;
    const double e =
        double_laplace_time_side(0.0, 1.0, 1.0, LaplaceMethod::bougerol_cos).value;
    return std::max({rel_err(b, a), rel_err(c, a), rel_err(e, d)});
  }));

  out.push_back(check("perpetuity", 1e-6, [] {
    const double mu = 1.0;
    const double alpha = 1.0;
    // E[exp(-alpha^2 / (4 gamma_mu))] in s = log gamma.
    const auto f = [&](double s) {
      const double g = std::exp(s);
      return std::exp(mu * s - g - std::lgamma(mu) - alpha * alpha / (4.0 * g));
    };
    const double lt = integrate_adaptive(f, Interval{-40.0, 6.0}).value;
    return std::max(rel_err(perpetuity_laplace(mu, alpha), lt),
                    rel_err(two_sided_perpetuity_laplace(mu, 0.7, 0.7),
                            perpetuity_laplace(mu, 0.7)));
  }));

  out.push_back(check("exp_time_marginal", 1e-3, [] {
    const ExpTimeParams p{0.0, 1.0};
    const double u = 0.5;
    const auto f = [&](double s) { return std::exp(s) * exp_time_joint_density(p, std::exp(s), u); };
    const double marginal = integrate_adaptive(f, Interval{-30.0, 30.0}).value;
    return rel_err(marginal, exp_time_density(p, u));
  }));

  out.push_back(check("gig_convolution", 1e-6, [] {
    const double nu = 1.0;
    const double s = 0.3;
    const GigParams plus{nu, 1.0, 1.0};
    const GigParams minus{-nu, 1.0, 1.0};
    return rel_err(gig_laplace(plus, s),
                   gig_laplace(minus, s) * std::pow(1.0 + 2.0 * s, -nu));
  }));

  return out;
}

} // namespace xbf::cli
