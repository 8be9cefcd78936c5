#include "xbf/random_laws.hpp"

#include "xbf/bessel_laws.hpp"
#include "xbf/errors.hpp"
#include "xbf/moments.hpp"
#include "xbf/parallel.hpp"
#include "xbf/quadrature.hpp"
#include "xbf/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

namespace xbf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const QuadratureSpec kLawSpec{1e-11, 1e-300, 4000, 1e-18};

double gig_log_norm(const GigParams &g) {
  if (g.a == 0.0) {
    return std::lgamma(g.order) + g.order * std::log(2.0 / (g.b * g.b));
  }
  return std::log(2.0) + log_bessel_k(g.order, g.a * g.b) +
         g.order * std::log(g.a / g.b);
}

// Log-concave rejection sampler for GIG in y = log x, where the log density
// h(y) = order y - (b^2 e^y + a^2 e^{-y}) / 2 is concave.
class GigSampler {
public:
  explicit GigSampler(const GigParams &g) : g_(g) {
    g.validate();
    const double b2 = g.b * g.b;
    const double z = (g.order + std::sqrt(g.order * g.order + g.a * g.a * b2)) / b2;
    mode_ = std::log(z);
    top_ = h(mode_);
    yl_ = level_point(-1.0);
    yr_ = level_point(1.0);
    sl_ = slope(yl_);
    sr_ = -slope(yr_);
    if (!(sl_ > 0.0) || !(sr_ > 0.0)) {
      throw ConfigurationError("GIG envelope: degenerate tangent slopes");
    }
    const double e1 = std::exp(-1.0);
    wl_ = e1 / sl_;
    wm_ = yr_ - yl_;
    wr_ = e1 / sr_;
    const double area = wl_ + wm_ + wr_;
    const double mass = std::exp(gig_log_norm(g_) - top_);
    acceptance_ = mass / area;
    if (!(acceptance_ >= 0.1)) {
      throw ConfigurationError("GIG envelope acceptance below 10%: " +
                               std::to_string(acceptance_));
    }
  }

  double acceptance() const { return acceptance_; }

  template <class Engine> double draw(Engine &engine) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double total = wl_ + wm_ + wr_;
    while (true) {
      const double pick = unit(engine) * total;
      const double u = 1.0 - unit(engine); // (0, 1]
      double y;
      double log_env;
      if (pick < wl_) {
        y = yl_ + std::log(u) / sl_;
        log_env = -1.0 + sl_ * (y - yl_);
      } else if (pick < wl_ + wm_) {
        y = yl_ + (pick - wl_);
        log_env = 0.0;
      } else {
        y = yr_ - std::log(u) / sr_;
        log_env = -1.0 - sr_ * (y - yr_);
      }
      const double v = 1.0 - unit(engine);
      if (std::log(v) <= h(y) - top_ - log_env) {
        return std::exp(y);
      }
    }
  }

private:
  double h(double y) const {
    return g_.order * y - 0.5 * (g_.b * g_.b * std::exp(y) + g_.a * g_.a * std::exp(-y));
  }
  double slope(double y) const {
    return g_.order - 0.5 * (g_.b * g_.b * std::exp(y) - g_.a * g_.a * std::exp(-y));
  }

  // Point on the side `dir` of the mode where h drops by one.
  double level_point(double dir) const {
    const double target = top_ - 1.0;
    double step = 0.5;
    double inner = mode_;
    double outer = mode_ + dir * step;
    while (h(outer) > target) {
      inner = outer;
      step *= 2.0;
      outer = mode_ + dir * step;
      if (step > 1e6) {
        throw ConfigurationError("GIG envelope: level point not bracketed");
      }
    }
    for (int i = 0; i < 200 && std::abs(outer - inner) > 1e-13 * (1.0 + std::abs(inner)); ++i) {
      const double mid = 0.5 * (inner + outer);
      if (h(mid) > target) {
        inner = mid;
      } else {
        outer = mid;
      }
    }
    return 0.5 * (inner + outer);
  }

  GigParams g_;
  double mode_ = 0.0;
  double top_ = 0.0;
  double yl_ = 0.0;
  double yr_ = 0.0;
  double sl_ = 0.0;
  double sr_ = 0.0;
  double wl_ = 0.0;
  double wm_ = 0.0;
  double wr_ = 0.0;
  double acceptance_ = 0.0;
};

// Log density of log X at y.
double gig_log_density_y(const GigParams &g, double log_norm, double y) {
  return g.order * y - 0.5 * (g.b * g.b * std::exp(y) + g.a * g.a * std::exp(-y)) -
         log_norm;
}

double gig_mode_y(const GigParams &g) {
  const double b2 = g.b * g.b;
  return std::log((g.order + std::sqrt(g.order * g.order + g.a * g.a * b2)) / b2);
}

// Fills out[i] for i in [0, count) with draws(engine) using streams of
// kStreamChunk values each.
template <class Draw>
std::vector<double> chunked(std::size_t count, std::uint64_t seed, const Draw &draw) {
  std::vector<double> out(count);
  const std::size_t chunks = (count + kStreamChunk - 1) / kStreamChunk;
  parallel_for(chunks, [&](std::size_t c) {
    auto engine = make_stream(seed, c);
    const std::size_t end = std::min(count, (c + 1) * kStreamChunk);
    for (std::size_t i = c * kStreamChunk; i < end; ++i) {
      out[i] = draw(engine);
    }
  });
  return out;
}

} // namespace

void GigParams::validate() const {
  detail::require(std::isfinite(order), "GIG order must be finite");
  detail::require(b > 0.0 && std::isfinite(b), "GIG b must be positive");
  detail::require(a >= 0.0 && std::isfinite(a), "GIG a must be nonnegative");
  detail::require(a > 0.0 || order > 0.0, "GIG with a = 0 needs order > 0");
}

void ExpTimeParams::validate() const {
  detail::require(std::isfinite(mu), "mu must be finite");
  detail::require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
}

double ExpTimeParams::nu() const { return std::sqrt(2.0 * lambda + mu * mu); }
double ExpTimeParams::a() const { return 0.5 * (nu() + mu); }
double ExpTimeParams::b() const { return 0.5 * (nu() - mu); }

double exp_time_joint_density(const ExpTimeParams &p, double y, double u) {
  p.validate();
  detail::require(y > 0.0 && u > 0.0, "joint density needs y, u > 0");
  const double nu = p.nu();
  const double log_p = log_transition_density(BesselParams{nu, 1.0}, u, y);
  return std::exp(std::log(p.lambda) - (2.0 + nu - p.mu) * std::log(y) + log_p);
}

// Below this u the Beta weight is resolved on the scale w ~ 2u instead.
constexpr double kSmallU = 1.0 / 160.0;

double exp_time_density(const ExpTimeParams &p, double u) {
  p.validate();
  detail::require(u > 0.0, "density needs u > 0");
  const double a = p.a();
  const double b = p.b();
  if (u < kSmallU) {
    // w = 2u r; the cut at r = min(1/4u, b + 100) drops the e^{-r} tail.
    const auto r = integrate_adaptive(
        [&](double x) {
          return std::exp(b * std::log(x) + (a - 1.0) * std::log1p(-2.0 * u * x) - x);
        },
        Interval{0.0, std::min(0.25 / u, b + 100.0)}, kLawSpec);
    return std::exp(std::log(2.0 * a) - std::lgamma(b)) * r.value;
  }
  const double inv = 1.0 / (2.0 * u);
  const auto r = integrate_beta_weighted(
      b + 1.0, a, [&](double w) { return std::exp(-w * inv); }, kLawSpec);
  return std::exp(std::log(2.0 * a) - std::lgamma(b) - (b + 1.0) * std::log(2.0 * u)) *
         r.value;
}

double exp_time_cdf(const ExpTimeParams &p, double u) {
  p.validate();
  if (!(u > 0.0)) {
    return 0.0;
  }
  if (u == kInf) {
    return 1.0;
  }
  const double a = p.a();
  const double b = p.b();
  // P(A <= u) = P(gamma_b >= Z / 2u) = E[Q(b, Z / 2u)], Z ~ Beta(1, a).
  if (u < kSmallU) {
    const auto r = integrate_adaptive(
        [&](double x) {
          return std::exp((a - 1.0) * std::log1p(-2.0 * u * x)) *
                 boost::math::gamma_q(b, x);
        },
        Interval{0.0, std::min(0.25 / u, b + 100.0)}, kLawSpec);
    return std::clamp(2.0 * u * a * r.value, 0.0, 1.0);
  }
  const double inv = 1.0 / (2.0 * u);
  const auto r = integrate_beta_weighted(
      1.0, a, [&](double w) { return a * boost::math::gamma_q(b, w * inv); }, kLawSpec);
  return std::clamp(r.value, 0.0, 1.0);
}

std::vector<double> exp_time_sample(const ExpTimeParams &p, std::size_t count,
                                    std::uint64_t seed) {
  p.validate();
  detail::require(count >= 1, "count must be positive");
  const double a = p.a();
  const double b = p.b();
  return chunked(count, seed, [a, b](std::mt19937_64 &engine) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> gamma(b, 1.0);
    const double z = -std::expm1(std::log1p(-unit(engine)) / a);
    return z / (2.0 * gamma(engine));
  });
}

double perpetuity_laplace(double mu, double alpha) {
  detail::require(mu > 0.0 && std::isfinite(mu), "perpetuity needs mu > 0");
  detail::require(alpha > 0.0 && std::isfinite(alpha), "perpetuity needs alpha > 0");
  return std::exp(std::log(2.0) - std::lgamma(mu) + mu * std::log(0.5 * alpha) +
                  log_bessel_k(mu, alpha));
}

double two_sided_perpetuity_laplace(double mu, double alpha, double beta) {
  detail::require(mu > 0.0 && std::isfinite(mu), "perpetuity needs mu > 0");
  detail::require(alpha > 0.0 && beta > 0.0, "perpetuity needs alpha, beta > 0");
  // Scaled Bessel functions: the e^{-alpha} factors cancel, e^{beta} remains.
  const double k_mu = bessel_k_scaled(mu, alpha);
  const double k_mu1 = bessel_k_scaled(mu - 1.0, alpha);
  const double i_mu1 = bessel_i_scaled(mu - 1.0, beta);
  const double i_mu = bessel_i_scaled(mu, beta);
  const double denom = beta * k_mu * i_mu1 + alpha * k_mu1 * i_mu;
  return std::exp(mu * std::log(beta) - std::lgamma(mu) - (mu - 1.0) * std::log(2.0) -
                  beta + std::log(k_mu) - std::log(denom));
}

double inverse_gamma_cdf(double mu, double x) {
  detail::require(mu > 0.0, "inverse gamma needs mu > 0");
  if (!(x > 0.0)) {
    return 0.0;
  }
  if (x == kInf) {
    return 1.0;
  }
  return boost::math::gamma_q(mu, 1.0 / (2.0 * x));
}

double gig_density(const GigParams &g, double x) {
  g.validate();
  detail::require(x > 0.0, "GIG density needs x > 0");
  const double y = std::log(x);
  return std::exp(gig_log_density_y(g, gig_log_norm(g), y) - y);
}

double gig_cdf(const GigParams &g, double x) {
  g.validate();
  if (!(x > 0.0)) {
    return 0.0;
  }
  if (x == kInf) {
    return 1.0;
  }
  const double log_norm = gig_log_norm(g);
  const auto dens = [&](double y) { return std::exp(gig_log_density_y(g, log_norm, y)); };
  const double y = std::log(x);
  const double mode = gig_mode_y(g);
  if (y <= mode) {
    return std::clamp(integrate_adaptive(dens, Interval{-kInf, y}, kLawSpec).value, 0.0, 1.0);
  }
  return std::clamp(1.0 - integrate_adaptive(dens, Interval{y, kInf}, kLawSpec).value, 0.0,
                    1.0);
}

double gig_laplace(const GigParams &g, double s) {
  g.validate();
  detail::require(s >= 0.0, "GIG Laplace transform needs s >= 0");
  const double log_norm = gig_log_norm(g);
  const double mode = gig_mode_y(g);
  const auto f = [&](double y) {
    return std::exp(gig_log_density_y(g, log_norm, y) - s * std::exp(y));
  };
  const auto left = integrate_adaptive(f, Interval{-kInf, mode}, kLawSpec);
  const auto right = integrate_adaptive(f, Interval{mode, kInf}, kLawSpec);
  return left.value + right.value;
}

std::vector<double> gig_sample(const GigParams &g, std::size_t count, std::uint64_t seed) {
  detail::require(count >= 1, "count must be positive");
  const GigSampler sampler(g);
  return chunked(count, seed,
                 [&sampler](std::mt19937_64 &engine) { return sampler.draw(engine); });
}

std::vector<double> path_transform(const std::vector<double> &path, double horizon,
                                   double z) {
  detail::require(path.size() >= 2, "path needs at least two points");
  detail::require(horizon > 0.0, "horizon must be positive");
  detail::require(z >= 0.0, "z must be nonnegative");
  const double h = horizon / static_cast<double>(path.size() - 1);
  std::vector<double> out(path.size());
  out[0] = path[0];
  double area = 0.0;
  double prev = std::exp(2.0 * path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double cur = std::exp(2.0 * path[i]);
    area += 0.5 * h * (prev + cur);
    prev = cur;
    out[i] = path[i] - std::log1p(z * area);
  }
  return out;
}

void LimitLaw::validate() const {
  detail::require(std::isfinite(mu), "mu must be finite");
  if (kind == LimitKind::gibbs) {
    detail::require(param > 0.0 && std::isfinite(param), "gibbs alpha must be positive");
  } else {
    detail::require(param > 0.0 && std::isfinite(param), "moment order m must be positive");
  }
}

LimitRecipe limit_recipe(const LimitLaw &law) {
  law.validate();
  LimitRecipe r;
  if (law.kind == LimitKind::gibbs) {
    r.randomizer = LimitRecipe::Randomizer::gig;
    r.gig_a = std::sqrt(2.0 * law.param);
    if (law.mu >= 0.0) {
      r.shape = 0.0;
      r.drift = 0.0;
    } else {
      r.shape = -law.mu;
      r.drift = -law.mu;
    }
    return r;
  }
  const double mu = law.mu;
  const double m = law.param;
  switch (classify_regime(mu, m)) {
  case Regime::R1:
  case Regime::L3:
    r.randomizer = LimitRecipe::Randomizer::twice_gamma;
    r.shape = m - 0.5 * mu;
    r.drift = 0.0;
    break;
  case Regime::L1:
  case Regime::R2:
  case Regime::L2:
    r.randomizer = LimitRecipe::Randomizer::none;
    r.drift = mu - 2.0 * m;
    break;
  case Regime::R3:
    r.randomizer = LimitRecipe::Randomizer::twice_gamma;
    r.shape = m - mu;
    r.drift = -mu;
    break;
  }
  return r;
}

std::vector<double> limit_law_sample(const LimitLaw &law, double t, std::size_t count,
                                     std::uint64_t seed, std::size_t n_steps) {
  detail::require(t > 0.0 && std::isfinite(t), "t must be positive");
  detail::require(count >= 1, "count must be positive");
  detail::require(n_steps >= 2, "n_steps must be at least 2");
  const LimitRecipe recipe = limit_recipe(law);
  std::optional<GigSampler> sampler;
  if (recipe.randomizer == LimitRecipe::Randomizer::gig) {
    sampler.emplace(GigParams{recipe.shape, recipe.gig_a, 1.0});
  }
  const double h = t / static_cast<double>(n_steps);
  const double sqrt_h = std::sqrt(h);
  return chunked(count, seed, [&](std::mt19937_64 &engine) {
    double z = 0.0;
    if (recipe.randomizer == LimitRecipe::Randomizer::gig) {
      z = sampler->draw(engine);
    } else if (recipe.randomizer == LimitRecipe::Randomizer::twice_gamma) {
      std::gamma_distribution<double> gamma(recipe.shape, 1.0);
      z = 2.0 * gamma(engine);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    double x = 0.0;
    double area = 0.0;
    double prev = 1.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
      x += recipe.drift * h + sqrt_h * normal(engine);
      const double cur = std::exp(2.0 * x);
      area += 0.5 * h * (prev + cur);
      prev = cur;
    }
    return x - std::log1p(z * area);
  });
}

} // namespace xbf
