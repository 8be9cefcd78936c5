#include "xbf/quadrature.hpp"

#include "xbf/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <vector>

namespace xbf {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw ConfigurationError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw ConfigurationError("max_subdivisions must be at least 1");
  }
  if (!(truncation_threshold > 0.0)) {
    throw ConfigurationError("truncation_threshold must be positive");
  }
}

double QuadratureSpec::target(double value) const {
  return std::max(abs_tol, rel_tol * std::fabs(value));
}

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule.
constexpr long double kXgk[11] = {
    0.995657163025808080735527280689003L, 0.973906528517171720077964012084452L,
    0.930157491355708226001207180059508L, 0.865063366688984510732096688423493L,
    0.780817726586416897063717578345042L, 0.679409568299024406234327365114874L,
    0.562757134668604683339000099272694L, 0.433395394129247190799265943165784L,
    0.294392862701460198131126603103866L, 0.148874338981631210884826001129720L,
    0.0L};
constexpr long double kWgk[11] = {
    0.011694638867371874278064396062192L, 0.032558162307964727478818972459390L,
    0.054755896574351996031381300244580L, 0.075039674810919952767043140916190L,
    0.093125454583697605535065465083366L, 0.109387158802297641899210590325805L,
    0.123491976262065851077600525535000L, 0.134709217311473325928054001771707L,
    0.142775938577060080797094273138717L, 0.147739104901338491374841515972068L,
    0.149445554002916905664936468389821L};
constexpr long double kWg[5] = {
    0.066671344308688137593568809893332L, 0.149451349150580593145776339657697L,
    0.219086362515982043995534934228163L, 0.269266719309996355091226921569469L,
    0.295524224714752870173892994651338L};

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Segment {
  long double a;
  long double b;
  long double value;
  long double error;
  long double fmax;
};

bool operator<(const Segment &lhs, const Segment &rhs) {
  return lhs.error < rhs.error;
}

struct DoubleAdapter {
  const Integrand &f;
  long double operator()(long double x) const {
    return static_cast<long double>(f(static_cast<double>(x)));
  }
};

struct ExtendedAdapter {
  const ExtendedIntegrand &f;
  long double operator()(long double x) const { return f(x); }
};

template <class F>
Segment gauss_kronrod(const F &f, long double a, long double b,
                      long double eps_f) {
  const long double center = 0.5L * (a + b);
  const long double half = 0.5L * (b - a);
  long double fv1[10];
  long double fv2[10];
  const long double fc = f(center);
  long double resk = fc * kWgk[10];
  long double resg = 0.0L;
  long double resabs = std::fabs(resk);
  long double fmax = std::fabs(fc);
  for (int j = 0; j < 10; ++j) {
    const long double dx = half * kXgk[j];
    const long double f1 = f(center - dx);
    const long double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) {
      resg += kWg[j / 2] * (f1 + f2);
    }
    fmax = std::max({fmax, std::fabs(f1), std::fabs(f2)});
  }
  const long double mean = 0.5L * resk;
  long double resasc = kWgk[10] * std::fabs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }
  const long double width = std::fabs(half);
  resabs *= width;
  resasc *= width;
  long double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0L && err != 0.0L) {
    err = resasc * std::min(1.0L, std::pow(200.0L * err / resasc, 1.5L));
  }
  if (resabs > LDBL_MIN / (50.0L * eps_f)) {
    err = std::max(err, 50.0L * eps_f * resabs);
  }
  if (!std::isfinite(resk)) {
    err = std::numeric_limits<long double>::infinity();
  }
  return Segment{a, b, resk * half, err, fmax};
}

class SegmentPool {
public:
  void add(const Segment &s) {
    heap_.push_back(s);
    std::push_heap(heap_.begin(), heap_.end());
    value_ += s.value;
    error_ += s.error;
  }
  void add_frozen(const Segment &s) {
    frozen_.push_back(s);
    value_ += s.value;
    error_ += s.error;
  }
  bool empty() const { return heap_.empty(); }
  Segment pop() {
    std::pop_heap(heap_.begin(), heap_.end());
    Segment s = heap_.back();
    heap_.pop_back();
    value_ -= s.value;
    error_ -= s.error;
    return s;
  }
  // Resum from scratch so running updates do not accumulate drift.
  void resum() {
    value_ = 0.0L;
    error_ = 0.0L;
    for (const auto &s : heap_) {
      value_ += s.value;
      error_ += s.error;
    }
    for (const auto &s : frozen_) {
      value_ += s.value;
      error_ += s.error;
    }
  }
  long double value() const { return value_; }
  long double error() const { return std::max(error_, 0.0L); }

private:
  std::vector<Segment> heap_;
  std::vector<Segment> frozen_;
  long double value_ = 0.0L;
  long double error_ = 0.0L;
};

// March geometrically growing panels away from `start` in direction `sign`
// until the integrand falls below the truncation threshold.
template <class F>
bool march_tail(const F &f, long double start, int sign,
                const QuadratureSpec &spec, long double eps_f,
                SegmentPool &pool, long double &tail_error) {
  constexpr int kMaxPanels = 400;
  long double width = 1.0L;
  long double lo = start;
  long double running_max = 0.0L;
  for (int k = 0; k < kMaxPanels; ++k) {
    const long double hi = lo + sign * width;
    const Segment s = sign > 0 ? gauss_kronrod(f, lo, hi, eps_f)
                               : gauss_kronrod(f, hi, lo, eps_f);
    pool.add(s);
    running_max = std::max(running_max, s.fmax);
    if (running_max > 0.0L &&
        s.fmax < spec.truncation_threshold * running_max) {
      tail_error = std::fabs(s.value) + s.fmax * width * LDBL_EPSILON;
      return true;
    }
    if (running_max == 0.0L && k > 60) {
      tail_error = 0.0L;
      return true;
    }
    lo = hi;
    if (width < 1e300L) {
      width *= 2.0L;
    }
  }
  return false;
}

template <class F>
IntegralResult adaptive_impl(const F &f, Interval domain,
                             const QuadratureSpec &spec, long double eps_f) {
  spec.validate();
  if (std::isnan(domain.lower) || std::isnan(domain.upper)) {
    throw DomainError("integration bounds must not be NaN");
  }
  double sign = 1.0;
  if (domain.upper < domain.lower) {
    std::swap(domain.lower, domain.upper);
    sign = -1.0;
  }
  if (domain.lower == domain.upper) {
    return IntegralResult{0.0, 0.0, 0, true};
  }
  SegmentPool pool;
  long double tail_error = 0.0L;
  bool tails_ok = true;
  const bool lo_inf = std::isinf(domain.lower);
  const bool hi_inf = std::isinf(domain.upper);
  if (!lo_inf && !hi_inf) {
    pool.add(gauss_kronrod(f, domain.lower, domain.upper, eps_f));
  } else if (lo_inf && hi_inf) {
    long double e1 = 0.0L;
    long double e2 = 0.0L;
    tails_ok = march_tail(f, 0.0L, +1, spec, eps_f, pool, e1);
    tails_ok = march_tail(f, 0.0L, -1, spec, eps_f, pool, e2) && tails_ok;
    tail_error = e1 + e2;
  } else if (hi_inf) {
    tails_ok = march_tail(f, domain.lower, +1, spec, eps_f, pool, tail_error);
  } else {
    tails_ok = march_tail(f, domain.upper, -1, spec, eps_f, pool, tail_error);
  }

  std::size_t subdivisions = 0;
  while (true) {
    const long double total_error = pool.error() + tail_error;
    if (total_error <= spec.target(static_cast<double>(pool.value()))) {
      break;
    }
    if (subdivisions >= spec.max_subdivisions || pool.empty()) {
      break;
    }
    const Segment worst = pool.pop();
    const long double mid = 0.5L * (worst.a + worst.b);
    const long double scale = std::max(std::fabs(worst.a), std::fabs(worst.b));
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e3L * LDBL_EPSILON * scale) {
      pool.add_frozen(worst);
      continue;
    }
    pool.add(gauss_kronrod(f, worst.a, mid, eps_f));
    pool.add(gauss_kronrod(f, mid, worst.b, eps_f));
    ++subdivisions;
    if (subdivisions % 64 == 0) {
      pool.resum();
    }
  }
  pool.resum();
  IntegralResult out;
  out.value = sign * static_cast<double>(pool.value());
  out.error_estimate = static_cast<double>(pool.error() + tail_error);
  out.subdivisions_used = subdivisions;
  out.converged = tails_ok && std::isfinite(out.value) &&
                  out.error_estimate <= spec.target(out.value);
  return out;
}

template <class F>
IntegralResult oscillatory_impl(const F &f, double lower,
                                const ZeroSequence &zeros,
                                const QuadratureSpec &spec,
                                OscillatoryOptions options, long double eps_f) {
  spec.validate();
  const double upper = options.upper;
  const double z1 = zeros(1);
  const double z2 = zeros(2);
  if (!(z1 > lower) || !(z2 < upper)) {
    return adaptive_impl(f, Interval{lower, upper}, spec, eps_f);
  }

  constexpr std::size_t kWindow = 40;
  std::vector<double> partial;
  std::vector<double> terms;
  long double sum = 0.0L;
  long double quad_error = 0.0L;
  std::size_t subdivisions = 0;
  bool segments_ok = true;
  double previous_extrapolation = std::nan("");

  double a = lower;
  for (std::size_t k = 1;; ++k) {
    double b = zeros(k);
    bool last = false;
    if (!(b < upper)) {
      b = upper;
      last = true;
    }
    if (!(b > a)) {
      throw ContractError("zero sequence must be strictly increasing");
    }
    QuadratureSpec segment_spec = spec;
    segment_spec.rel_tol = 0.25 * spec.rel_tol;
    segment_spec.abs_tol =
        k == 1 ? 0.25 * spec.abs_tol
               : std::max(0.25 * spec.abs_tol,
                          0.25 * spec.rel_tol *
                              std::fabs(static_cast<double>(sum)));
    const IntegralResult piece =
        adaptive_impl(f, Interval{a, b}, segment_spec, eps_f);
    subdivisions += piece.subdivisions_used + 1;
    quad_error += piece.error_estimate;
    segments_ok = segments_ok && piece.converged;
    sum += piece.value;
    partial.push_back(static_cast<double>(sum));
    terms.push_back(piece.value);

    IntegralResult out;
    out.subdivisions_used = subdivisions;
    const double current = static_cast<double>(sum);
    if (last) {
      out.value = current;
      out.error_estimate = static_cast<double>(quad_error);
      out.converged =
          segments_ok && out.error_estimate <= spec.target(out.value);
      return out;
    }
    const double tol = spec.target(current);
    if (k >= 2) {
      const double recent =
          std::fabs(terms[k - 1]) + std::fabs(terms[k - 2]);
      if (recent <= 0.05 * tol) {
        out.value = current;
        out.error_estimate =
            static_cast<double>(quad_error) + std::fabs(terms[k - 1]);
        out.converged =
            segments_ok && out.error_estimate <= spec.target(out.value);
        return out;
      }
    }
    if (options.accelerate && k >= 6) {
      bool alternating = true;
      for (std::size_t j = k - 4; j < k; ++j) {
        if (!(terms[j] * terms[j - 1] < 0.0) ||
            !(std::fabs(terms[j]) < std::fabs(terms[j - 1]))) {
          alternating = false;
          break;
        }
      }
      if (alternating) {
        const std::size_t count = std::min(partial.size(), kWindow);
        const Extrapolation ext =
            wynn_epsilon(partial.data() + partial.size() - count, count);
        double ext_error = ext.error_estimate;
        if (std::isfinite(previous_extrapolation)) {
          ext_error =
              std::max(ext_error, std::fabs(ext.value - previous_extrapolation));
        }
        previous_extrapolation = ext.value;
        const double total = ext_error + static_cast<double>(quad_error);
        if (std::isfinite(ext.value) && total <= 0.5 * spec.target(ext.value)) {
          out.value = ext.value;
          out.error_estimate = total;
          out.converged = segments_ok;
          return out;
        }
      }
    }
    if (k >= spec.max_subdivisions) {
      out.value = std::isfinite(previous_extrapolation) ? previous_extrapolation
                                                        : current;
      out.error_estimate =
          static_cast<double>(quad_error) + std::fabs(terms[k - 1]);
      out.converged = false;
      return out;
    }
    a = b;
  }
}

} // namespace

IntegralResult integrate_adaptive(const Integrand &f, Interval domain,
                                  const QuadratureSpec &spec) {
  return adaptive_impl(DoubleAdapter{f}, domain, spec, DBL_EPSILON);
}

IntegralResult integrate_adaptive_extended(const ExtendedIntegrand &f,
                                           Interval domain,
                                           const QuadratureSpec &spec) {
  return adaptive_impl(ExtendedAdapter{f}, domain, spec, LDBL_EPSILON);
}

IntegralResult integrate_oscillatory(const Integrand &f, double lower,
                                     const ZeroSequence &zeros,
                                     const QuadratureSpec &spec,
                                     OscillatoryOptions options) {
  return oscillatory_impl(DoubleAdapter{f}, lower, zeros, spec, options,
                          DBL_EPSILON);
}

IntegralResult integrate_oscillatory_extended(const ExtendedIntegrand &f,
                                              double lower,
                                              const ZeroSequence &zeros,
                                              const QuadratureSpec &spec,
                                              OscillatoryOptions options) {
  return oscillatory_impl(ExtendedAdapter{f}, lower, zeros, spec, options,
                          LDBL_EPSILON);
}

IntegralResult integrate_beta_weighted(double p, double q, const Integrand &g,
                                       const QuadratureSpec &spec) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw DomainError("beta-weighted integral needs positive exponents");
  }
  // Left half: w = u^{1/p}, so w^{p-1} dw = du / p.
  const double u_max = std::pow(0.5, p);
  const auto left = integrate_adaptive(
      [&](double u) {
        const double w = std::pow(u, 1.0 / p);
        return std::pow(1.0 - w, q - 1.0) * g(w) / p;
      },
      Interval{0.0, u_max}, spec);
  // Right half: 1 - w = v^{1/q}, so (1-w)^{q-1} dw = -dv / q.
  const double v_max = std::pow(0.5, q);
  const auto right = integrate_adaptive(
      [&](double v) {
        const double w = 1.0 - std::pow(v, 1.0 / q);
        return std::pow(w, p - 1.0) * g(w) / q;
      },
      Interval{0.0, v_max}, spec);
  IntegralResult out;
  out.value = left.value + right.value;
  out.error_estimate = left.error_estimate + right.error_estimate;
  out.subdivisions_used = left.subdivisions_used + right.subdivisions_used;
  out.converged = left.converged && right.converged;
  return out;
}

Extrapolation wynn_epsilon(const double *partial_sums, std::size_t count) {
  if (count == 0) {
    return {std::nan(""), std::numeric_limits<double>::infinity()};
  }
  if (count < 3) {
    const double last = partial_sums[count - 1];
    const double err =
        count == 2 ? std::fabs(last - partial_sums[0])
                   : std::numeric_limits<double>::infinity();
    return {last, err};
  }
  // Columns eps_{k}^{(j)}, j indexes the starting sum.
  std::vector<long double> prev(count + 1, 0.0L);
  std::vector<long double> curr(partial_sums, partial_sums + count);
  long double best = curr.back();
  long double best_prev = curr[count - 2];
  for (std::size_t k = 1; k < count; ++k) {
    const std::size_t n = count - k;
    std::vector<long double> next(n);
    bool broke = false;
    for (std::size_t j = 0; j < n; ++j) {
      const long double diff = curr[j + 1] - curr[j];
      if (diff == 0.0L || !std::isfinite(diff)) {
        broke = true;
        break;
      }
      next[j] = prev[j + 1] + 1.0L / diff;
    }
    if (broke) {
      break;
    }
    if (k % 2 == 0) {
      best_prev = n >= 2 ? next[n - 2] : best;
      best = next[n - 1];
    }
    prev = std::move(curr);
    curr = std::move(next);
  }
  const double value = static_cast<double>(best);
  return {value, static_cast<double>(std::fabs(best - best_prev)) +
                     5.0 * DBL_EPSILON * std::fabs(value)};
}

} // namespace xbf
