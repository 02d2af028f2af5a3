#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "pgchoice/error.hpp"
#include "pgchoice/rng.hpp"

namespace pgchoice {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

// log(1 + e^x) without overflow.
inline double softplus(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

// log(1 - e^x) for x <= 0.
inline double log1mexp(double x) {
  if (x > -std::numbers::ln2) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

inline void check_interval(double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper))
    throw InvalidParameter("empty truncation interval (" + std::to_string(lower) +
                           ", " + std::to_string(upper) + ")");
}

inline double clamp_open(double x, double lower, double upper) {
  if (x <= lower) x = std::nextafter(lower, upper);
  if (x >= upper) x = std::nextafter(upper, lower);
  return x;
}

// Inverse-cdf draw restricted to (lower, upper), with every probability kept
// on the log scale. Tail intervals above the median are inverted through the
// survival function so that neither side underflows.
template <class Dist>
double truncated_inverse_cdf(const Dist& dist, double lower, double upper, RngStream& rng) {
  check_interval(lower, upper);
  const double u = rng.uniform();
  double x;
  if (lower >= dist.median()) {
    const double s_lo = dist.log_sf(lower);
    const double s_hi = upper == kInf ? -kInf : dist.log_sf(upper);
    const double log_p = s_lo + std::log(u + (1.0 - u) * std::exp(s_hi - s_lo));
    x = dist.quantile_log_sf(log_p);
  } else {
    const double f_hi = upper == kInf ? 0.0 : dist.log_cdf(upper);
    const double f_lo = lower == -kInf ? -kInf : dist.log_cdf(lower);
    const double log_p = f_hi + std::log(u + (1.0 - u) * std::exp(f_lo - f_hi));
    x = dist.quantile_log_cdf(log_p);
  }
  return clamp_open(x, lower, upper);
}

struct Logistic {
  double location = 0.0;
  double median() const { return location; }
  double log_cdf(double x) const { return -softplus(location - x); }
  double log_sf(double x) const { return -softplus(x - location); }
  double quantile_log_cdf(double l) const { return location + l - log1mexp(l); }
  double quantile_log_sf(double s) const { return location + log1mexp(s) - s; }
};

// Type-I generalized logistic, F(x) = (1 + e^{-x})^{-nu}.
struct GenLogisticI {
  double nu = 1.0;
  double median() const { return -std::log(std::expm1(std::numbers::ln2 / nu)); }
  double log_cdf(double x) const { return -nu * softplus(-x); }
  double log_sf(double x) const { return log1mexp(log_cdf(x)); }
  double quantile_log_cdf(double l) const { return -std::log(std::expm1(-l / nu)); }
  double quantile_log_sf(double s) const { return quantile_log_cdf(log1mexp(s)); }
};

// Standard normal restricted to (a, b).
inline double std_truncated_normal(double a, double b, RngStream& rng) {
  if (b <= 0.0) return -std_truncated_normal(-b, -a, rng);
  if (a < 0.0) {
    // interval contains the mode
    if (b - a < 1.0) {
      for (;;) {
        const double x = a + (b - a) * rng.uniform();
        if (std::log(rng.uniform()) < -0.5 * x * x) return clamp_open(x, a, b);
      }
    }
    for (;;) {
      const double x = rng.normal();
      if (x > a && x < b) return x;
    }
  }
  if (a < 0.45) {
    if (b - a < 1.0) {
      for (;;) {
        const double x = a + (b - a) * rng.uniform();
        if (std::log(rng.uniform()) < -0.5 * (x * x - a * a)) return clamp_open(x, a, b);
      }
    }
    for (;;) {
      const double x = std::abs(rng.normal());
      if (x > a && x < b) return x;
    }
  }
  // Robert (1995) translated-exponential rejection, truncated at b.
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  const double width_mass = b == kInf ? 1.0 : -std::expm1(-alpha * (b - a));
  for (;;) {
    const double x = a - std::log1p(-rng.uniform() * width_mass) / alpha;
    const double dev = x - alpha;
    if (std::log(rng.uniform()) < -0.5 * dev * dev) return clamp_open(x, a, b);
  }
}

}  // namespace detail

struct PolyaGammaParams {
  double b = 1.0;
  double z = 0.0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

inline void validate(const PolyaGammaParams& p) {
  if (!(p.b > 0.0) || !std::isfinite(p.b))
    throw InvalidParameter("Polya-Gamma shape b must be positive, got " + std::to_string(p.b));
  if (!std::isfinite(p.z))
    throw InvalidParameter("Polya-Gamma tilt z must be finite");
}

// Closed-form mean and variance of PG(b, z).
inline Moments pg_moments(const PolyaGammaParams& p) {
  validate(p);
  const double z = std::abs(p.z);
  if (z < 1e-3) {
    const double z2 = z * z;
    return {p.b / 4.0 * (1.0 - z2 / 12.0), p.b / 24.0 - p.b * z2 / 120.0};
  }
  const double mean = p.b / (2.0 * z) * std::tanh(z / 2.0);
  const double ch = std::cosh(z / 2.0);
  const double var = p.b * (std::sinh(z) - z) / (4.0 * z * z * z * ch * ch);
  return {mean, var};
}

namespace detail {

inline constexpr double kPgTrunc = 2.0 / std::numbers::pi;  // switch point t = 2/pi

inline double log_std_normal_cdf(double x) {
  return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

// Coefficient a_n(x) of the alternating-series density of J*(1, 0).
inline double pg_aterm(int n, double x) {
  const double k = n + 0.5;
  if (x <= kPgTrunc) {
    return std::exp(std::log(std::numbers::pi) + std::log(k) +
                    1.5 * (std::log(2.0 / std::numbers::pi) - std::log(x)) - 2.0 * k * k / x);
  }
  return std::exp(std::log(std::numbers::pi) + std::log(k) -
                  x * std::numbers::pi * std::numbers::pi / 2.0 * k * k);
}

inline double inverse_gaussian_unit_shape(double mu, RngStream& rng) {
  const double n = rng.normal();
  const double v = n * n;
  const double x = mu + 0.5 * mu * (mu * v - std::sqrt(4.0 * mu * v + mu * mu * v * v));
  return rng.uniform() > mu / (mu + x) ? mu * mu / x : x;
}

// Inverse Gaussian(1/c, 1) truncated to (0, t).
inline double truncated_inverse_gaussian(double c, RngStream& rng) {
  const double mu = 1.0 / c;
  if (mu > kPgTrunc) {
    for (;;) {
      double e;
      for (;;) {
        // 1/X with X ~ Gamma(1/2) truncated to (1/t, inf), via exponential rejection
        const double x = 2.0 * rng.exponential() + std::numbers::pi / 2.0;
        if (rng.uniform() <= std::sqrt(std::numbers::pi / 2.0) / std::sqrt(x)) {
          e = 1.0 / x;
          break;
        }
      }
      if (std::log(rng.uniform()) < -0.5 * c * c * e) return e;
    }
  }
  for (;;) {
    const double x = inverse_gaussian_unit_shape(mu, rng);
    if (x < kPgTrunc) return x;
  }
}

// Devroye-style exact sampler for J*(1, c); PG(1, z) = J*(1, z/2) / 4.
class PgOneSampler {
 public:
  explicit PgOneSampler(double z) : c_(std::abs(z) / 2.0) {
    k_ = c_ * c_ / 2.0 + std::numbers::pi * std::numbers::pi / 8.0;
    const double t = kPgTrunc;
    const double log_a = std::log(4.0) - std::log(std::numbers::pi) - c_;
    const double w = std::sqrt(std::numbers::pi / 2.0);
    const double log_k = std::log(k_);
    const double logf1 = log_a + log_std_normal_cdf(w * (t * c_ - 1.0)) + log_k + k_ * t;
    const double logf2 = log_a + 2.0 * c_ + log_std_normal_cdf(-w * (t * c_ + 1.0)) + log_k + k_ * t;
    ratio_ = 1.0 / (1.0 + std::exp(logf1) + std::exp(logf2));
  }

  double operator()(RngStream& rng) const {
    for (;;) {
      const double x = rng.uniform() < ratio_ ? kPgTrunc + rng.exponential() / k_
                                              : truncated_inverse_gaussian(c_, rng);
      double s = pg_aterm(0, x);
      const double y = rng.uniform() * s;
      for (int n = 1;; ++n) {
        if (n % 2 == 1) {
          s -= pg_aterm(n, x);
          if (y <= s) return 0.25 * x;
        } else {
          s += pg_aterm(n, x);
          if (y > s) break;
        }
      }
    }
  }

 private:
  double c_;
  double k_;
  double ratio_;
};

inline constexpr double kPgExactMaxShape = 200.0;

}  // namespace detail

// PG(b, z) for integer b >= 1. Exact (sum of b PG(1, z) draws) up to b = 200,
// moment-matched normal beyond.
inline double draw_polya_gamma(const PolyaGammaParams& p, RngStream& rng) {
  validate(p);
  if (p.b < 1.0 || p.b != std::floor(p.b))
    throw InvalidParameter("Polya-Gamma shape b must be an integer >= 1, got " +
                           std::to_string(p.b));
  if (p.b <= detail::kPgExactMaxShape) {
    const detail::PgOneSampler one(p.z);
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(p.b); ++i) sum += one(rng);
    return sum;
  }
  const Moments m = pg_moments(p);
  const double sd = std::sqrt(m.variance);
  for (;;) {
    const double x = m.mean + sd * rng.normal();
    if (x > 0.0) return x;
  }
}

// Standard type-I extreme value (Gumbel) variate.
inline double draw_gumbel(RngStream& rng) { return -std::log(rng.exponential()); }

inline double draw_logistic(RngStream& rng) {
  const double u = rng.uniform();
  return std::log(u) - std::log1p(-u);
}

inline double logistic_pdf(double x) {
  const double e = std::exp(-std::abs(x));
  return e / ((1.0 + e) * (1.0 + e));
}

inline double logistic_cdf(double x) { return std::exp(-detail::softplus(-x)); }

inline double draw_truncated_normal(double mu, double sigma, double lower, double upper,
                                    RngStream& rng) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidParameter("truncated normal needs sigma > 0");
  detail::check_interval(lower, upper);
  const double a = (lower - mu) / sigma;
  const double b = (upper - mu) / sigma;
  return detail::clamp_open(mu + sigma * detail::std_truncated_normal(a, b, rng), lower, upper);
}

inline double draw_truncated_logistic(double mu, double lower, double upper, RngStream& rng) {
  return detail::truncated_inverse_cdf(detail::Logistic{mu}, lower, upper, rng);
}

enum class GenLogisticType { TypeI, TypeII };

inline void check_nu(double nu) {
  if (!(nu >= 1.0) || !std::isfinite(nu))
    throw InvalidParameter("generalized logistic needs nu >= 1, got " + std::to_string(nu));
}

// GL-I(nu) or GL-II(nu) restricted to (lower, upper). GL-II is the mirror image
// of GL-I: X ~ GL-II(nu) <=> -X ~ GL-I(nu).
inline double draw_gen_logistic(GenLogisticType family, double nu, double lower, double upper,
                                RngStream& rng) {
  check_nu(nu);
  detail::check_interval(lower, upper);
  const detail::GenLogisticI dist{nu};
  if (family == GenLogisticType::TypeI) return detail::truncated_inverse_cdf(dist, lower, upper, rng);
  return detail::clamp_open(-detail::truncated_inverse_cdf(dist, -upper, -lower, rng), lower, upper);
}

inline double gen_logistic_cdf(GenLogisticType family, double nu, double x) {
  check_nu(nu);
  const detail::GenLogisticI dist{nu};
  if (family == GenLogisticType::TypeI) return std::exp(dist.log_cdf(x));
  return std::exp(dist.log_sf(-x));
}

inline double gen_logistic_median(GenLogisticType family, double nu) {
  check_nu(nu);
  const double m = detail::GenLogisticI{nu}.median();
  return family == GenLogisticType::TypeI ? m : -m;
}

}  // namespace pgchoice
