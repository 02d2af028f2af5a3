#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "pgchoice/diagnostics.hpp"
#include "pgchoice/rng.hpp"
#include "pgchoice/types.hpp"

namespace testsupport {

// Kolmogorov asymptotic critical value at the 1% level.
inline constexpr double kKs01 = 1.628;

inline std::vector<double> sorted(const Eigen::VectorXd& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  return v;
}

inline double ks_statistic(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto x = sorted(a), y = sorted(b);
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

inline double ks_statistic(const Eigen::VectorXd& a, const std::function<double(double)>& cdf) {
  const auto x = sorted(a);
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

struct KsOutcome {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass() const { return statistic < critical; }
};

// Two-sample KS on MCMC output; the sample sizes are the chains' effective
// sample sizes.
inline KsOutcome ks_chains(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = pgchoice::ess(a), nb = pgchoice::ess(b);
  return {ks_statistic(a, b), kKs01 * std::sqrt((na + nb) / (na * nb))};
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Posterior mean / variance of each coordinate by midpoint quadrature of
// prior x likelihood on an equispaced grid (one or two dimensions).
struct GridMoments {
  Eigen::VectorXd mean, var;
};

inline GridMoments grid_moments(int dim, double lo, double hi, int points,
                                const std::function<double(const Eigen::VectorXd&)>& log_post) {
  const double h = (hi - lo) / points;
  auto node = [&](int i) { return lo + (i + 0.5) * h; };
  std::vector<double> lp;
  std::vector<Eigen::VectorXd> at;
  Eigen::VectorXd b(dim);
  if (dim == 1) {
    for (int i = 0; i < points; ++i) {
      b(0) = node(i);
      lp.push_back(log_post(b));
      at.push_back(b);
    }
  } else {
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < points; ++j) {
        b << node(i), node(j);
        lp.push_back(log_post(b));
        at.push_back(b);
      }
  }
  const double mx = *std::max_element(lp.begin(), lp.end());
  double z = 0.0;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim), m2 = Eigen::VectorXd::Zero(dim);
  for (std::size_t k = 0; k < lp.size(); ++k) {
    const double w = std::exp(lp[k] - mx);
    z += w;
    m += w * at[k];
    m2 += w * at[k].cwiseAbs2();
  }
  m /= z;
  m2 /= z;
  return {m, m2 - m.cwiseAbs2()};
}

inline double log_prior(const Eigen::VectorXd& b, double a0, double g0, Eigen::Index intercept) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    const double v = a0 + (j == intercept ? g0 : 0.0);
    s += -0.5 * b(j) * b(j) / v;
  }
  return s;
}

// Design [1, x] with x ~ N(0, 1).
inline Eigen::MatrixXd design(int n, int d, pgchoice::RngStream& rng) {
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (int j = 1; j < d; ++j) X(i, j) = rng.normal();
  }
  return X;
}

inline Eigen::VectorXi binary_outcome(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                                      pgchoice::RngStream& rng) {
  Eigen::VectorXi y(X.rows());
  const Eigen::VectorXd eta = X * beta;
  for (Eigen::Index i = 0; i < X.rows(); ++i) y(i) = rng.uniform() < logistic(eta(i)) ? 1 : 0;
  return y;
}

}  // namespace testsupport
