#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "pgchoice/error.hpp"
#include "pgchoice/randvar.hpp"
#include "pgchoice/rng.hpp"
#include "pgchoice/types.hpp"

namespace pgchoice {

// beta ~ N(0, a0 * I + g0 * e e'), e the unit vector of the intercept column.
// `intercept` is a 0-based column index.
struct PriorSpec {
  double a0 = 4.0;
  double g0 = 100.0;
  Eigen::Index intercept = 0;
  Eigen::Index coef_dim = 1;
};

inline void validate(const PriorSpec& p) {
  if (!(p.a0 > 0.0) || !std::isfinite(p.a0))
    throw InvalidParameter("prior variance A0 must be positive, got " + std::to_string(p.a0));
  if (!(p.g0 >= 0.0) || !std::isfinite(p.g0))
    throw InvalidParameter("intercept prior variance G0 must be >= 0, got " + std::to_string(p.g0));
  if (p.coef_dim < 1) throw InvalidParameter("prior needs at least one coefficient");
  if (p.intercept < 0 || p.intercept >= p.coef_dim)
    throw InvalidParameter("intercept index " + std::to_string(p.intercept) +
                           " outside 0.." + std::to_string(p.coef_dim - 1));
}

inline Eigen::MatrixXd prior_covariance(const PriorSpec& p) {
  validate(p);
  Eigen::MatrixXd s = p.a0 * Eigen::MatrixXd::Identity(p.coef_dim, p.coef_dim);
  s(p.intercept, p.intercept) += p.g0;
  return s;
}

// Sherman-Morrison inverse of the prior covariance.
inline Eigen::MatrixXd prior_precision(const PriorSpec& p) {
  validate(p);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(p.coef_dim, p.coef_dim) / p.a0;
  q(p.intercept, p.intercept) -= p.g0 / (p.a0 * (p.a0 + p.g0));
  return q;
}

struct WeightedRegressionInput {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& response;
  const Eigen::VectorXd& weights;
  const Eigen::VectorXd& offsets;
};

namespace detail {

// Index of the first leading minor that is not positive definite.
inline Eigen::Index failing_pivot(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) return j;
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i)
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return n;
}

}  // namespace detail

// Gaussian full conditional of the coefficients under weighted observations:
//   precision P = X' W X + P0,  mean = P^{-1} X' (W r + o).
// Also exposes inner products under M^{-1}, M = W^{-1} + X S0 X' being the
// covariance of the utilities with the coefficients integrated out.
// The design matrix is held by reference and must outlive the object.
class WeightedPosterior {
 public:
  WeightedPosterior(const Eigen::MatrixXd& X, const Eigen::VectorXd& weights, const PriorSpec& prior)
      : X_(X), weights_(weights) {
    validate(prior);
    if (X.cols() != prior.coef_dim)
      throw InvalidParameter("design has " + std::to_string(X.cols()) + " columns, prior expects " +
                             std::to_string(prior.coef_dim));
    if (weights.size() != X.rows())
      throw InvalidParameter("weights length does not match design rows");
    if (weights.size() > 0 && !(weights.minCoeff() > 0.0 && weights.allFinite()))
      throw InvalidParameter("regression weights must be strictly positive and finite");
    Eigen::MatrixXd precision = prior_precision(prior);
    precision.noalias() += X.transpose() * weights.asDiagonal() * X;
    llt_.compute(precision);
    if (llt_.info() != Eigen::Success || !llt_.matrixLLT().allFinite()) {
      const Eigen::Index k = detail::failing_pivot(precision);
      throw NumericalError("numerical-degeneracy",
                           "posterior precision not positive definite at dimension " +
                               std::to_string(k));
    }
  }

  Eigen::Index dim() const { return X_.cols(); }

  Eigen::VectorXd mean(const Eigen::VectorXd& response, const Eigen::VectorXd& offsets) const {
    check_length(response);
    check_length(offsets);
    Eigen::VectorXd rhs = X_.transpose() * (weights_.cwiseProduct(response) + offsets);
    return llt_.solve(rhs);
  }

  Eigen::VectorXd draw(const Eigen::VectorXd& response, const Eigen::VectorXd& offsets,
                       RngStream& rng) const {
    Eigen::VectorXd xi(dim());
    for (Eigen::Index j = 0; j < dim(); ++j) xi(j) = rng.normal();
    // L L' = P; L'^{-1} xi has covariance P^{-1}
    return mean(response, offsets) + llt_.matrixU().solve(xi);
  }

  Eigen::MatrixXd covariance() const {
    return llt_.solve(Eigen::MatrixXd::Identity(dim(), dim()));
  }

  // Gram matrix V' M^{-1} V for the columns of V (n x k).
  Eigen::MatrixXd marginal_gram(const Eigen::MatrixXd& V) const {
    const Eigen::MatrixXd wv = weights_.asDiagonal() * V;
    const Eigen::MatrixXd y = llt_.matrixL().solve(X_.transpose() * wv);
    Eigen::MatrixXd g = V.transpose() * wv;
    g.noalias() -= y.transpose() * y;
    return g;
  }

 private:
  void check_length(const Eigen::VectorXd& v) const {
    if (v.size() != X_.rows()) throw InvalidParameter("regression vector length mismatch");
  }

  const Eigen::MatrixXd& X_;
  Eigen::VectorXd weights_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// One exact draw from the Gaussian coefficient conditional.
inline Eigen::VectorXd draw_coefficients(const WeightedRegressionInput& in, const PriorSpec& prior,
                                         RngStream& rng) {
  const WeightedPosterior post(in.X, in.weights, prior);
  return post.draw(in.response, in.offsets, rng);
}

// ---------------------------------------------------------------------------
// Log-likelihood

struct LogLik {
  double value = 0.0;
  int df = 0;
};

namespace detail {

inline double log_norm_cdf(double x) {
  if (x > -20.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

inline double log_sigmoid(double x) { return -softplus(-x); }

}  // namespace detail

// `beta` is d x K: K = 1 for binary and binomial models, K = categories - 1 for
// MNL (column k-1 holds category k; the baseline is implicitly zero).
// The binomial coefficient term log C(N_i, y_i) is added only on request.
inline LogLik log_likelihood(ModelType type, const Eigen::MatrixXd& beta, const ModelData& data,
                             bool include_binomial_constant = false) {
  const int blocks = coefficient_blocks(type, data);
  if (beta.rows() != data.cols() || beta.cols() != blocks)
    throw InvalidParameter("coefficient matrix is " + std::to_string(beta.rows()) + "x" +
                           std::to_string(beta.cols()) + ", expected " +
                           std::to_string(data.cols()) + "x" + std::to_string(blocks));
  if (data.y.size() != data.rows()) throw InvalidParameter("outcome length mismatch");
  const Eigen::MatrixXd eta = data.X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    switch (type) {
      case ModelType::Probit:
        ll += data.y(i) == 1 ? detail::log_norm_cdf(eta(i, 0)) : detail::log_norm_cdf(-eta(i, 0));
        break;
      case ModelType::Logit:
        ll += data.y(i) == 1 ? detail::log_sigmoid(eta(i, 0)) : detail::log_sigmoid(-eta(i, 0));
        break;
      case ModelType::Binomial: {
        const int n = data.trials(i), k = data.y(i);
        ll += k * detail::log_sigmoid(eta(i, 0)) + (n - k) * detail::log_sigmoid(-eta(i, 0));
        if (include_binomial_constant)
          ll += std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        break;
      }
      case ModelType::Mnl: {
        double lse = 0.0;  // baseline utility
        for (int k = 0; k < blocks; ++k) lse = detail::log_add_exp(lse, eta(i, k));
        ll += (data.y(i) == 0 ? 0.0 : eta(i, data.y(i) - 1)) - lse;
        break;
      }
    }
  }
  return {ll, static_cast<int>(beta.size())};
}

}  // namespace pgchoice
