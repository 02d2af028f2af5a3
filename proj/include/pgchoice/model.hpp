#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgchoice/bayes_linear.hpp"
#include "pgchoice/diagnostics.hpp"
#include "pgchoice/error.hpp"
#include "pgchoice/samplers.hpp"
#include "pgchoice/types.hpp"

namespace pgchoice {

// User-level model input. Binary and binomial outcomes live in `y`; MNL
// outcomes are category labels in `labels`.
struct Dataset {
  Eigen::VectorXd y;
  std::vector<std::string> labels;
  Eigen::MatrixXd X;
  std::optional<Eigen::VectorXd> trials;
  std::vector<std::string> covariate_names;
  std::optional<std::string> baseline;

  Eigen::Index rows() const { return X.rows(); }
};

namespace detail {

inline bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

inline std::vector<std::pair<std::string, int>> label_counts(const std::vector<std::string>& labels) {
  std::map<std::string, int> m;
  for (const auto& l : labels) ++m[l];
  return {m.begin(), m.end()};
}

}  // namespace detail

// Every violation of the model's input contract; empty means ok.
inline std::vector<Violation> validate(const Dataset& data, ModelType type) {
  std::vector<Violation> out;
  auto add = [&](std::string cls, std::string msg) { out.push_back({std::move(cls), std::move(msg)}); };
  const Eigen::Index n = data.rows();
  if (n == 0) add("empty-data", "no observations");
  if (data.X.cols() == 0) add("dimension-mismatch", "design matrix has no columns");
  if (!data.covariate_names.empty() &&
      static_cast<Eigen::Index>(data.covariate_names.size()) != data.X.cols())
    add("dimension-mismatch", "covariate names do not match design columns");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < data.X.cols(); ++j)
      if (!std::isfinite(data.X(i, j))) {
        add("non-finite-covariate", "row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1));
        i = n;
        break;
      }

  if (type == ModelType::Mnl) {
    if (static_cast<Eigen::Index>(data.labels.size()) != n)
      add("dimension-mismatch", "outcome has " + std::to_string(data.labels.size()) +
                                    " entries, design has " + std::to_string(n) + " rows");
    const auto counts = detail::label_counts(data.labels);
    if (counts.size() < 3)
      add("insufficient-categories", std::to_string(counts.size()) +
                                         " observed categories; use type logit for two categories");
    if (data.baseline && std::none_of(counts.begin(), counts.end(),
                                      [&](const auto& c) { return c.first == *data.baseline; }))
      add("unknown-baseline", "baseline '" + *data.baseline + "' is not an observed category");
    return out;
  }

  if (data.y.size() != n)
    add("dimension-mismatch", "outcome has " + std::to_string(data.y.size()) + " entries, design has " +
                                  std::to_string(n) + " rows");
  if (type == ModelType::Probit || type == ModelType::Logit) {
    for (Eigen::Index i = 0; i < data.y.size(); ++i)
      if (data.y(i) != 0.0 && data.y(i) != 1.0) {
        add("non-binary-outcome", "row " + std::to_string(i + 1) + " has outcome " + std::to_string(data.y(i)));
        break;
      }
    return out;
  }

  if (!data.trials) {
    add("missing-trials", "binomial model needs trial counts");
    return out;
  }
  const auto& ni = *data.trials;
  if (ni.size() != n) add("dimension-mismatch", "trial counts length does not match design rows");
  for (Eigen::Index i = 0; i < ni.size(); ++i)
    if (!detail::is_integer(ni(i)) || ni(i) < 1) {
      add("invalid-trials", "row " + std::to_string(i + 1) + " has N = " + std::to_string(ni(i)));
      break;
    }
  for (Eigen::Index i = 0; i < std::min(data.y.size(), ni.size()); ++i)
    if (!detail::is_integer(data.y(i)) || data.y(i) < 0) {
      add("invalid-count", "row " + std::to_string(i + 1) + " has y = " + std::to_string(data.y(i)));
      break;
    }
  for (Eigen::Index i = 0; i < std::min(data.y.size(), ni.size()); ++i)
    if (data.y(i) > ni(i)) {
      add("count-exceeds-trials", "row " + std::to_string(i + 1) + " has y = " + std::to_string(data.y(i)) +
                                      " > N = " + std::to_string(ni(i)));
      break;
    }
  return out;
}

inline void validate_or_throw(const Dataset& data, ModelType type) {
  auto v = validate(data, type);
  if (!v.empty()) throw ValidationError(std::move(v));
}

// Most frequent label, ties to the lexicographically smallest.
inline std::string default_baseline(const std::vector<std::string>& labels) {
  const auto counts = detail::label_counts(labels);
  if (counts.empty()) throw InvalidParameter("no labels");
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

struct FitResult {
  ModelType type = ModelType::Logit;
  PosteriorDraws draws;
  Dataset data;
  ModelData model_data;
  PriorSpec prior;
  SamplerConfig config;
  std::string baseline;
  std::vector<std::string> categories;  // MNL: baseline first, then block order
  std::vector<std::string> coef_names;
  double runtime_seconds = 0.0;
};

// Sampler input for a validated dataset. For MNL the baseline maps to 0 and the
// remaining labels, sorted, to 1..m.
inline ModelData to_model_data(const Dataset& data, ModelType type, const std::string& baseline,
                               std::vector<std::string>* categories = nullptr) {
  ModelData md;
  md.X = data.X;
  const Eigen::Index n = data.rows();
  md.y.resize(n);
  if (type == ModelType::Mnl) {
    std::vector<std::string> cats{baseline};
    for (const auto& [label, count] : detail::label_counts(data.labels))
      if (label != baseline) cats.push_back(label);
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < cats.size(); ++k) index[cats[k]] = static_cast<int>(k);
    for (Eigen::Index i = 0; i < n; ++i) md.y(i) = index.at(data.labels[static_cast<std::size_t>(i)]);
    md.categories = static_cast<int>(cats.size());
    if (categories) *categories = std::move(cats);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) md.y(i) = static_cast<int>(data.y(i));
    if (type == ModelType::Binomial) md.trials = data.trials->cast<int>();
  }
  return md;
}

inline FitResult fit(const Dataset& data, ModelType type, PriorSpec prior = {},
                     const SamplerConfig& config = {}) {
  validate_or_throw(data, type);
  FitResult r;
  r.type = type;
  r.data = data;
  r.config = config;
  prior.coef_dim = data.X.cols();
  validate(prior);
  r.prior = prior;
  if (type == ModelType::Mnl) r.baseline = data.baseline ? *data.baseline : default_baseline(data.labels);
  r.model_data = to_model_data(data, type, r.baseline, &r.categories);

  r.coef_names = data.covariate_names;
  if (r.coef_names.empty())
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) r.coef_names.push_back("b" + std::to_string(j + 1));

  r.draws = run_chain(type, r.model_data, prior, config);
  r.draws.names.clear();
  const int blocks = r.draws.blocks;
  for (int k = 0; k < blocks; ++k)
    for (const auto& nm : r.coef_names)
      r.draws.names.push_back(type == ModelType::Mnl ? nm + "." + r.categories[static_cast<std::size_t>(k) + 1]
                                                     : nm);
  r.runtime_seconds = r.draws.runtime_seconds.value_or(0.0);
  return r;
}

inline SummaryOptions summary_options(const FitResult& f, std::pair<double, double> q = {0.025, 0.975}) {
  SummaryOptions o;
  o.q = q;
  o.names = f.coef_names;
  if (f.type == ModelType::Mnl) {
    o.categories.assign(f.categories.begin() + 1, f.categories.end());
    o.baseline = f.baseline;
  }
  return o;
}

inline SummaryTable summary(const FitResult& f, SummaryOptions opt) {
  if (f.type == ModelType::Mnl) {
    opt.categories.assign(f.categories.begin() + 1, f.categories.end());
    opt.baseline = f.baseline;
  }
  if (opt.names.empty()) opt.names = f.coef_names;
  return posterior_summary(f.draws, opt);
}

// Posterior means and q-quantiles per coefficient (per category for MNL).
inline std::vector<SummaryRow> coef(const FitResult& f, std::pair<double, double> q = {0.025, 0.975}) {
  return posterior_summary(f.draws, summary_options(f, q)).rows;
}

inline LogLik loglik(const FitResult& f) {
  return log_likelihood(f.type, f.draws.mean(), f.model_data);
}

inline DiagReport diag(const FitResult& f) { return diag_report(f.draws); }

struct Prediction {
  // rows x columns; binary / binomial: one column, P(y = 1) or the per-trial
  // success probability; MNL: one column per category in FitResult::categories order.
  Eigen::MatrixXd mean, lower, upper;
};

namespace detail {

inline Eigen::MatrixXd probabilities(ModelType type, const Eigen::MatrixXd& X, const Eigen::MatrixXd& beta) {
  const Eigen::MatrixXd eta = X * beta;
  if (type == ModelType::Mnl) {
    Eigen::MatrixXd p(X.rows(), beta.cols() + 1);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      double lse = 0.0;
      for (Eigen::Index k = 0; k < beta.cols(); ++k) lse = log_add_exp(lse, eta(i, k));
      p(i, 0) = std::exp(-lse);
      for (Eigen::Index k = 0; k < beta.cols(); ++k) p(i, k + 1) = std::exp(eta(i, k) - lse);
    }
    return p;
  }
  Eigen::MatrixXd p(X.rows(), 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    p(i, 0) = type == ModelType::Probit ? 0.5 * std::erfc(-eta(i, 0) / std::numbers::sqrt2)
                                        : std::exp(log_sigmoid(eta(i, 0)));
  return p;
}

}  // namespace detail

// Posterior mean and marginal q-quantiles of the model probabilities.
inline Prediction predict(const FitResult& f, const std::optional<Eigen::MatrixXd>& newdata = std::nullopt,
                          std::pair<double, double> q = {0.025, 0.975}) {
  check_quantiles(q);
  const Eigen::MatrixXd& X = newdata ? *newdata : f.data.X;
  if (X.cols() != f.draws.coef_dim)
    throw InvalidParameter("newdata has " + std::to_string(X.cols()) + " columns, model has " +
                           std::to_string(f.draws.coef_dim));
  const Eigen::Index S = f.draws.size();
  const Eigen::Index cols = f.type == ModelType::Mnl ? f.draws.blocks + 1 : 1;
  std::vector<Eigen::MatrixXd> per_draw;
  per_draw.reserve(static_cast<std::size_t>(S));
  for (Eigen::Index s = 0; s < S; ++s) per_draw.push_back(detail::probabilities(f.type, X, f.draws.draw(s)));

  Prediction p;
  p.mean = Eigen::MatrixXd::Zero(X.rows(), cols);
  p.lower.resize(X.rows(), cols);
  p.upper.resize(X.rows(), cols);
  std::vector<double> buf(static_cast<std::size_t>(S));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index s = 0; s < S; ++s) buf[static_cast<std::size_t>(s)] = per_draw[s](i, c);
      double sum = 0.0;
      for (double v : buf) sum += v;
      p.mean(i, c) = sum / static_cast<double>(S);
      p.lower(i, c) = quantile(buf, q.first);
      p.upper(i, c) = quantile(buf, q.second);
    }
  return p;
}

}  // namespace pgchoice
