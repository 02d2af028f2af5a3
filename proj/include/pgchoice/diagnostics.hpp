#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgchoice/error.hpp"
#include "pgchoice/samplers.hpp"

namespace pgchoice {

inline constexpr Eigen::Index kMinEssLength = 50;

struct EssResult {
  double value = 0.0;
  int ar_order = 0;
  bool constant = false;
};

namespace detail {

struct ArFit {
  std::vector<double> coef;
  double innovation_variance = 0.0;
};

// Yule-Walker AR fit with the order picked by AIC over 0..max_order
// (Levinson-Durbin recursion on the biased autocovariances).
inline ArFit yule_walker_aic(const Eigen::VectorXd& x, int max_order) {
  const Eigen::Index n = x.size();
  const Eigen::ArrayXd c = x.array() - x.mean();
  std::vector<double> acov(static_cast<std::size_t>(max_order) + 1);
  for (int k = 0; k <= max_order; ++k)
    acov[k] = (c.head(n - k) * c.tail(n - k)).sum() / static_cast<double>(n);

  std::vector<double> phi, best_phi;
  double v = acov[0];
  double best_aic = static_cast<double>(n) * std::log(v);
  double best_v = v;
  for (int p = 1; p <= max_order; ++p) {
    double num = acov[p];
    for (int j = 0; j < p - 1; ++j) num -= phi[j] * acov[p - 1 - j];
    const double k = num / v;
    std::vector<double> next(static_cast<std::size_t>(p));
    for (int j = 0; j < p - 1; ++j) next[j] = phi[j] - k * phi[p - 2 - j];
    next[p - 1] = k;
    phi = std::move(next);
    v *= 1.0 - k * k;
    if (!(v > 0.0)) break;
    const double aic = static_cast<double>(n) * std::log(v) + 2.0 * p;
    if (aic < best_aic) {
      best_aic = aic;
      best_phi = phi;
      best_v = v;
    }
  }
  return {best_phi, best_v};
}

inline double sample_variance(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  return (x.array() - x.mean()).square().sum() / static_cast<double>(n - 1);
}

}  // namespace detail

// Effective sample size n * var(x) / S(0), S(0) the spectral density at zero
// of an AR(p) fit, p <= min(n - 1, 10 log10 n) chosen by AIC. Capped at 1.2 n.
// A constant chain has ESS = n and is flagged.
inline EssResult ess_detail(const Eigen::VectorXd& chain) {
  const Eigen::Index n = chain.size();
  if (n < kMinEssLength)
    throw InvalidParameter("ESS needs a chain of length >= " + std::to_string(kMinEssLength) + ", got " +
                           std::to_string(n));
  if (!chain.allFinite()) throw InvalidParameter("ESS chain has non-finite values");
  const double nd = static_cast<double>(n);
  if (chain.minCoeff() == chain.maxCoeff()) return {nd, 0, true};
  const double var = detail::sample_variance(chain);
  if (!(var > 0.0)) return {nd, 0, true};

  const int max_order =
      static_cast<int>(std::min<double>(nd - 1.0, std::floor(10.0 * std::log10(nd))));
  const auto ar = detail::yule_walker_aic(chain, max_order);
  const int p = static_cast<int>(ar.coef.size());
  double sum = 0.0;
  for (double a : ar.coef) sum += a;
  const double innovation = ar.innovation_variance * nd / (nd - (p + 1.0));
  const double spec0 = innovation / ((1.0 - sum) * (1.0 - sum));
  double e = nd * var / spec0;
  e = std::min(e, 1.2 * nd);
  return {e, p, false};
}

inline double ess(const Eigen::VectorXd& chain) { return ess_detail(chain).value; }

struct MeasureSummary {
  double min = 0.0, median = 0.0, max = 0.0;
};

struct DiagReport {
  std::vector<std::string> names;
  std::vector<double> ess, ie;
  std::optional<std::vector<double>> esr;
  std::vector<bool> constant;
  MeasureSummary ess_summary, ie_summary;
  std::optional<MeasureSummary> esr_summary;
  std::optional<double> runtime_seconds;
  Eigen::Index draws = 0;
};

namespace detail {

inline MeasureSummary order_summary(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return {v.front(), med, v.back()};
}

}  // namespace detail

// Per-coefficient ESS, IE = draws / ESS and ESR = ESS / runtime. Without a
// recorded runtime the ESR fields are absent. Chains shorter than
// kMinEssLength give NaN measures.
inline DiagReport diag_report(const PosteriorDraws& draws) {
  if (draws.values.size() == 0) throw InvalidParameter("no draws to diagnose");
  DiagReport rep;
  rep.draws = draws.size();
  rep.runtime_seconds = draws.runtime_seconds;
  const bool timed = draws.runtime_seconds && *draws.runtime_seconds > 0.0;
  if (timed) rep.esr.emplace();
  const bool estimable = rep.draws >= kMinEssLength;
  for (Eigen::Index j = 0; j < draws.values.cols(); ++j) {
    const auto e = estimable ? ess_detail(draws.values.col(j)) : EssResult{std::nan(""), 0, false};
    rep.names.push_back(j < static_cast<Eigen::Index>(draws.names.size())
                            ? draws.names[static_cast<std::size_t>(j)]
                            : "b" + std::to_string(j + 1));
    rep.ess.push_back(e.value);
    rep.ie.push_back(static_cast<double>(rep.draws) / e.value);
    rep.constant.push_back(e.constant);
    if (timed) rep.esr->push_back(e.value / *draws.runtime_seconds);
  }
  rep.ess_summary = detail::order_summary(rep.ess);
  rep.ie_summary = detail::order_summary(rep.ie);
  if (timed) rep.esr_summary = detail::order_summary(*rep.esr);
  return rep;
}

// ---------------------------------------------------------------------------
// Posterior summaries

struct SummaryRow {
  std::string name;
  std::string category;  // empty outside MNL
  double mean = 0.0, sd = 0.0, lower = 0.0, upper = 0.0;
  bool excludes_zero = false;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  std::pair<double, double> q{0.025, 0.975};
  int digits = 2;
  std::string baseline;  // MNL only
  ModelType type = ModelType::Logit;
};

inline void check_quantiles(std::pair<double, double> q) {
  if (!(q.first > 0.0 && q.first < q.second && q.second < 1.0))
    throw InvalidParameter("quantile pair must satisfy 0 < q_lo < q_hi < 1");
}

// Type-7 sample quantile (linear interpolation of order statistics).
inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw InvalidParameter("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double quantile(const Eigen::VectorXd& x, double p) {
  return quantile(std::vector<double>(x.data(), x.data() + x.size()), p);
}

struct SummaryOptions {
  std::pair<double, double> q{0.025, 0.975};
  std::vector<std::string> names;        // replaces coefficient names (length d)
  int digits = 2;
  std::vector<std::string> include;      // subset of names, empty = all
  std::vector<std::string> categories;   // MNL non-baseline labels, block order
  std::string baseline;
};

// Mean, sd, q-quantiles and the zero-exclusion flag per coefficient. For MNL
// the rows run category by category in block order.
inline SummaryTable posterior_summary(const PosteriorDraws& draws, const SummaryOptions& opt = {}) {
  check_quantiles(opt.q);
  if (opt.digits < 0) throw InvalidParameter("digits must be >= 0");
  const Eigen::Index d = draws.coef_dim;
  if (!opt.names.empty() && static_cast<Eigen::Index>(opt.names.size()) != d)
    throw InvalidParameter("names has " + std::to_string(opt.names.size()) + " entries, expected " +
                           std::to_string(d));
  std::vector<std::string> base(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (!opt.names.empty()) base[uj] = opt.names[uj];
    else if (draws.blocks == 1 && uj < draws.names.size()) base[uj] = draws.names[uj];
    else base[uj] = "b" + std::to_string(j + 1);
  }
  for (const auto& inc : opt.include)
    if (std::find(base.begin(), base.end(), inc) == base.end())
      throw InvalidParameter("include name '" + inc + "' not found");

  SummaryTable t;
  t.q = opt.q;
  t.digits = opt.digits;
  t.baseline = opt.baseline;
  t.type = draws.type;
  const double n = static_cast<double>(draws.size());
  for (int k = 0; k < draws.blocks; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& name = base[static_cast<std::size_t>(j)];
      if (!opt.include.empty() &&
          std::find(opt.include.begin(), opt.include.end(), name) == opt.include.end())
        continue;
      const Eigen::VectorXd col = draws.values.col(k * d + j);
      SummaryRow r;
      r.name = name;
      if (draws.type == ModelType::Mnl)
        r.category = static_cast<std::size_t>(k) < opt.categories.size()
                         ? opt.categories[static_cast<std::size_t>(k)]
                         : std::to_string(k + 1);
      r.mean = col.mean();
      r.sd = n > 1 ? std::sqrt((col.array() - r.mean).square().sum() / (n - 1.0)) : 0.0;
      std::vector<double> v(col.data(), col.data() + col.size());
      r.lower = quantile(v, opt.q.first);
      r.upper = quantile(std::move(v), opt.q.second);
      r.excludes_zero = r.lower > 0.0 || r.upper < 0.0;
      t.rows.push_back(std::move(r));
    }
  }
  return t;
}

}  // namespace pgchoice
