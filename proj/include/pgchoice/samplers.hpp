#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pgchoice/bayes_linear.hpp"
#include "pgchoice/error.hpp"
#include "pgchoice/randvar.hpp"
#include "pgchoice/rng.hpp"
#include "pgchoice/types.hpp"

namespace pgchoice {

// Working prior of the marginal-data-augmentation move:
//   gamma ~ N(0, gamma_variance)            (location, intercept direction)
//   delta ~ InvGamma(delta_shape, delta_rate) (scale)
// gamma_variance unset means "use the prior's G0".
struct WorkingPrior {
  std::optional<double> gamma_variance;
  double delta_shape = 2.5;
  double delta_rate = 1.5;
};

struct WorkingParams {
  double gamma = 0.0;
  double delta = 1.0;
};

struct BoostOptions {
  bool enabled = true;
  WorkingPrior prior;
};

// A block of binary-type utilities
//   t_j = x_j b + shift_j + eps_j,   sign(t_j) = sign_j,
// where eps_j given omega_j has kernel exp(kappa_j eps - omega_j eps^2 / 2).
// Probit is the special case omega = 1, kappa = 0.
struct UtilityBlock {
  const Eigen::MatrixXd* X = nullptr;
  Eigen::VectorXd t;
  Eigen::VectorXd shift;
  Eigen::VectorXd kappa;
  Eigen::VectorXd omega;
  Eigen::VectorXi sign;
  Eigen::Index intercept = 0;

  Eigen::Index size() const { return t.size(); }

  // Coefficient-regression response and linear offsets.
  Eigen::VectorXd response() const { return t - shift; }
  Eigen::VectorXd offsets() const { return -kappa; }
};

namespace detail {

inline bool unit_column(const Eigen::MatrixXd& X, Eigen::Index col) {
  return (X.col(col).array() == 1.0).all();
}

// Independence Metropolis-Hastings on s > 0 for the log-concave density
//   f(s) = (2a - 1) log s - b s^2 + c s,
// proposing from the Laplace approximation at the mode.
inline double mh_scale_step(double s, double a, double b, double c, RngStream& rng) {
  const double k = 2.0 * a - 1.0;
  auto logf = [&](double x) { return k * std::log(x) - b * x * x + c * x; };
  const double mode = (c + std::sqrt(c * c + 8.0 * b * k)) / (4.0 * b);
  const double sd = 1.0 / std::sqrt(k / (mode * mode) + 2.0 * b);
  auto logq = [&](double x) { return -0.5 * (x - mode) * (x - mode) / (sd * sd); };
  for (int it = 0; it < 3; ++it) {
    const double prop = mode + sd * rng.normal();
    if (prop <= 0.0) continue;
    const double log_acc = logf(prop) - logf(s) + logq(s) - logq(prop);
    if (std::log(rng.uniform()) < log_acc) s = prop;
  }
  return s;
}

}  // namespace detail

// Marginal data augmentation move on one utility block.
//
// Draws (gamma0, delta0) from the working prior, maps t to
// z = sqrt(delta0) t + gamma0, redraws gamma | z (truncated normal; the sign
// constraints bound it) and delta | gamma, z with the coefficients integrated
// out, and maps back: t <- (z - gamma) / sqrt(delta). The weights omega are held
// fixed. The coefficient draw that follows uses the moved utilities, so the
// identified posterior is unchanged.
//
// The location component needs a unit intercept column; without one only the
// scale is expanded. `forced` pins (gamma0, delta0) = (gamma, delta) = forced
// and skips all draws.
inline WorkingParams boost_move(UtilityBlock& block, const WeightedPosterior& post,
                                const PriorSpec& prior, const WorkingPrior& working, RngStream& rng,
                                std::optional<WorkingParams> forced = std::nullopt) {
  if (forced) {
    if (!(forced->delta > 0.0)) throw NumericalError("internal", "working scale delta must be > 0");
    return *forced;
  }
  const Eigen::Index n = block.size();
  if (n == 0) return {};
  const double gamma_var = working.gamma_variance.value_or(prior.g0);
  const bool location = gamma_var > 0.0 && detail::unit_column(*block.X, block.intercept);

  const double gamma0 = location ? std::sqrt(gamma_var) * rng.normal() : 0.0;
  const double delta0 = working.delta_rate / rng.gamma(working.delta_shape);
  const double sd0 = std::sqrt(delta0);

  const Eigen::VectorXd c = block.shift + block.kappa.cwiseQuotient(block.omega);
  const bool tilted = (c.array() != 0.0).any();

  Eigen::MatrixXd V(n, 3);
  V.col(0).setOnes();
  V.col(1) = block.t;
  V.col(2) = c;
  const Eigen::Matrix3d g = post.marginal_gram(V);

  const Eigen::VectorXd z = sd0 * block.t.array() + gamma0;

  double gamma = 0.0;
  if (location) {
    double lo = -kInf, hi = kInf;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (block.sign(j) > 0) hi = std::min(hi, z(j));
      else lo = std::max(lo, z(j));
    }
    const double b = sd0 * (g(0, 1) - g(0, 2)) + gamma0 * g(0, 0);
    const double prec = 1.0 / gamma_var + g(0, 0) / delta0;
    gamma = draw_truncated_normal(b / delta0 / prec, 1.0 / std::sqrt(prec), lo, hi, rng);
  }

  // r = z - gamma = sd0 * t + (gamma0 - gamma) * 1
  const double dshift = gamma0 - gamma;
  const double q = sd0 * sd0 * g(1, 1) + 2.0 * sd0 * dshift * g(0, 1) + dshift * dshift * g(0, 0);
  const double shape = working.delta_shape + 0.5 * static_cast<double>(n);
  const double rate = working.delta_rate + 0.5 * std::max(q, 0.0);
  double delta;
  if (!tilted) {
    delta = rate / rng.gamma(shape);
  } else {
    const double cross = sd0 * g(1, 2) + dshift * g(0, 2);
    const double s = detail::mh_scale_step(1.0 / sd0, shape, rate, cross, rng);
    delta = 1.0 / (s * s);
  }
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw NumericalError("internal", "working scale draw delta = " + std::to_string(delta));

  block.t = (z.array() - gamma) / std::sqrt(delta);
  return {gamma, delta};
}

// ---------------------------------------------------------------------------
// Latent state and the four sweeps

struct LatentState {
  Eigen::MatrixXd beta;             // d x K
  Eigen::VectorXd z;                // binary utilities
  Eigen::MatrixXd u_k, u_0, u_a;    // MNL utilities, N x (categories - 1)
  Eigen::VectorXd w, v;             // binomial utilities, NaN where absent
  std::vector<Eigen::VectorXd> omega;
  std::vector<WorkingParams> working;
};

inline LatentState initial_state(ModelType type, const ModelData& data,
                                 const std::optional<Eigen::MatrixXd>& beta_start = std::nullopt) {
  const int blocks = coefficient_blocks(type, data);
  LatentState s;
  if (beta_start) {
    if (beta_start->rows() != data.cols() || beta_start->cols() != blocks)
      throw InvalidParameter("beta_start is " + std::to_string(beta_start->rows()) + "x" +
                             std::to_string(beta_start->cols()) + ", expected " +
                             std::to_string(data.cols()) + "x" + std::to_string(blocks));
    if (!beta_start->allFinite()) throw InvalidParameter("beta_start has non-finite entries");
    s.beta = *beta_start;
  } else {
    s.beta = Eigen::MatrixXd::Zero(data.cols(), blocks);
  }
  s.omega.resize(blocks);
  s.working.resize(blocks);
  return s;
}

namespace detail {

inline void finish_block(UtilityBlock& block, Eigen::Ref<Eigen::VectorXd> beta, const PriorSpec& prior,
                         const BoostOptions& boost, RngStream& rng, WorkingParams& working_out) {
  const WeightedPosterior post(*block.X, block.omega, prior);
  if (boost.enabled) working_out = boost_move(block, post, prior, boost.prior, rng);
  beta = post.draw(block.response(), block.offsets(), rng);
}

inline void check_binary(const ModelData& data) {
  if (data.y.size() != data.rows()) throw InvalidParameter("outcome length mismatch");
}

}  // namespace detail

inline void probit_step(LatentState& s, const ModelData& data, const PriorSpec& prior,
                        const BoostOptions& boost, RngStream& rng) {
  detail::check_binary(data);
  const Eigen::Index n = data.rows();
  const Eigen::VectorXd eta = data.X * s.beta.col(0);
  UtilityBlock b;
  b.X = &data.X;
  b.intercept = prior.intercept;
  b.t.resize(n);
  b.sign.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool one = data.y(i) == 1;
    b.t(i) = one ? draw_truncated_normal(eta(i), 1.0, 0.0, kInf, rng)
                 : draw_truncated_normal(eta(i), 1.0, -kInf, 0.0, rng);
    b.sign(i) = one ? 1 : -1;
  }
  b.shift = Eigen::VectorXd::Zero(n);
  b.kappa = Eigen::VectorXd::Zero(n);
  b.omega = Eigen::VectorXd::Ones(n);
  detail::finish_block(b, s.beta.col(0), prior, boost, rng, s.working[0]);
  s.z = std::move(b.t);
  s.omega[0] = std::move(b.omega);
}

inline void logit_step(LatentState& s, const ModelData& data, const PriorSpec& prior,
                       const BoostOptions& boost, RngStream& rng) {
  detail::check_binary(data);
  const Eigen::Index n = data.rows();
  const Eigen::VectorXd eta = data.X * s.beta.col(0);
  UtilityBlock b;
  b.X = &data.X;
  b.intercept = prior.intercept;
  b.t.resize(n);
  b.sign.resize(n);
  b.omega.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool one = data.y(i) == 1;
    b.t(i) = one ? draw_truncated_logistic(eta(i), 0.0, kInf, rng)
                 : draw_truncated_logistic(eta(i), -kInf, 0.0, rng);
    b.sign(i) = one ? 1 : -1;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    b.omega(i) = draw_polya_gamma({2.0, b.t(i) - eta(i)}, rng);
  b.shift = Eigen::VectorXd::Zero(n);
  b.kappa = Eigen::VectorXd::Zero(n);
  detail::finish_block(b, s.beta.col(0), prior, boost, rng, s.working[0]);
  s.z = std::move(b.t);
  s.omega[0] = std::move(b.omega);
}

namespace detail {

// Utilities of three alternatives with log-rates (log_k, 0, log_a) given the
// winner, via exponential arrival times T = exp(-u): the winner arrives at
// T* ~ Exp(sum of rates) and each loser l at T* + Exp(rate_l).
struct RaceDraw {
  double u_k, u_0, u_a;
};

inline RaceDraw exponential_race(double log_k, double log_a, int winner, RngStream& rng) {
  // winner: 0 = category k, 1 = baseline, 2 = aggregate
  const double log_rates[3] = {log_k, 0.0, log_a};
  double lse = -kInf;
  for (double r : log_rates) lse = log_add_exp(lse, r);
  const double log_first = std::log(rng.exponential()) - lse;
  double u[3];
  for (int a = 0; a < 3; ++a) {
    if (a == winner) {
      u[a] = -log_first;
    } else if (log_rates[a] == -kInf) {
      u[a] = -kInf;
    } else {
      u[a] = -log_add_exp(log_first, std::log(rng.exponential()) - log_rates[a]);
    }
  }
  return {u[0], u[1], u[2]};
}

}  // namespace detail

// Category-wise update of the MNL coefficients. For category k the other
// non-baseline categories are aggregated into a = {l != 0, k} with rate
// lambda_a = sum exp(x beta_l); (u_k, u_0, u_a) are drawn given the observed
// winner and the difference t = u_k - max(u_0, u_a) is logistic around
// x beta_k - log(1 + lambda_a).
inline void mnl_step(LatentState& s, const ModelData& data, const PriorSpec& prior,
                     const BoostOptions& boost, RngStream& rng) {
  const Eigen::Index n = data.rows();
  const int m = data.categories - 1;
  if (m < 1) throw InvalidParameter("MNL needs at least two categories");
  if (s.u_k.rows() != n || s.u_k.cols() != m) {
    s.u_k.resize(n, m);
    s.u_0.resize(n, m);
    s.u_a.resize(n, m);
  }
  for (int k = 1; k <= m; ++k) {
    const Eigen::MatrixXd eta = data.X * s.beta;  // n x m, column l-1 for category l
    UtilityBlock b;
    b.X = &data.X;
    b.intercept = prior.intercept;
    b.t.resize(n);
    b.shift.resize(n);
    b.sign.resize(n);
    b.omega.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double log_a = -kInf;
      for (int l = 1; l <= m; ++l)
        if (l != k) log_a = detail::log_add_exp(log_a, eta(i, l - 1));
      const int yi = data.y(i);
      const int winner = yi == k ? 0 : (yi == 0 ? 1 : 2);
      const auto r = detail::exponential_race(eta(i, k - 1), log_a, winner, rng);
      s.u_k(i, k - 1) = r.u_k;
      s.u_0(i, k - 1) = r.u_0;
      s.u_a(i, k - 1) = r.u_a;
      b.t(i) = r.u_k - std::max(r.u_0, r.u_a);
      b.shift(i) = -detail::softplus(log_a);
      b.sign(i) = yi == k ? 1 : -1;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      b.omega(i) = draw_polya_gamma({2.0, b.t(i) - b.shift(i) - eta(i, k - 1)}, rng);
    b.kappa = Eigen::VectorXd::Zero(n);
    detail::finish_block(b, s.beta.col(k - 1), prior, boost, rng, s.working[k - 1]);
    s.omega[k - 1] = std::move(b.omega);
  }
}

// Stacked design of the binomial utilities: one w-row for every y_i > 0 and one
// v-row for every y_i < N_i.
struct BinomialLayout {
  Eigen::MatrixXd X;
  Eigen::VectorXi source;   // originating observation
  Eigen::VectorXi upper;    // 1 for w (GL-II(y_i), w > 0), 0 for v (GL-I(N_i - y_i), v < 0)
  Eigen::VectorXd nu;

  explicit BinomialLayout(const ModelData& data) {
    if (data.trials.size() != data.rows()) throw InvalidParameter("binomial model needs trial counts");
    std::vector<std::pair<int, bool>> rows;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const int y = data.y(i), ni = data.trials(i);
      if (ni < 1 || y < 0 || y > ni)
        throw InvalidParameter("binomial observation " + std::to_string(i) + " has y = " +
                               std::to_string(y) + ", N = " + std::to_string(ni));
      if (y > 0) rows.emplace_back(static_cast<int>(i), true);
      if (y < ni) rows.emplace_back(static_cast<int>(i), false);
    }
    const auto len = static_cast<Eigen::Index>(rows.size());
    X.resize(len, data.cols());
    source.resize(len);
    upper.resize(len);
    nu.resize(len);
    for (Eigen::Index j = 0; j < len; ++j) {
      const auto [i, w] = rows[static_cast<std::size_t>(j)];
      X.row(j) = data.X.row(i);
      source(j) = i;
      upper(j) = w ? 1 : 0;
      nu(j) = w ? data.y(i) : data.trials(i) - data.y(i);
    }
  }
};

// GL error e = exp(a eps) / (1 + exp(eps))^b mixes as omega ~ PG(b, eps) with
// tilt kappa = a - b/2:  GL-I(nu): (a, b) = (nu, nu + 1);  GL-II(nu): (1, nu + 1).
inline void binomial_step(LatentState& s, const ModelData& data, const PriorSpec& prior,
                          const BoostOptions& boost, RngStream& rng,
                          const BinomialLayout* cached = nullptr) {
  std::optional<BinomialLayout> local;
  if (!cached) cached = &local.emplace(data);
  const BinomialLayout& lay = *cached;
  const Eigen::Index len = lay.X.rows();
  const Eigen::VectorXd eta = lay.X * s.beta.col(0);
  UtilityBlock b;
  b.X = &lay.X;
  b.intercept = prior.intercept;
  b.t.resize(len);
  b.kappa.resize(len);
  b.omega.resize(len);
  b.sign.resize(len);
  for (Eigen::Index j = 0; j < len; ++j) {
    const double nu = lay.nu(j);
    if (lay.upper(j)) {
      b.t(j) = eta(j) + draw_gen_logistic(GenLogisticType::TypeII, nu, -eta(j), kInf, rng);
      b.t(j) = std::max(b.t(j), std::numeric_limits<double>::denorm_min());
      b.kappa(j) = 0.5 * (1.0 - nu);
      b.sign(j) = 1;
    } else {
      b.t(j) = eta(j) + draw_gen_logistic(GenLogisticType::TypeI, nu, -kInf, -eta(j), rng);
      b.t(j) = std::min(b.t(j), -std::numeric_limits<double>::denorm_min());
      b.kappa(j) = 0.5 * (nu - 1.0);
      b.sign(j) = -1;
    }
  }
  for (Eigen::Index j = 0; j < len; ++j)
    b.omega(j) = draw_polya_gamma({lay.nu(j) + 1.0, b.t(j) - eta(j)}, rng);
  b.shift = Eigen::VectorXd::Zero(len);
  detail::finish_block(b, s.beta.col(0), prior, boost, rng, s.working[0]);

  s.w = Eigen::VectorXd::Constant(data.rows(), std::numeric_limits<double>::quiet_NaN());
  s.v = s.w;
  for (Eigen::Index j = 0; j < len; ++j) (lay.upper(j) ? s.w : s.v)(lay.source(j)) = b.t(j);
  s.omega[0] = std::move(b.omega);
}

// Dispatch one full sweep.
inline void gibbs_sweep(ModelType type, LatentState& s, const ModelData& data, const PriorSpec& prior,
                        const BoostOptions& boost, RngStream& rng,
                        const BinomialLayout* layout = nullptr) {
  switch (type) {
    case ModelType::Probit: probit_step(s, data, prior, boost, rng); break;
    case ModelType::Logit: logit_step(s, data, prior, boost, rng); break;
    case ModelType::Mnl: mnl_step(s, data, prior, boost, rng); break;
    case ModelType::Binomial: binomial_step(s, data, prior, boost, rng, layout); break;
  }
}

// Empty string when the sign / choice constraints of the latest sweep hold,
// otherwise a description of the first violation.
inline std::string latent_violation(ModelType type, const ModelData& data, const LatentState& s) {
  const Eigen::Index n = data.rows();
  for (const auto& om : s.omega)
    if (om.size() > 0 && !(om.minCoeff() > 0.0)) return "non-positive mixing weight";
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string at = " at observation " + std::to_string(i);
    switch (type) {
      case ModelType::Probit:
      case ModelType::Logit:
        if ((s.z(i) > 0.0) != (data.y(i) == 1)) return "utility sign disagrees with outcome" + at;
        break;
      case ModelType::Mnl:
        for (Eigen::Index k = 1; k < data.categories; ++k) {
          const double uk = s.u_k(i, k - 1), u0 = s.u_0(i, k - 1), ua = s.u_a(i, k - 1);
          const int y = data.y(i);
          const double chosen = y == k ? uk : (y == 0 ? u0 : ua);
          if (chosen < std::max({uk, u0, ua})) return "observed alternative is not the maximum" + at;
        }
        break;
      case ModelType::Binomial:
        if (data.y(i) > 0 && !(s.w(i) > 0.0)) return "w not positive" + at;
        if (data.y(i) < data.trials(i) && !(s.v(i) < 0.0)) return "v not negative" + at;
        break;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Chains

struct SamplerConfig {
  int draws = 1000;
  int burnin = 1000;
  bool boost = true;
  std::optional<Eigen::MatrixXd> beta_start;
  std::uint64_t seed = 42;
  bool verbose = false;
  WorkingPrior working;
  bool check_invariants = false;
};

// Saved draws, one row per iteration. Columns run block-major: all d
// coefficients of block 0, then block 1, ...
struct PosteriorDraws {
  ModelType type = ModelType::Logit;
  Eigen::Index coef_dim = 0;
  int blocks = 1;
  Eigen::MatrixXd values;
  std::vector<std::string> names;
  int burnin = 0;
  std::uint64_t seed = 0;
  std::optional<double> runtime_seconds;

  Eigen::Index size() const { return values.rows(); }

  Eigen::MatrixXd draw(Eigen::Index s) const {
    Eigen::MatrixXd b(coef_dim, blocks);
    for (int k = 0; k < blocks; ++k) b.col(k) = values.row(s).segment(k * coef_dim, coef_dim).transpose();
    return b;
  }

  Eigen::MatrixXd mean() const {
    const Eigen::RowVectorXd m = values.colwise().mean();
    Eigen::MatrixXd b(coef_dim, blocks);
    for (int k = 0; k < blocks; ++k) b.col(k) = m.segment(k * coef_dim, coef_dim).transpose();
    return b;
  }
};

inline void validate(const SamplerConfig& c) {
  if (c.draws < 1) throw InvalidParameter("draws must be >= 1");
  if (c.burnin < 0) throw InvalidParameter("burnin must be >= 0");
  if (!(c.working.delta_shape > 0.0) || !(c.working.delta_rate > 0.0))
    throw InvalidParameter("working prior shape and rate must be positive");
}

inline PosteriorDraws run_chain(ModelType type, const ModelData& data, const PriorSpec& prior,
                                const SamplerConfig& config) {
  validate(config);
  validate(prior);
  if (prior.coef_dim != data.cols())
    throw InvalidParameter("prior dimension does not match design columns");
  const int blocks = coefficient_blocks(type, data);
  RngStream rng(config.seed);
  LatentState state = initial_state(type, data, config.beta_start);
  const BoostOptions boost{config.boost, config.working};
  std::optional<BinomialLayout> layout;
  if (type == ModelType::Binomial) layout.emplace(data);

  PosteriorDraws out;
  out.type = type;
  out.coef_dim = data.cols();
  out.blocks = blocks;
  out.values.resize(config.draws, data.cols() * blocks);
  out.burnin = config.burnin;
  out.seed = config.seed;
  for (int k = 0; k < blocks; ++k)
    for (Eigen::Index j = 0; j < data.cols(); ++j)
      out.names.push_back(blocks > 1 ? "b" + std::to_string(j + 1) + "." + std::to_string(k + 1)
                                     : "b" + std::to_string(j + 1));

  const int total = config.burnin + config.draws;
  if (config.verbose) std::cerr << "Simulating from posterior distribution ...\n";
  const auto start = std::chrono::steady_clock::now();
  int next_mark = 1;
  for (int it = 0; it < total; ++it) {
    gibbs_sweep(type, state, data, prior, boost, rng, layout ? &*layout : nullptr);
    if (it >= config.burnin) {
      const int s = it - config.burnin;
      for (int k = 0; k < blocks; ++k)
        out.values.row(s).segment(k * data.cols(), data.cols()) = state.beta.col(k).transpose();
      if (config.check_invariants) {
        const std::string bad = latent_violation(type, data, state);
        if (!bad.empty()) throw NumericalError("internal", "latent invariant broken: " + bad);
      }
    }
    if (config.verbose && (it + 1) * 10 >= next_mark * total) {
      std::cerr << "  " << next_mark * 10 << "%\n";
      ++next_mark;
    }
  }
  out.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// One full sweep from beta_start; the building block for embedding these
// updates inside a larger Gibbs sampler.
inline Eigen::MatrixXd single_draw(ModelType type, const ModelData& data, const PriorSpec& prior,
                                   const Eigen::MatrixXd& beta_start, RngStream& rng,
                                   bool boost = true) {
  validate(prior);
  LatentState state = initial_state(type, data, beta_start);
  gibbs_sweep(type, state, data, prior, BoostOptions{boost, {}}, rng);
  return state.beta;
}

}  // namespace pgchoice
