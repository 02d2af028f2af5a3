#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "pgchoice/randvar.hpp"
#include "support.hpp"

using namespace pgchoice;

namespace {

constexpr int kDraws = 100000;

Eigen::VectorXd sample(int n, const std::function<double()>& f) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = f();
  return x;
}

double sample_var(const Eigen::VectorXd& x) {
  return (x.array() - x.mean()).square().sum() / static_cast<double>(x.size() - 1);
}

// PG moments from the series representation w = (1/2 pi^2) sum g_k / ((k-1/2)^2 + z^2/(4 pi^2)),
// g_k ~ Gamma(b, 1), summed term by term.
Moments pg_series_moments(double b, double z) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double m = 0.0, v = 0.0;
  for (int k = 1; k <= 2000000; ++k) {
    const double d = (k - 0.5) * (k - 0.5) + z * z / (4.0 * pi2);
    m += b / d;
    v += b / (d * d);
  }
  return {m / (2.0 * pi2), v / (4.0 * pi2 * pi2)};
}

}  // namespace

TEST(RngStream, SameSeedSameSequence) {
  RngStream a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a(), b());
  }
  RngStream c(7), d(7);
  for (int i = 0; i < 200; ++i) {
    ASSERT_EQ(draw_polya_gamma({2.0, 1.5}, c), draw_polya_gamma({2.0, 1.5}, d));
    ASSERT_EQ(draw_truncated_normal(0.3, 1.2, -0.5, 2.0, c), draw_truncated_normal(0.3, 1.2, -0.5, 2.0, d));
    ASSERT_EQ(draw_gen_logistic(GenLogisticType::TypeII, 3.0, 0.0, kInf, c),
              draw_gen_logistic(GenLogisticType::TypeII, 3.0, 0.0, kInf, d));
    ASSERT_EQ(c.normal(), d.normal());
  }
}

TEST(RngStream, SubstreamsDifferAndAreReproducible) {
  const RngStream base(99);
  RngStream s0 = base.substream(0), s1 = base.substream(1), s0b = base.substream(0);
  EXPECT_FALSE(s0 == s1);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(s0(), s0b());
  // no visible correlation between neighbouring streams
  RngStream u = base.substream(2), v = base.substream(3);
  const int n = 20000;
  double sxy = 0.0;
  for (int i = 0; i < n; ++i) sxy += (u.uniform() - 0.5) * (v.uniform() - 0.5);
  EXPECT_LT(std::abs(sxy / n) / (1.0 / 12.0 / std::sqrt(n)), 4.0);
}

TEST(PolyaGamma, MomentsClosedForm) {
  EXPECT_DOUBLE_EQ(pg_moments({2.0, 0.0}).mean, 0.5);
  EXPECT_DOUBLE_EQ(pg_moments({4.0, 0.0}).mean, 1.0);
  EXPECT_DOUBLE_EQ(pg_moments({1.0, 0.0}).variance, 1.0 / 24.0);
  // continuity of the small-z branch
  EXPECT_NEAR(pg_moments({1.0, 1e-9}).mean, 0.25, 1e-12);
  EXPECT_NEAR(pg_moments({1.0, 0.999e-3}).mean, pg_moments({1.0, 1.001e-3}).mean, 1e-9);
  EXPECT_NEAR(pg_moments({1.0, 0.999e-3}).variance, pg_moments({1.0, 1.001e-3}).variance, 1e-9);
}

TEST(PolyaGamma, MomentsMatchSeriesOracle) {
  for (double b : {1.0, 2.0, 4.0, 30.0})
    for (double z : {0.0, 0.5, 1.0, 2.0, 3.0, 10.0}) {
      const Moments got = pg_moments({b, z});
      const Moments want = pg_series_moments(b, z);
      EXPECT_NEAR(got.mean, want.mean, 1e-6 * want.mean) << "b=" << b << " z=" << z;
      EXPECT_NEAR(got.variance, want.variance, 1e-5 * want.variance) << "b=" << b << " z=" << z;
    }
  // frozen from the oracle above
  EXPECT_NEAR(pg_moments({1.0, 2.0}).mean, 0.190399, 1e-6);
}

TEST(PolyaGamma, SpecExamples) {
  RngStream rng(1);
  const auto pg20 = sample(kDraws, [&] { return draw_polya_gamma({2.0, 0.0}, rng); });
  EXPECT_NEAR(pg20.mean(), 0.5, 0.005);
  const auto pg12 = sample(kDraws, [&] { return draw_polya_gamma({1.0, 2.0}, rng); });
  EXPECT_NEAR(pg12.mean(), 0.1904, 0.003);
  const auto pg10 = sample(kDraws, [&] { return draw_polya_gamma({1.0, 0.0}, rng); });
  EXPECT_NEAR(sample_var(pg10), 1.0 / 24.0, 0.1 / 24.0);
  EXPECT_GT(pg10.minCoeff(), 0.0);
}

TEST(PolyaGamma, EmpiricalMomentsWithinFourSe) {
  RngStream rng(2);
  for (double b : {1.0, 2.0, 4.0})
    for (double z : {0.0, 1.0, 3.0}) {
      const Moments m = pg_moments({b, z});
      const auto x = sample(kDraws, [&] { return draw_polya_gamma({b, z}, rng); });
      EXPECT_LT(std::abs(x.mean() - m.mean), 4.0 * std::sqrt(m.variance / kDraws)) << "b=" << b << " z=" << z;
    }
}

TEST(PolyaGamma, LargeShapeUsesMomentMatchedNormal) {
  RngStream rng(3);
  const Moments m = pg_moments({500.0, 1.0});
  const auto x = sample(20000, [&] { return draw_polya_gamma({500.0, 1.0}, rng); });
  EXPECT_GT(x.minCoeff(), 0.0);
  EXPECT_LT(std::abs(x.mean() - m.mean), 4.0 * std::sqrt(m.variance / 20000));
  EXPECT_NEAR(sample_var(x), m.variance, 0.05 * m.variance);
}

TEST(PolyaGamma, RejectsBadShape) {
  RngStream rng(4);
  EXPECT_THROW(draw_polya_gamma({0.0, 1.0}, rng), InvalidParameter);
  EXPECT_THROW(draw_polya_gamma({-1.0, 1.0}, rng), InvalidParameter);
  EXPECT_THROW(draw_polya_gamma({1.5, 1.0}, rng), InvalidParameter);
  EXPECT_THROW(draw_polya_gamma({1.0, std::numeric_limits<double>::infinity()}, rng), InvalidParameter);
  EXPECT_THROW(pg_moments({0.0, 0.0}), InvalidParameter);
}

TEST(PolyaGamma, LogisticMixtureIdentity) {
  RngStream rng(5);
  const auto w = sample(kDraws, [&] { return draw_polya_gamma({2.0, 0.0}, rng); });
  for (double eps : {0.0, 1.0, 2.0}) {
    const Eigen::ArrayXd f = 0.25 * (-0.5 * eps * eps * w.array()).exp();
    const double est = f.mean();
    const double se = std::sqrt((f - est).square().sum() / (kDraws - 1) / kDraws);
    const double want = std::exp(eps) / ((1.0 + std::exp(eps)) * (1.0 + std::exp(eps)));
    EXPECT_LT(std::abs(est - want), 4.0 * se + 1e-12) << "eps=" << eps;
  }
}

TEST(Logistic, DensityGumbelAndLogisticMeans) {
  EXPECT_DOUBLE_EQ(logistic_pdf(0.0), 0.25);
  EXPECT_NEAR(logistic_cdf(0.0), 0.5, 1e-15);
  RngStream rng(6);
  const auto g = sample(kDraws, [&] { return draw_gumbel(rng); });
  EXPECT_NEAR(g.mean(), std::numbers::egamma, 0.02);
  const auto l = sample(kDraws, [&] { return draw_logistic(rng); });
  EXPECT_NEAR(l.mean(), 0.0, 0.02);
  // logistic variance pi^2 / 3
  EXPECT_NEAR(sample_var(l), std::numbers::pi * std::numbers::pi / 3.0, 0.05);
}

TEST(TruncatedNormal, SpecExamples) {
  RngStream rng(7);
  const auto half = sample(kDraws, [&] { return draw_truncated_normal(0.0, 1.0, 0.0, kInf, rng); });
  EXPECT_NEAR(half.mean(), std::sqrt(2.0 / std::numbers::pi), 0.01);
  EXPECT_GT(half.minCoeff(), 0.0);
  const auto mirror = sample(kDraws, [&] { return draw_truncated_normal(0.0, 1.0, -kInf, 0.0, rng); });
  EXPECT_NEAR(mirror.mean(), -std::sqrt(2.0 / std::numbers::pi), 0.01);
  EXPECT_LT(mirror.maxCoeff(), 0.0);
  const auto shifted = sample(kDraws, [&] { return draw_truncated_normal(5.0, 1.0, 0.0, kInf, rng); });
  const double phi5 = std::exp(-12.5) / std::sqrt(2.0 * std::numbers::pi);
  EXPECT_NEAR(shifted.mean(), 5.0 + phi5 / testsupport::norm_cdf(5.0), 0.01);
  EXPECT_GT(shifted.minCoeff(), 0.0);
}

TEST(TruncatedNormal, FarTailsStayInside) {
  RngStream rng(8);
  for (double mu : {-30.0, -10.0, 10.0, 30.0}) {
    for (int i = 0; i < 2000; ++i) {
      const double x = draw_truncated_normal(mu, 1.0, 0.0, kInf, rng);
      ASSERT_GT(x, 0.0);
      ASSERT_TRUE(std::isfinite(x));
      const double y = draw_truncated_normal(-mu, 1.0, -kInf, 0.0, rng);
      ASSERT_LT(y, 0.0);
    }
  }
  // mean of N(-30, 1) truncated to (0, inf) is about 1/30
  const auto t = sample(20000, [&] { return draw_truncated_normal(-30.0, 1.0, 0.0, kInf, rng); });
  EXPECT_NEAR(t.mean(), 1.0 / 30.0, 0.002);
}

TEST(TruncatedNormal, TwoSidedMatchesCdf) {
  RngStream rng(9);
  const double mu = 0.4, sigma = 2.0, lo = -1.0, hi = 3.5;
  const auto x = sample(kDraws, [&] { return draw_truncated_normal(mu, sigma, lo, hi, rng); });
  const double flo = testsupport::norm_cdf((lo - mu) / sigma), fhi = testsupport::norm_cdf((hi - mu) / sigma);
  const double d = testsupport::ks_statistic(
      x, [&](double v) { return (testsupport::norm_cdf((v - mu) / sigma) - flo) / (fhi - flo); });
  EXPECT_LT(d, testsupport::kKs01 / std::sqrt(static_cast<double>(kDraws)));
}

TEST(TruncatedNormal, RejectsEmptyInterval) {
  RngStream rng(10);
  EXPECT_THROW(draw_truncated_normal(0.0, 1.0, 1.0, 1.0, rng), InvalidParameter);
  EXPECT_THROW(draw_truncated_normal(0.0, 1.0, 2.0, 1.0, rng), InvalidParameter);
  EXPECT_THROW(draw_truncated_normal(0.0, 0.0, 0.0, 1.0, rng), InvalidParameter);
}

TEST(TruncatedLogistic, MeanMatchesQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  const double oracle =
      gauss_kronrod<double, 61>::integrate([](double x) { return x * logistic_pdf(x) / 0.5; }, 0.0, kInf);
  EXPECT_NEAR(oracle, 2.0 * std::numbers::ln2, 1e-9);
  RngStream rng(11);
  const auto x = sample(kDraws, [&] { return draw_truncated_logistic(0.0, 0.0, kInf, rng); });
  EXPECT_NEAR(x.mean(), 1.3863, 0.02);
  EXPECT_GT(x.minCoeff(), 0.0);
  const auto y = sample(kDraws, [&] { return draw_truncated_logistic(0.0, -kInf, 0.0, rng); });
  EXPECT_NEAR(y.mean(), -1.3863, 0.02);
}

TEST(TruncatedLogistic, StableForLargeLocation) {
  RngStream rng(12);
  for (double mu : {-30.0, 30.0, -60.0}) {
    for (int i = 0; i < 2000; ++i) {
      const double x = draw_truncated_logistic(mu, 0.0, kInf, rng);
      ASSERT_GT(x, 0.0);
      ASSERT_TRUE(std::isfinite(x));
      const double y = draw_truncated_logistic(mu, -kInf, 0.0, rng);
      ASSERT_LT(y, 0.0);
    }
  }
  // left-truncated far in the tail: excess over 0 is about Exp(1)
  const auto x = sample(20000, [&] { return draw_truncated_logistic(-30.0, 0.0, kInf, rng); });
  EXPECT_NEAR(x.mean(), 1.0, 0.03);
}

TEST(TruncatedLogistic, TwoSidedMatchesCdf) {
  RngStream rng(13);
  const double mu = 1.0, lo = -0.5, hi = 0.7;
  const auto x = sample(kDraws, [&] { return draw_truncated_logistic(mu, lo, hi, rng); });
  const double flo = testsupport::logistic(lo - mu), fhi = testsupport::logistic(hi - mu);
  const double d =
      testsupport::ks_statistic(x, [&](double v) { return (testsupport::logistic(v - mu) - flo) / (fhi - flo); });
  EXPECT_LT(d, testsupport::kKs01 / std::sqrt(static_cast<double>(kDraws)));
  EXPECT_GT(x.minCoeff(), lo);
  EXPECT_LT(x.maxCoeff(), hi);
}

TEST(GenLogistic, Medians) {
  EXPECT_NEAR(gen_logistic_median(GenLogisticType::TypeI, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(gen_logistic_median(GenLogisticType::TypeI, 2.0), std::log(std::sqrt(2.0) + 1.0), 1e-12);
  EXPECT_NEAR(gen_logistic_median(GenLogisticType::TypeI, 2.0), 0.8814, 1e-4);
  EXPECT_NEAR(gen_logistic_median(GenLogisticType::TypeII, 2.0), -0.8814, 1e-4);
  EXPECT_NEAR(gen_logistic_cdf(GenLogisticType::TypeI, 2.0, std::log(std::sqrt(2.0) + 1.0)), 0.5, 1e-12);
  EXPECT_NEAR(gen_logistic_cdf(GenLogisticType::TypeI, 1.0, 0.7), testsupport::logistic(0.7), 1e-14);
}

TEST(GenLogistic, ReflectionKs) {
  const RngStream base(14);
  std::uint64_t stream = 0;
  for (double nu : {1.0, 2.0, 5.5}) {
    RngStream rng = base.substream(stream++);
    const auto x = sample(kDraws, [&] { return -draw_gen_logistic(GenLogisticType::TypeII, nu, -kInf, kInf, rng); });
    const double d = testsupport::ks_statistic(x, [&](double v) { return std::pow(1.0 + std::exp(-v), -nu); });
    EXPECT_LT(d, testsupport::kKs01 / std::sqrt(static_cast<double>(kDraws))) << "nu=" << nu;
  }
}

TEST(GenLogistic, TruncatedDrawsMatchCdf) {
  RngStream rng(15);
  const double nu = 3.0, lo = -1.0, hi = 2.0;
  auto F = [&](double v) { return std::pow(1.0 + std::exp(-v), -nu); };
  const auto x = sample(kDraws, [&] { return draw_gen_logistic(GenLogisticType::TypeI, nu, lo, hi, rng); });
  const double d = testsupport::ks_statistic(x, [&](double v) { return (F(v) - F(lo)) / (F(hi) - F(lo)); });
  EXPECT_LT(d, testsupport::kKs01 / std::sqrt(static_cast<double>(kDraws)));
}

TEST(GenLogistic, Errors) {
  RngStream rng(16);
  EXPECT_THROW(draw_gen_logistic(GenLogisticType::TypeI, 0.5, -kInf, kInf, rng), InvalidParameter);
  EXPECT_THROW(draw_gen_logistic(GenLogisticType::TypeII, 2.0, 1.0, 0.0, rng), InvalidParameter);
}

TEST(Truncation, DrawsStrictlyInsideRandomIntervals) {
  RngStream rng(17);
  for (int i = 0; i < 20000; ++i) {
    const double a = 40.0 * rng.uniform() - 20.0;
    const double w = std::pow(10.0, 6.0 * rng.uniform() - 4.0);
    const double mu = 60.0 * rng.uniform() - 30.0;
    const double lo = rng.uniform() < 0.2 ? -kInf : a;
    const double hi = rng.uniform() < 0.2 ? kInf : a + w;
    const double x = draw_truncated_normal(mu, 1.0, lo, hi, rng);
    ASSERT_TRUE(x > lo && x < hi) << x << " not in (" << lo << ", " << hi << ") mu=" << mu;
    const double y = draw_truncated_logistic(mu, lo, hi, rng);
    ASSERT_TRUE(y > lo && y < hi) << y << " not in (" << lo << ", " << hi << ") mu=" << mu;
    const double g = draw_gen_logistic(i % 2 ? GenLogisticType::TypeI : GenLogisticType::TypeII,
                                       1.0 + 9.0 * rng.uniform(), lo - mu, hi - mu, rng);
    ASSERT_TRUE(g > lo - mu && g < hi - mu);
  }
}
