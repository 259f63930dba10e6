#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sdpi/io.hpp"
#include "sdpi/ribbon.hpp"
#include "sdpi/spectral.hpp"

namespace sdpi {
namespace {

// sup over g = (1, t) of ||E[g|X]||_p / ||g||_q - 1 for |Y| = 2, by brute force over log t.
double two_point_gap_oracle(const JointDistribution& j, double p, double q) {
  const auto t = oracle::to_table(j.pxy());
  const auto px = oracle::row_sums(t);
  const auto py = oracle::col_sums(t);
  double best = 0.0;
  for (int k = -40000; k <= 40000; ++k) {
    const double g1 = std::exp(k * 2.5e-4);
    double num = 0.0;
    for (std::size_t x = 0; x < px.size(); ++x) {
      const double e = (t[x][0] + t[x][1] * g1) / px[x];
      num += px[x] * std::pow(e, p);
    }
    const double den = py[0] + py[1] * std::pow(g1, q);
    best = std::max(best, std::pow(num, 1 / p) / std::pow(den, 1 / q) - 1);
  }
  return best;
}

TEST(Conjugate, Examples) {
  EXPECT_DOUBLE_EQ(conjugate(2.0), 2.0);
  EXPECT_DOUBLE_EQ(conjugate(3.0), 1.5);
  EXPECT_THROW(conjugate(1.0), Error);
}

TEST(RibbonQuery, Validation) {
  EXPECT_NO_THROW((RibbonQuery{2.0, 1.5}.validate()));
  try {
    RibbonQuery{2.0, 3.0}.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadOrder);
  }
  EXPECT_THROW(contraction_gap(builtin_joint("fig2"), 0.5, 0.5), Error);
  EXPECT_THROW(chordal_slope(builtin_joint("fig2"), 1.0), Error);
}

TEST(InRibbon, Examples) {
  const auto fig2 = builtin_joint("fig2");
  EXPECT_TRUE(in_ribbon(fig2, 1.0, 1.0));
  EXPECT_TRUE(in_ribbon(fig2, 5.0, 5.0));
  EXPECT_TRUE(in_ribbon(builtin_joint("independent"), 8.0, 1.0));
  Eigen::Matrix2d id;
  id << 0.5, 0.0, 0.0, 0.5;
  EXPECT_FALSE(in_ribbon(JointDistribution::from(id), 2.0, 1.5));
}

TEST(ContractionGap, PositiveOutsideRibbon) {
  const auto fig2 = builtin_joint("fig2");
  EXPECT_GT(contraction_gap(fig2, 21.0, 1.0 + 0.55 * 20.0), 0.0);
  EXPECT_GE(contraction_gap(fig2, 3.0, 3.0), 0.0);
  EXPECT_LE(contraction_gap(fig2, 3.0, 3.0), 1e-12);
}

TEST(ContractionGap, MatchesTwoPointOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto j = oracle::random_joint(rng, 2 + trial % 3, 2);
    for (auto [p, q] : {std::pair{2.0, 1.2}, std::pair{4.0, 1.5}, std::pair{8.0, 2.0}}) {
      EXPECT_NEAR(contraction_gap(j, p, q), two_point_gap_oracle(j, p, q), 1e-4)
          << "trial " << trial << " p " << p << " q " << q;
    }
  }
}

TEST(QStar, Examples) {
  EXPECT_NEAR(q_star(builtin_joint("independent"), 2.0), 1.0, 1e-4);
  EXPECT_NEAR(q_star(builtin_joint("independent"), 8.0), 1.0, 1e-4);
  EXPECT_EQ(q_star(builtin_joint("fig2"), 1.0), 1.0);
  Eigen::Matrix2d id;
  id << 0.5, 0.0, 0.0, 0.5;
  EXPECT_NEAR(q_star(JointDistribution::from(id), 3.0), 3.0, 1e-4);
}

TEST(QStar, BinarySymmetricClosedForm) {
  // For the uniform BSC, q* - 1 = (1 - 2e)^2 (p - 1).
  const auto j = builtin_joint("bsc:0.1");
  for (double p : {1.5, 2.0, 4.0}) {
    EXPECT_NEAR(q_star(j, p, 1e-6), 1 + 0.64 * (p - 1), 1e-4) << "p " << p;
  }
}

TEST(QStarCurve, RatioNonincreasingAndSlopesAboveRhoSquared) {
  std::mt19937_64 rng(2);
  const std::vector<double> ps{1.5, 2.0, 4.0, 8.0};
  for (int trial = 0; trial < 4; ++trial) {
    const auto j = oracle::random_joint(rng, 2 + trial % 2, 2 + trial % 3);
    const auto curve = q_star_curve(j, ps);
    const double rho = maximal_correlation(j).rho;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      EXPECT_GE(curve.slopes[k], rho * rho - 5e-3);
      if (k > 0) EXPECT_LE(curve.qstars[k] / ps[k], curve.qstars[k - 1] / ps[k - 1] + 1e-3);
    }
  }
}

TEST(Duality, TransposeWithConjugates) {
  const auto j = builtin_joint("remark3");
  for (auto [p, q] : {std::pair{3.0, 1.2}, std::pair{3.0, 2.5}, std::pair{6.0, 1.1}}) {
    EXPECT_EQ(in_ribbon(j, p, q, 1e-9), in_ribbon(j.transposed(), conjugate(q), conjugate(p), 1e-9))
        << "p " << p << " q " << q;
  }
}

TEST(SlopeAtOne, RejectsBadEps) {
  const auto j = builtin_joint("fig2");
  EXPECT_THROW(slope_at_one(j, 0.0), Error);
  EXPECT_THROW(slope_at_one(j, 0.7), Error);
}

}  // namespace
}  // namespace sdpi
