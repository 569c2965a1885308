#include <gtest/gtest.h>

#include <cmath>

#include "leojadce/detection.hpp"
#include "leojadce/rng.hpp"
#include "oracles.hpp"

using namespace leojadce;

TEST(Detect, ZeroMeanDetectsNothing) {
  const auto d = detect(CMatrix::Zero(4, 6), 0.3, 1.0);
  EXPECT_EQ(d.active, std::vector<std::uint8_t>(6, 0));
  EXPECT_EQ(d.threshold, 0.0);
  EXPECT_EQ(d.channels, CMatrix::Zero(4, 6));
}

TEST(Detect, SingleColumnThreshold) {
  CMatrix m(4, 1);
  m << 1, 1, 1, 1;
  const auto d = detect(m, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(d.threshold, 1.0);
  EXPECT_EQ(d.active[0], 1);
}

TEST(Detect, ThresholdFromLargestEntry) {
  CMatrix m = CMatrix::Zero(2, 3);
  m(0, 0) = Complex(3, 4);   // |.| = 5, energy 25
  m(1, 1) = Complex(1, 2);   // energy 5
  m(0, 2) = Complex(1, 0);   // energy 1
  const auto d = detect(m, 0.3, 4.0);
  EXPECT_NEAR(d.threshold, 2 * 1.5 * 1.5, 1e-12);
  EXPECT_EQ(d.active, (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_EQ(d.channels.col(0), m.col(0) / 2.0);
  EXPECT_EQ(d.channels.col(2), CVector::Zero(2));
  m(1, 1) = Complex(0, 2);  // energy 4 < 4.5
  EXPECT_EQ(detect(m, 0.3, 4.0).active, (std::vector<std::uint8_t>{1, 0, 0}));
}

TEST(Detect, EqualColumnsShareTheDecision) {
  Rng rng(1);
  const CVector col = oracle::random_matrix(3, 1, rng);
  CMatrix m(3, 4);
  for (Index c = 0; c < 4; ++c) m.col(c) = col;
  const auto d = detect(m, 0.9, 1.0);
  for (auto a : d.active) EXPECT_EQ(a, d.active[0]);
}

TEST(Detect, ScaleInvariant) {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix m = oracle::random_matrix(4, 12, rng);
    const auto a = detect(m, 0.4, 1.0);
    const auto b = detect(m * Complex(3.5, -1.25), 0.4, 1.0);
    EXPECT_EQ(a.active, b.active);
  }
}

TEST(Detect, InvalidArguments) {
  EXPECT_THROW(detect(CMatrix::Ones(2, 2), 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(detect(CMatrix::Ones(2, 2), 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(detect(CMatrix::Ones(2, 2), 0.5, 0.0), std::invalid_argument);
}

TEST(ErrorProbability, PerfectAndSingleFlip) {
  const std::vector<std::uint8_t> truth{1, 0, 0, 1, 0, 0, 0, 1, 0, 0};
  EXPECT_EQ(error_probability(truth, truth), 0.0);
  auto flipped = truth;
  flipped[4] = 1;
  EXPECT_DOUBLE_EQ(error_probability(flipped, truth), 0.1);
}

TEST(ErrorProbability, MatchesCountingLoop) {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::uint8_t> a(37), b(37);
    int misses = 0, false_alarms = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = bernoulli(rng, 0.3);
      b[i] = bernoulli(rng, 0.3);
      if (b[i] && !a[i]) ++misses;
      if (!b[i] && a[i]) ++false_alarms;
    }
    EXPECT_DOUBLE_EQ(error_probability(a, b), (misses + false_alarms) / 37.0);
    EXPECT_EQ(error_probability(a, b), error_probability(b, a));
  }
  EXPECT_THROW(error_probability(std::vector<std::uint8_t>(2), std::vector<std::uint8_t>(3)), std::invalid_argument);
}

TEST(Nmse, KnownValues) {
  Rng rng(4);
  const CMatrix x = oracle::random_matrix(3, 5, rng);
  EXPECT_EQ(nmse(x, x), 0.0);
  EXPECT_DOUBLE_EQ(nmse(CMatrix::Zero(3, 5), x), 1.0);
  EXPECT_NEAR(nmse(2.0 * x, x), 1.0, 1e-14);
  EXPECT_THROW(nmse(x, CMatrix::Zero(3, 5)), std::invalid_argument);
  EXPECT_THROW(nmse(x, CMatrix::Zero(3, 4)), std::invalid_argument);
}

TEST(Nmse, InvariantUnderColumnPermutation) {
  Rng rng(5);
  const CMatrix x = oracle::random_matrix(3, 6, rng);
  const CMatrix e = oracle::random_matrix(3, 6, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
  perm.indices() << 3, 0, 5, 1, 4, 2;
  EXPECT_NEAR(nmse(e * perm, x * perm), nmse(e, x), 1e-14);
}

TEST(NmseActive, RestrictsToActiveColumns) {
  Rng rng(6);
  CMatrix x = oracle::random_matrix(2, 4, rng);
  x.col(1).setZero();
  x.col(3).setZero();
  CMatrix e = x;
  e.col(1) = oracle::random_matrix(2, 1, rng);  // false alarm energy is ignored
  e.col(0) *= 2.0;
  const std::vector<std::uint8_t> active{1, 0, 1, 0};
  EXPECT_NEAR(nmse_active(e, x, active), x.col(0).squaredNorm() / (x.col(0).squaredNorm() + x.col(2).squaredNorm()),
              1e-14);
  EXPECT_TRUE(std::isnan(nmse_active(e, x, std::vector<std::uint8_t>(4, 0))));
}
