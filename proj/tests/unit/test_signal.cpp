#include <gtest/gtest.h>

#include "leojadce/signal.hpp"
#include "oracles.hpp"

using namespace leojadce;

TEST(Preambles, UnitNormColumns) {
  Rng rng(1);
  const auto p = gen_preambles(std::vector<std::size_t>{5, 3, 4}, 30, rng);
  EXPECT_EQ(p.length(), 60u);
  EXPECT_EQ(p.devices(), 30);
  for (std::size_t i = 0; i < 3; ++i) {
    for (Index k = 0; k < 30; ++k) EXPECT_NEAR(p.factors[i].col(k).norm(), 1.0, 1e-12);
  }
  const CMatrix a = assemble_preamble_matrix(p);
  for (Index k = 0; k < 30; ++k) EXPECT_NEAR(a.col(k).norm(), 1.0, 1e-12);
}

TEST(Preambles, Deterministic) {
  Rng a(2);
  Rng b(2);
  const std::vector<std::size_t> dims = {4, 4};
  const auto p = gen_preambles(dims, 10, a);
  const auto q = gen_preambles(dims, 10, b);
  EXPECT_EQ(p.factors[0], q.factors[0]);
  EXPECT_EQ(p.factors[1], q.factors[1]);
}

TEST(Preambles, InvalidDims) {
  Rng rng(3);
  EXPECT_THROW(gen_preambles(std::vector<std::size_t>{16}, 4, rng), std::invalid_argument);
  EXPECT_THROW(gen_preambles(std::vector<std::size_t>{4, 1}, 4, rng), std::invalid_argument);
  EXPECT_THROW(gen_preambles(std::vector<std::size_t>{4, 4}, 0, rng), std::invalid_argument);
}

TEST(Preambles, VecOfRankOneMatchesKronFold) {
  Rng rng(4);
  const auto p = gen_preambles(std::vector<std::size_t>{3, 2, 2}, 1, rng);
  const ComplexTensor t = kruskal(p.factors, CMatrix::Ones(1, 1));
  const CVector ref = kron(kron(p.factors[0].col(0), p.factors[1].col(0)), p.factors[2].col(0));
  for (Index i = 0; i < ref.size(); ++i) EXPECT_EQ(t.data()[static_cast<std::size_t>(i)], ref(i));
}

TEST(Assemble, BasisFactorsGiveBasisVector) {
  CMatrix e0 = CMatrix::Zero(3, 1);
  e0(1, 0) = 1.0;
  CMatrix e1 = CMatrix::Zero(4, 1);
  e1(2, 0) = 1.0;
  const PreambleSet p{FactorMatrices({e0, e1})};
  const CMatrix a = assemble_preamble_matrix(p);
  ASSERT_EQ(a.rows(), 12);
  for (Index r = 0; r < 12; ++r) EXPECT_EQ(a(r, 0), r == 1 * 4 + 2 ? Complex(1.0) : Complex(0.0));
}

TEST(Assemble, EqualsKhatriRao) {
  Rng rng(5);
  const auto p = gen_preambles(std::vector<std::size_t>{5, 4}, 9, rng);
  EXPECT_LT((assemble_preamble_matrix(p) - khatri_rao(p.factors.factors())).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(oracle::rel_err(assemble_preamble_matrix(p), oracle::khatri_rao_loops(p.factors.factors())), 1e-14);
}

TEST(Synthesize, NoiseFreeZeroStateIsZero) {
  Rng rng(6);
  const auto p = gen_preambles(std::vector<std::size_t>{3, 3}, 4, rng);
  const ComplexTensor y = synthesize_received(p, CMatrix::Zero(2, 4), 0.0, rng);
  EXPECT_EQ(y.squared_norm(), 0.0);
  EXPECT_EQ(y.dims(), (std::vector<std::size_t>{3, 3, 2}));
}

TEST(Synthesize, NoiseFreeMatchesKhatriRaoForm) {
  Rng rng(7);
  const auto p = gen_preambles(std::vector<std::size_t>{4, 3}, 5, rng);
  const CMatrix x = oracle::random_matrix(3, 5, rng);
  const ComplexTensor y = synthesize_received(p, x, 0.0, rng);
  const CMatrix kr = khatri_rao(p.factors.factors());
  EXPECT_LT((unfold_last(y) - x * kr.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Synthesize, MatrixAndTensorFormsAreTheSameData) {
  Rng rng(8);
  const auto p = gen_preambles(std::vector<std::size_t>{2, 5}, 3, rng);
  const CMatrix x = oracle::random_matrix(4, 3, rng);
  const ComplexTensor y = synthesize_received(p, x, 0.0, rng);
  const CMatrix ymat = received_matrix(y);
  ASSERT_EQ(ymat.rows(), 10);
  ASSERT_EQ(ymat.cols(), 4);
  for (Index l = 0; l < 10; ++l) {
    for (Index m = 0; m < 4; ++m) EXPECT_EQ(ymat(l, m), y.data()[static_cast<std::size_t>(l * 4 + m)]);
  }
  const ComplexTensor clean = kruskal(p.factors, x);
  for (std::size_t i = 0; i < clean.size(); ++i) EXPECT_EQ(clean.data()[i], y.data()[i]);
}

TEST(Synthesize, NoiseVarianceMonteCarlo) {
  Rng rng(9);
  const auto p = gen_preambles(std::vector<std::size_t>{100, 125}, 2, rng);
  const CMatrix x = oracle::random_matrix(8, 2, rng);
  const ComplexTensor y = synthesize_received(p, x, 1.0, rng);
  const ComplexTensor clean = kruskal(p.factors, x);
  double sum = 0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += std::norm(y.data()[i] - clean.data()[i]);
  const double n = static_cast<double>(y.size());
  EXPECT_GE(n, 1e5);
  EXPECT_NEAR(sum / n, 1.0, 3.0 / std::sqrt(n));
}

TEST(Synthesize, RejectsShapeMismatch) {
  Rng rng(10);
  const auto p = gen_preambles(std::vector<std::size_t>{2, 2}, 3, rng);
  EXPECT_THROW(synthesize_received(p, CMatrix::Zero(2, 4), 0.0, rng), std::invalid_argument);
  EXPECT_THROW(synthesize_received(p, CMatrix::Zero(2, 3), -1.0, rng), std::invalid_argument);
}

TEST(Snr, NoiseVariance) {
  EXPECT_DOUBLE_EQ(noise_variance(1.0, 10.0), 0.1);
  EXPECT_DOUBLE_EQ(noise_variance(2.0, 0.0), 2.0);
  EXPECT_NEAR(noise_variance(1.0, 30.0), 1e-3, 1e-18);
}

TEST(Factorization, PinnedScenarioTable) {
  using V = std::vector<std::size_t>;
  EXPECT_EQ(default_factorization(400, 2), (V{20, 20}));
  EXPECT_EQ(default_factorization(225, 2), (V{15, 15}));
  EXPECT_EQ(default_factorization(225, 3), (V{9, 5, 5}));
  EXPECT_EQ(default_factorization(225, 4), (V{5, 5, 3, 3}));
  EXPECT_EQ(default_factorization(200, 2), (V{20, 10}));
  EXPECT_EQ(default_factorization(16, 2), (V{4, 4}));
}

TEST(Factorization, GenericLengthsMultiplyOut) {
  for (std::size_t l : {12u, 36u, 64u, 100u, 300u, 1000u}) {
    for (std::size_t d : {2u, 3u}) {
      const auto f = default_factorization(l, d);
      ASSERT_EQ(f.size(), d);
      std::size_t prod = 1;
      for (auto x : f) {
        EXPECT_GE(x, 2u);
        prod *= x;
      }
      EXPECT_EQ(prod, l);
    }
  }
}

TEST(Factorization, Impossible) {
  EXPECT_THROW(default_factorization(13, 2), std::invalid_argument);
  EXPECT_THROW(default_factorization(8, 4), std::invalid_argument);
  EXPECT_THROW(default_factorization(16, 1), std::invalid_argument);
}
