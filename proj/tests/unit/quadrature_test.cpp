#include "hq/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"

namespace q = hq::quadrature;

TEST(GaussLegendre, WeightsSumToOneAndNodesInside) {
  for (std::size_t order : {1u, 2u, 5u, 16u, 40u}) {
    const auto& rule = q::gauss_legendre(order);
    ASSERT_EQ(rule.nodes.size(), order);
    double s = 0.0;
    for (std::size_t k = 0; k < order; ++k) {
      EXPECT_GT(rule.nodes[k], 0.0);
      EXPECT_LT(rule.nodes[k], 1.0);
      s += rule.weights[k];
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToTwoNMinusOne) {
  for (std::size_t order : {2u, 4u, 8u}) {
    const auto& rule = q::gauss_legendre(order);
    for (std::size_t d = 0; d < 2 * order; ++d) {
      double s = 0.0;
      for (std::size_t k = 0; k < order; ++k) {
        s += rule.weights[k] * std::pow(rule.nodes[k], static_cast<double>(d));
      }
      EXPECT_NEAR(s, 1.0 / static_cast<double>(d + 1), 1e-14) << order << " " << d;
    }
  }
}

TEST(TensorProduct, SeparableIntegrandOnBox) {
  const std::vector<double> sides{1.0, 2.0, 0.5};
  const auto e = q::tensor_product(
      [](std::span<const double> x) { return x[0] * x[1] + x[2] * x[2]; }, sides, 6);
  // ∫ x y = (1/2)(2)(0.5) over the x,y box times 0.5; ∫ z² = (0.5³/3)·2.
  const double expected = 0.5 * 2.0 * 0.5 + (0.125 / 3.0) * 2.0;
  EXPECT_NEAR(e.value, expected, 1e-14);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.evaluations, 216u);
}

TEST(TensorProduct, WorkerCountDoesNotChangeBits) {
  const std::vector<double> sides{1.0, 1.0, 1.0, 1.0};
  const auto f = [](std::span<const double> x) {
    return std::exp(x[0] - x[1]) * std::cos(x[2] + x[3]);
  };
  const auto a = q::tensor_product(f, sides, 10, 1);
  const auto b = q::tensor_product(f, sides, 10, 4);
  EXPECT_EQ(a.value, b.value);
}

TEST(MonteCarlo, SeededAndWorkerIndependent) {
  const std::vector<double> sides{1.0, 1.0, 1.0};
  const auto f = [](std::span<const double> x) { return x[0] + x[1] * x[2]; };
  const auto a = q::monte_carlo(f, sides, 1 << 16, 42, 1);
  const auto b = q::monte_carlo(f, sides, 1 << 16, 42, 7);
  const auto c = q::monte_carlo(f, sides, 1 << 16, 43, 1);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.value, c.value);
  EXPECT_NEAR(a.value, 0.75, 4.0 * a.std_error);
  EXPECT_GT(a.std_error, 0.0);
}

TEST(MonteCarlo, ScalesByVolume) {
  const std::vector<double> sides{2.0, 3.0};
  const auto e = q::monte_carlo([](std::span<const double>) { return 1.0; }, sides, 1000, 1);
  EXPECT_DOUBLE_EQ(e.value, 6.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(Uniform01, RangeAndDeterminism) {
  double lo = 1.0;
  double hi = 0.0;
  double mean = 0.0;
  const std::size_t n = 100000;
  for (std::size_t s = 0; s < n; ++s) {
    const double u = q::uniform01(9, s, 3);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u;
    EXPECT_EQ(u, q::uniform01(9, s, 3));
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
  EXPECT_NEAR(mean / static_cast<double>(n), 0.5, 0.005);
}

TEST(Kronecker, PointsFillTheCube) {
  std::vector<double> p(5);
  double mean = 0.0;
  for (std::size_t i = 0; i < 4096; ++i) {
    q::kronecker_point(i, p);
    for (double v : p) {
      ASSERT_GE(v, 0.0);
      ASSERT_LT(v, 1.0);
      mean += v;
    }
  }
  EXPECT_NEAR(mean / (4096.0 * 5.0), 0.5, 1e-2);
}

TEST(Adaptive1D, AgreesWithSimpsonOracle) {
  const auto f = [](double x) { return std::sqrt(x) * std::log1p(x); };
  double err = 0.0;
  const double got = q::adaptive_1d(f, 0.0, 2.0, 1e-12, &err);
  EXPECT_NEAR(got, oracle::simpson(f, 0.0, 2.0, 200000), 1e-8);
  EXPECT_LT(err, 1e-9);
}

TEST(ParallelChunks, CoversRangeAndRethrowsFirstError) {
  std::vector<int> hits(1000, 0);
  q::parallel_chunks(1000, 64, 4, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);

  try {
    q::parallel_chunks(1000, 10, 4, [](std::size_t chunk, std::size_t, std::size_t) {
      if (chunk == 3 || chunk == 70) throw std::runtime_error("chunk " + std::to_string(chunk));
    });
    FAIL() << "expected rethrow";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "chunk 3");
  }
}
