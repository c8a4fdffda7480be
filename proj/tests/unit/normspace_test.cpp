#include "hq/normspace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hq/catalog.hpp"
#include "hq/error.hpp"
#include "oracles.hpp"

using hq::CoordinateFunction;

namespace {

const auto kUnit = hq::shared_rectangle("unit");

}  // namespace

TEST(Norm, ZeroAndConstants) {
  EXPECT_EQ(hq::norm(CoordinateFunction::constant(0.0, kUnit), 1.0).value, 0.0);
  for (double c : {-3.0, 0.25, 2.0}) {
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      EXPECT_NEAR(hq::norm(CoordinateFunction::constant(c, kUnit), p).value, std::abs(c), 1e-14)
          << c << " p=" << p;
    }
  }
}

TEST(Norm, WallisSumOnCubeAgainstQuadratureOracle) {
  const double oracle_value = oracle::unit_separable_norm_by_quadrature(2000);
  EXPECT_NEAR(oracle_value, oracle::kPiSquaredOver12, 1e-12);
  const auto n = hq::norm(hq::wallis_sum(kUnit), 1.0);
  EXPECT_NEAR(n.value, oracle_value, 1e-6);
  EXPECT_NEAR(n.value, oracle::kPiSquaredOver12, 1e-9);
}

TEST(Norm, TwoNormOfSeparableSum) {
  // |f|² has no analytic form, so the ladder runs numerically and stops at
  // the numeric cap; the last level estimates E[(Σ_{i≤n} x_i/i²)²] =
  // (Σ 1/(2i²))² + Σ 1/(12 i⁴) over i ≤ n.
  const auto n = hq::norm(hq::wallis_sum(kUnit), 2.0);
  const auto& I = n.integral;
  double mean = 0.0;
  double var = 0.0;
  for (std::size_t i = 1; i <= I.n_dims_used; ++i) {
    const double q = static_cast<double>(i) * static_cast<double>(i);
    mean += 0.5 / q;
    var += 1.0 / (12.0 * q * q);
  }
  EXPECT_NEAR(I.value, mean * mean + var, 3.0 * I.error_estimate + 1e-12);
  EXPECT_DOUBLE_EQ(n.value, std::sqrt(I.value));

  const double full = oracle::kPiSquaredOver12 * oracle::kPiSquaredOver12 +
                      std::pow(oracle::kPi, 4) / 90.0 / 12.0;
  if (I.status == hq::Status::Converged) {
    EXPECT_NEAR(n.value, std::sqrt(full), 1e-4);
  } else {
    EXPECT_EQ(I.status, hq::Status::BudgetExhausted);
  }
}

TEST(Norm, RejectsBadArguments) {
  EXPECT_THROW(hq::norm(hq::wallis_sum(kUnit), 0.5), hq::Error);
  EXPECT_THROW(hq::norm(hq::wallis_sum(hq::shared_rectangle("wallis")), 1.0), hq::Error);
  const auto unbounded = CoordinateFunction::from_expression("1/x[1]^0.25", kUnit);
  EXPECT_THROW(hq::norm(unbounded, 2.0), hq::Error);
}

TEST(Norm, PowerMonotoneOnProbabilitySpace) {
  for (const auto& f : {hq::sec9_ex1(kUnit), hq::sec9_ex2(kUnit), hq::wallis_sum(kUnit)}) {
    EXPECT_LE(hq::norm(f, 1.0).value, hq::norm(f, 2.0).value + 1e-5) << f.description();
  }
}

TEST(Equivalence, Examples) {
  const auto f = hq::sec9_ex1(kUnit);
  const auto self = hq::equivalent(f, f);
  EXPECT_TRUE(self.equivalent);
  EXPECT_NEAR(self.distance, 0.0, 1e-12);

  const auto shifted = hq::equivalent(f, f + CoordinateFunction::constant(1.0, kUnit));
  EXPECT_FALSE(shifted.equivalent);
  EXPECT_NEAR(shifted.distance, 1.0, 1e-9);

  const auto zero = CoordinateFunction::constant(0.0, kUnit);
  EXPECT_TRUE(hq::equivalent(zero, zero).equivalent);
}

TEST(Equivalence, SymmetricBitForBit) {
  const auto f = hq::sec9_ex1(kUnit);
  const auto g = hq::wallis_sum(kUnit);
  EXPECT_EQ(hq::equivalent(f, g).distance, hq::equivalent(g, f).distance);
}

TEST(Equivalence, EquivalentFunctionsShareNorms) {
  // Σ x_i/i² written two ways.
  const auto a = hq::wallis_sum(kUnit);
  const auto b = CoordinateFunction::from_expression("sum(i,1,inf, x[i]/i^2)", kUnit);
  const auto e = hq::equivalent(a, b);
  EXPECT_TRUE(e.equivalent);
  EXPECT_LE(std::abs(hq::norm(a, 1.0).value - hq::norm(b, 1.0).value), 1e-5);
}

TEST(Axioms, HoldOnCatalog) {
  const std::vector<CoordinateFunction> cat{hq::wallis_sum(kUnit), hq::sec9_ex1(kUnit),
                                            CoordinateFunction::constant(-0.5, kUnit)};
  const auto rep = hq::check_norm_axioms(cat);
  EXPECT_TRUE(rep.passed());
  // 1 + 5 homogeneity checks per function, one triangle per unordered pair.
  EXPECT_EQ(rep.checks.size(), 3u * 6u + 6u);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(Axioms, HomogeneityExamples) {
  const auto f = hq::sec9_ex2(kUnit);
  const double nf = hq::norm(f, 1.0).value;
  EXPECT_EQ(hq::norm(0.0 * f, 1.0).value, 0.0);
  EXPECT_NEAR(hq::norm(-1.0 * f, 1.0).value, nf, 1e-12);
}

TEST(Completeness, PartialSumsConvergeInNorm) {
  // f^m = Σ_{i≤m} x_i/i²; ||f^m||_1 = Σ_{i≤m} 1/(2i²) → ||f||_1.
  const auto f = hq::wallis_sum(kUnit);
  const double full = hq::norm(f, 1.0).value;
  double prev = 0.0;
  for (std::size_t m : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
    const auto fm = CoordinateFunction::from_expression(
        "sum(i,1," + std::to_string(m) + ", x[i]/i^2)", kUnit);
    const double v = hq::norm(fm, 1.0).value;
    double head = 0.0;
    for (std::size_t i = 1; i <= m; ++i) head += 0.5 / (double(i) * double(i));
    EXPECT_NEAR(v, head, 1e-12) << m;
    EXPECT_GT(v, prev);
    EXPECT_LT(v, full);
    prev = v;
  }
  EXPECT_LT(full - prev, 0.5 / 64.0);
}

TEST(Completeness, DistanceToPartialSumsSeesLateCoordinates) {
  // f − f^m vanishes on the first m levels; the ladder must not stop there.
  const auto f = hq::wallis_sum(kUnit);
  for (std::size_t m : {1u, 4u, 8u}) {
    const auto fm = CoordinateFunction::from_expression(
        "sum(i,1," + std::to_string(m) + ", x[i]/i^2)", kUnit);
    const auto e = hq::equivalent(f, fm);
    EXPECT_FALSE(e.equivalent) << m;
    double expected = 0.0;
    for (std::size_t i = m + 1; i <= e.integral.n_dims_used; ++i) {
      expected += 0.5 / (double(i) * double(i));
    }
    EXPECT_NEAR(e.distance, expected, 3.0 * e.integral.error_estimate + 1e-9) << m;
  }
}
