#include "hq/integrator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hq/catalog.hpp"
#include "hq/error.hpp"
#include "oracles.hpp"

using hq::ConvergenceConfig;
using hq::CoordinateFunction;
using hq::DeltaSequence;
using hq::Engine;
using hq::PowerSeries;
using hq::Status;

namespace {

const auto kUnit = hq::shared_rectangle("unit");
const auto kWallis = hq::shared_rectangle("wallis");
const auto kHalf = hq::shared_rectangle("degenerate_half");

ConvergenceConfig analytic_cfg() {
  ConvergenceConfig c;
  c.engine = Engine::Analytic;
  return c;
}

}  // namespace

TEST(Ladder, DoublingWithCap) {
  EXPECT_EQ(hq::dimension_ladder(12), (std::vector<std::size_t>{1, 2, 4, 8, 12}));
  EXPECT_EQ(hq::dimension_ladder(8), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_EQ(hq::dimension_ladder(1), (std::vector<std::size_t>{1}));
}

TEST(Engines, NamesParse) {
  EXPECT_EQ(hq::parse_engine("analytic"), Engine::Analytic);
  EXPECT_EQ(hq::parse_engine("quad"), Engine::TensorQuad);
  EXPECT_EQ(hq::parse_engine("tensor_quad"), Engine::TensorQuad);
  EXPECT_EQ(hq::parse_engine("mc"), Engine::MonteCarlo);
  EXPECT_EQ(hq::parse_engine("auto"), Engine::Auto);
  EXPECT_FALSE(hq::parse_engine("simpson").has_value());
}

TEST(Integrate, WallisSumTraceMatchesPerDimensionOracle) {
  const auto f = hq::wallis_sum(kWallis);
  const auto res = hq::integrate(f, analytic_cfg());
  EXPECT_EQ(res.status, Status::Converged);
  EXPECT_EQ(res.engine, Engine::Analytic);
  for (const auto& tp : res.trace) {
    EXPECT_NEAR(tp.value, oracle::separable_level(kWallis->sides(tp.n)), 1e-12 * (1.0 + tp.value))
        << "n=" << tp.n;
  }
  // vol(W) · Σ 2/(4i²−1) telescopes to π/2.
  EXPECT_NEAR(res.value, oracle::kHalfPi, 1e-8);
}

TEST(Integrate, WallisSumTraceIsMonotone) {
  const auto res = hq::integrate(hq::wallis_sum(kWallis), analytic_cfg());
  ASSERT_GE(res.trace.size(), 3u);
  for (std::size_t j = 1; j < res.trace.size(); ++j) {
    EXPECT_GT(res.trace[j].value, res.trace[j - 1].value);
  }
  for (std::size_t j = 2; j < res.trace.size(); ++j) {
    EXPECT_LT(res.trace[j].value - res.trace[j - 1].value,
              res.trace[j - 1].value - res.trace[j - 2].value);
  }
}

TEST(Integrate, ZeroAndConstants) {
  for (const auto& r : {kUnit, kWallis, kHalf}) {
    const auto z = hq::integrate(CoordinateFunction::constant(0.0, r));
    EXPECT_EQ(z.value, 0.0) << r->name();
  }
  const auto one = hq::integrate(CoordinateFunction::constant(1.0, kUnit));
  EXPECT_EQ(one.value, 1.0);
  const auto quad = hq::integrate_level(CoordinateFunction::constant(1.0, kUnit), *kUnit, 4,
                                        Engine::TensorQuad);
  EXPECT_NEAR(quad.value, 1.0, 1e-14);
}

TEST(Integrate, DegenerateRectangleGivesZeroWithShrinkingTrace) {
  for (const auto& f : {hq::wallis_sum(kHalf), hq::sec9_ex1(kHalf), hq::sec9_ex2(kHalf),
                        CoordinateFunction::constant(-0.5, kHalf)}) {
    const auto res = hq::integrate(f);
    EXPECT_EQ(res.status, Status::DegenerateZero) << f.description();
    EXPECT_EQ(res.value, 0.0);
    ASSERT_TRUE(f.bound().has_value());
    const double M = *f.bound();
    ASSERT_FALSE(res.trace.empty());
    for (const auto& tp : res.trace) {
      EXPECT_LE(std::abs(tp.value), (M + 1.0) * std::ldexp(1.0, -static_cast<int>(tp.n)))
          << f.description() << " n=" << tp.n;
    }
  }
}

TEST(Integrate, FirstProductExampleMatchesClosedForm) {
  const auto res = hq::integrate(hq::sec9_ex1(kUnit));
  EXPECT_EQ(res.engine, Engine::Analytic);
  EXPECT_NEAR(res.value, oracle::ex1_closed_form(), 1e-8);
  // mpmath, 30 digits.
  EXPECT_NEAR(res.value, 0.5850271424457384, 1e-10);
}

TEST(IntegrateLevel, AnalyticMatchesMomentSumOracle) {
  const auto f = hq::sec9_ex1(kUnit);
  for (std::size_t n : {1u, 2u, 5u, 12u}) {
    const auto e = hq::integrate_level(f, *kUnit, n, Engine::Analytic);
    EXPECT_NEAR(e.value, oracle::ex1_level(n), 1e-13) << n;
  }
  EXPECT_NEAR(oracle::ex1_level(12), 0.594161053894368, 1e-13);
}

TEST(IntegrateLevel, EnginesAgreeAtLowDimension) {
  const auto f = hq::sec9_ex1(kUnit);
  const auto a = hq::integrate_level(f, *kUnit, 3, Engine::Analytic);
  ConvergenceConfig cfg;
  cfg.quad_order = 24;
  const auto q = hq::integrate_level(f, *kUnit, 3, Engine::TensorQuad, cfg);
  EXPECT_NEAR(a.value, q.value, 1e-4);  // x^{1/n²} has an endpoint singularity in its derivative
  cfg.mc_samples = 1 << 18;
  const auto m = hq::integrate_level(f, *kUnit, 3, Engine::MonteCarlo, cfg);
  EXPECT_NEAR(a.value, m.value, 3.0 * m.std_error);
}

TEST(IntegrateLevel, MonteCarloAtTwelveDimensionsEstimatesTruncatedIntegral) {
  ConvergenceConfig cfg;
  cfg.mc_samples = 1 << 18;
  const auto f = hq::sec9_ex1(kUnit);
  const auto m = hq::integrate_level(f, *kUnit, 12, Engine::MonteCarlo, cfg);
  EXPECT_NEAR(m.value, oracle::ex1_level(12), 3.0 * m.std_error);
}

TEST(IntegrateLevel, MonteCarloIsReproducible) {
  ConvergenceConfig a;
  a.mc_samples = 1 << 14;
  a.workers = 1;
  ConvergenceConfig b = a;
  b.workers = 6;
  const auto f = hq::sec9_ex2(kUnit);
  const auto x = hq::integrate_level(f, *kUnit, 12, Engine::MonteCarlo, a);
  const auto y = hq::integrate_level(f, *kUnit, 12, Engine::MonteCarlo, b);
  EXPECT_EQ(x.value, y.value);
  EXPECT_EQ(x.std_error, y.std_error);
}

TEST(ProductForm, FirstExample) {
  const auto form = hq::product_form(PowerSeries::geometric(2.0), "x[n]^(1/n^2)");
  const auto res = hq::integrate_product_form(form, *kUnit);
  EXPECT_EQ(res.status, Status::Converged);
  EXPECT_NEAR(res.value, oracle::ex1_closed_form(), 1e-8);
}

TEST(ProductForm, SecondExample) {
  const auto form = hq::product_form(PowerSeries::cosh(), "x[n]^(1/2^n)");
  const auto res = hq::integrate_product_form(form, *kUnit);
  EXPECT_NEAR(res.value, oracle::ex2_value(), 1e-10);
  EXPECT_NEAR(res.value, 1.1078091360305919, 1e-12);
}

TEST(ProductForm, IdentityOfOne) {
  const auto form = hq::product_form(PowerSeries::identity(), "1");
  const auto res = hq::integrate_product_form(form, *kUnit);
  EXPECT_NEAR(res.value, 1.0, 1e-14);
}

TEST(ProductForm, GeneralPhiUsesQuadratureMoments) {
  // ψ = identity, φ_n(x) = 1 + x/2^n: ∏ (1 + 2^{−n−1}) on the unit cube.
  const auto form = hq::product_form(PowerSeries::identity(), "1 + x[n]/2^n");
  const auto res = hq::integrate_product_form(form, *kUnit);
  long double p = 1.0L;
  for (int n = 1; n <= 70; ++n) p *= 1.0L + std::ldexp(1.0L, -n - 1);
  EXPECT_NEAR(res.value, static_cast<double>(p), 1e-9);
}

TEST(PartialIntegrate, SeparableShiftsIndices) {
  const auto g = hq::partial_integrate(hq::wallis_sum(kUnit), 1);
  const std::vector<double> t{0.3, 0.8, 0.1, 0.5};
  double expected = 0.5;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double i = static_cast<double>(j + 2);
    expected += t[j] / (i * i);
  }
  EXPECT_NEAR(g(t), expected, 1e-15);

  const auto g3 = hq::partial_integrate(hq::wallis_sum(kUnit), 3);
  EXPECT_NEAR(g3(std::vector<double>{0.0}), 0.5 * (1.0 + 0.25 + 1.0 / 9.0), 1e-15);
}

TEST(PartialIntegrate, FirstProductExampleClosedForm) {
  const auto g = hq::partial_integrate(hq::sec9_ex1(kUnit), 1);
  const std::vector<double> t{0.7, 0.2, 0.9, 0.4, 0.6};
  double P = 1.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double n = static_cast<double>(j + 2);
    P *= std::pow(t[j], 1.0 / (n * n));
  }
  EXPECT_NEAR(g(t), std::log(2.0 / (2.0 - P)) / P, 1e-12);
}

TEST(PartialIntegrate, UnstructuredUsesQuadrature) {
  const auto f = CoordinateFunction::from_expression("x[1]*x[2] + x[3]*x[1]^2", kUnit);
  const auto g = hq::partial_integrate(f, 1);
  const std::vector<double> t{0.4, 0.9};
  const double oracle_value = oracle::simpson(
      [&](double x) { return x * t[0] + t[1] * x * x; }, 0.0, 1.0, 200);
  EXPECT_NEAR(g(t), oracle_value, 1e-12);
}

TEST(PartialIntegrate, ConstantsAndDomain) {
  const auto g = hq::partial_integrate(CoordinateFunction::constant(2.5, kUnit), 4);
  EXPECT_EQ(g(std::vector<double>{0.1, 0.2}), 2.5);
  EXPECT_THROW(hq::partial_integrate(hq::wallis_sum(kWallis), 1), hq::Error);
  EXPECT_THROW(hq::partial_integrate(hq::wallis_sum(kUnit), 0), hq::Error);
}

TEST(UnitPrimitive, WallisSumAnalytic) {
  for (std::size_t r : {1u, 2u, 3u}) {
    const auto rep = hq::check_unit_primitive(hq::wallis_sum(kUnit), r, analytic_cfg());
    EXPECT_LT(rep.gap, 1e-9) << "r=" << r;
    EXPECT_NEAR(rep.lhs.value, oracle::kPiSquaredOver12, 1e-9);
  }
}

TEST(UnitPrimitive, ConstantHasNoGap) {
  const auto rep = hq::check_unit_primitive(CoordinateFunction::constant(-3.0, kUnit), 2);
  EXPECT_EQ(rep.gap, 0.0);
}

TEST(UnitPrimitive, FirstProductExampleMonteCarlo) {
  ConvergenceConfig cfg;
  cfg.engine = Engine::MonteCarlo;
  cfg.mc_samples = 1 << 16;
  cfg.max_dims = 16;
  const auto rep = hq::check_unit_primitive(hq::sec9_ex1(kUnit), 1, cfg);
  EXPECT_EQ(rep.lhs.engine, Engine::MonteCarlo);
  EXPECT_LE(rep.gap, 3.0 * (rep.lhs.error_estimate + rep.rhs.error_estimate));
}

TEST(Bound, Examples) {
  const auto one = hq::check_bound(CoordinateFunction::constant(1.0, kUnit), 1.0, *kUnit);
  EXPECT_TRUE(one.holds);
  EXPECT_DOUBLE_EQ(one.bound, 1.0);

  const double M = 2.0 * oracle::kPi * oracle::kPi / 9.0;
  const auto w = hq::check_bound(hq::wallis_sum(kWallis), M, *kWallis);
  EXPECT_TRUE(w.holds);
  EXPECT_NEAR(w.bound, M * oracle::kHalfPi, 1e-12);
  EXPECT_NEAR(w.integral.value, oracle::kHalfPi, 1e-8);

  const auto neg = hq::check_bound(CoordinateFunction::constant(-1.0, kUnit), 1.0, *kUnit);
  EXPECT_TRUE(neg.holds);
  EXPECT_DOUBLE_EQ(neg.integral.value, -1.0);

  const auto broken = hq::check_bound(CoordinateFunction::constant(2.0, kUnit), 1.0, *kUnit);
  EXPECT_FALSE(broken.holds);
}

TEST(Uniqueness, IdenticalSequences) {
  const auto s = DeltaSequence::regular(hq::sec9_ex1(kUnit));
  EXPECT_EQ(hq::check_uniqueness(s, s, *kUnit), 0.0);
}

TEST(Uniqueness, PerturbedWallisSum) {
  const auto f = hq::wallis_sum(kWallis);
  const double gap = hq::check_uniqueness(DeltaSequence::regular(f), hq::perturbed_sequence(f),
                                          *kWallis, analytic_cfg());
  EXPECT_LT(gap, 1e-6);
}

TEST(Uniqueness, FactorialScaledSequence) {
  const auto f = hq::wallis_sum(kWallis);
  const DeltaSequence scaled(
      [f](std::size_t n) {
        return std::exp(-std::lgamma(static_cast<double>(n) + 1.0)) * f + f;
      },
      f, "f(1 + 1/n!)");
  const double gap =
      hq::check_uniqueness(DeltaSequence::regular(f), scaled, *kWallis, analytic_cfg());
  EXPECT_LT(gap, 1e-6);
}

TEST(Integrate, UnboundedOnNonUnitNeedsForce) {
  const auto f = CoordinateFunction::from_expression("1/x[1]^0.5", kWallis);
  try {
    hq::integrate(f);
    FAIL() << "expected UnsupportedCase";
  } catch (const hq::Error& e) {
    EXPECT_EQ(e.code(), hq::ErrorCode::UnsupportedCase);
  }
}

TEST(Integrate, LinearityOnCatalogPairs) {
  const auto a = hq::sec9_ex1(kUnit);
  const auto b = hq::wallis_sum(kUnit);
  const ConvergenceConfig cfg;
  const double ia = hq::integrate(a, cfg).value;
  const double ib = hq::integrate(b, cfg).value;
  EXPECT_NEAR(hq::integrate(a + b, cfg).value, ia + ib, 10.0 * cfg.tol);
  EXPECT_NEAR(hq::integrate(-2.5 * a, cfg).value, -2.5 * ia, 10.0 * cfg.tol);
  EXPECT_NEAR(hq::integrate(2.0 * hq::wallis_sum(kWallis), cfg).value, 2.0 * oracle::kHalfPi,
              10.0 * cfg.tol);
}
