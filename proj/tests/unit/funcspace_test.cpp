#include "hq/funcspace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hq/catalog.hpp"
#include "hq/error.hpp"
#include "oracles.hpp"

using hq::CoordinateFunction;
using hq::DeltaSequence;
using hq::PowerSeries;
using hq::SampleBudget;
using hq::Verdict;

namespace {

const auto kUnit = hq::shared_rectangle("unit");
const auto kWallis = hq::shared_rectangle("wallis");

SampleBudget small_budget() {
  SampleBudget b;
  b.points = 256;
  b.dim_cap = 16;
  b.ladder_max = 256;
  b.limit_level = 1024;
  return b;
}

std::vector<double> head(std::size_t n, double scale = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = scale * std::fmod(0.618034 * static_cast<double>(i + 1), 1.0);
  }
  return x;
}

}  // namespace

TEST(PowerSeriesTest, KnownCoefficients) {
  const auto g = PowerSeries::geometric(2.0);
  for (std::size_t k = 0; k < 20; ++k) EXPECT_DOUBLE_EQ(g[k], std::ldexp(1.0, -int(k) - 1));
  const auto c = PowerSeries::cosh();
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  EXPECT_DOUBLE_EQ(c[4], 1.0 / 24.0);
  EXPECT_NEAR(c[10], 1.0 / 3628800.0, 1e-22);
  const auto e = PowerSeries::exp();
  EXPECT_NEAR(e[5], 1.0 / 120.0, 1e-18);
  EXPECT_TRUE(PowerSeries::identity().is_identity());
}

TEST(PowerSeriesTest, AlgebraRoundTrips) {
  const auto one_minus_t = PowerSeries::polynomial({1.0, -1.0});
  const auto r = one_minus_t.reciprocal();
  for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(r[k], 1.0, 1e-14);

  const auto s = PowerSeries::polynomial({1.0, 1.0}).power(0.5);
  const auto sq = s.times(s);
  EXPECT_NEAR(sq[0], 1.0, 1e-14);
  EXPECT_NEAR(sq[1], 1.0, 1e-14);
  for (std::size_t k = 2; k < 12; ++k) EXPECT_NEAR(sq[k], 0.0, 1e-13);

  const auto el = PowerSeries::exp().logarithm();
  EXPECT_NEAR(el[0], 0.0, 1e-15);
  EXPECT_NEAR(el[1], 1.0, 1e-15);
  for (std::size_t k = 2; k < 10; ++k) EXPECT_NEAR(el[k], 0.0, 1e-13);

  const auto d = PowerSeries::geometric(2.0).dilated(0.5);  // 1/(2 − t/2)
  EXPECT_DOUBLE_EQ(d[3], std::ldexp(1.0, -4) / 8.0);
  EXPECT_DOUBLE_EQ(PowerSeries::cosh().plus(PowerSeries::constant(1.0))[0], 2.0);
  EXPECT_DOUBLE_EQ(PowerSeries::cosh().scaled(3.0)[2], 1.5);
}

TEST(CoordinateFunctionTest, TruncationExamples) {
  const auto f = hq::wallis_sum(kUnit);
  EXPECT_DOUBLE_EQ(f(std::vector<double>{1.0, 1.0}), 1.25);
  const auto c = CoordinateFunction::constant(3.5, kUnit);
  for (std::size_t n : {1u, 4u, 100u}) EXPECT_EQ(c(std::vector<double>(n, 0.3)), 3.5);
  const auto e1 = hq::sec9_ex1(kUnit);
  EXPECT_DOUBLE_EQ(e1(std::vector<double>{1.0}), 1.0);
}

TEST(CoordinateFunctionTest, ExpressionAndCatalogAgree) {
  const auto a = CoordinateFunction::from_expression("sum(i,1,inf, x[i]/i^2)", kWallis);
  const auto b = hq::wallis_sum(kWallis);
  for (std::size_t n : {1u, 3u, 17u}) {
    const auto x = head(n);
    EXPECT_NEAR(a(x), b(x), 1e-15);
  }
  const auto c = CoordinateFunction::from_expression("1/(2 - prod(n,1,inf, x[n]^(1/n^2)))", kUnit);
  const auto d = hq::sec9_ex1(kUnit);
  for (std::size_t n : {1u, 5u, 40u}) {
    const auto x = head(n);
    EXPECT_NEAR(c(x), d(x), 1e-14);
  }
}

TEST(CoordinateFunctionTest, StructureIsRecognized) {
  const auto sum = hq::expr::parse("sum(i,1,inf, x[i]/i^2)");
  const auto s = hq::recognize_structure(sum);
  ASSERT_TRUE(s.has_value());
  ASSERT_EQ(s->terms.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<hq::SeparableSum>(s->terms.front().second->form));

  const auto prod = hq::expr::parse("1/(2 - prod(n,1,inf, x[n]^(1/n^2)))");
  const auto p = hq::recognize_structure(prod);
  ASSERT_TRUE(p.has_value());
  ASSERT_EQ(p->terms.size(), 1u);
  const auto* pf = std::get_if<hq::ProductForm>(&p->terms.front().second->form);
  ASSERT_NE(pf, nullptr);
  EXPECT_DOUBLE_EQ(pf->psi[3], 1.0 / 16.0);
  ASSERT_TRUE(pf->exponent);
  EXPECT_DOUBLE_EQ(pf->exponent(3), 1.0 / 9.0);

  EXPECT_FALSE(hq::recognize_structure(hq::expr::parse("x[1]*x[2]")).has_value());
}

TEST(CoordinateFunctionTest, ArithmeticAndDomains) {
  const auto f = hq::wallis_sum(kUnit);
  const auto g = CoordinateFunction::constant(1.0, kUnit);
  const auto x = head(6);
  EXPECT_DOUBLE_EQ((f + g)(x), f(x) + 1.0);
  EXPECT_DOUBLE_EQ((-2.0 * f)(x), -2.0 * f(x));
  EXPECT_DOUBLE_EQ(hq::abs(-1.0 * f)(x), f(x));
  try {
    (void)(f + hq::wallis_sum(kWallis));
    FAIL() << "expected DomainMismatch";
  } catch (const hq::Error& e) {
    EXPECT_EQ(e.code(), hq::ErrorCode::DomainMismatch);
  }
}

TEST(CoordinateFunctionTest, DeclaredRangeEnclosesSamples) {
  for (const auto& f : {hq::wallis_sum(kWallis), hq::sec9_ex1(kUnit), hq::sec9_ex2(kUnit)}) {
    ASSERT_TRUE(f.range().has_value()) << f.description();
    for (std::size_t s = 0; s < 200; ++s) {
      const auto x = hq::sample_point(f.domain(), s, 32, s % 2 ? hq::Sheet::Upper : hq::Sheet::Zero,
                                      64);
      const double v = f(x);
      EXPECT_GE(v, f.range()->lo - 1e-12) << f.description();
      EXPECT_LE(v, f.range()->hi + 1e-12) << f.description();
    }
  }
}

TEST(Truncations, HatEqualsTildeBitForBit) {
  const auto seq = DeltaSequence::regular(hq::sec9_ex1(kUnit));
  for (std::size_t n : {1u, 2u, 7u, 30u}) {
    const auto t = hq::tilde(seq, n);
    const auto h = hq::hat(seq, n);
    EXPECT_EQ(h.dim(), n);
    for (std::size_t s = 0; s < 50; ++s) {
      auto x = hq::sample_point(seq.domain(), s, 40, hq::Sheet::Upper, 40);
      const std::vector<double> first(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
      EXPECT_EQ(t(x), h(first));
    }
  }
}

TEST(Truncations, HatRejectsOtherDimensions) {
  const auto h = hq::hat(DeltaSequence::regular(hq::wallis_sum(kUnit)), 3);
  EXPECT_THROW(h(std::vector<double>{0.1, 0.2}), hq::Error);
  EXPECT_THROW(h(std::vector<double>{0.1, 0.2, 0.3, 0.4}), hq::Error);
}

TEST(Truncations, TildeZeroesTrailingCoordinates) {
  const auto seq = DeltaSequence::regular(hq::wallis_sum(kUnit));
  const auto t2 = hq::tilde(seq, 2);
  EXPECT_DOUBLE_EQ(t2(std::vector<double>{1.0, 1.0, 1.0, 1.0}), 1.25);
}

TEST(DeltaCauchy, WallisSumPassesWithinDisplayedBound) {
  const auto seq = DeltaSequence::regular(hq::wallis_sum(kWallis));
  // ε = 1e-3 needs levels past (4/3)·10³, so the default ladder is kept.
  SampleBudget budget;
  budget.points = 256;
  budget.dim_cap = 16;
  const auto rep = hq::check_delta_cauchy(seq, budget);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  ASSERT_EQ(rep.level_gaps.size(), rep.ladder.size());
  for (std::size_t j = 0; j < rep.ladder.size(); ++j) {
    double tail = 0.0;
    for (std::size_t i = rep.ladder[j] + 1; i <= budget.ladder_max; ++i) {
      tail += 1.0 / (static_cast<double>(i) * static_cast<double>(i));
    }
    EXPECT_LE(rep.level_gaps[j], 4.0 / 3.0 * tail * (1.0 + 1e-12) + 1e-15) << rep.ladder[j];
  }
}

TEST(DeltaCauchy, ZeroSequencePassesImmediately) {
  const auto seq = DeltaSequence::regular(CoordinateFunction::constant(0.0, kUnit));
  const auto rep = hq::check_delta_cauchy(seq, small_budget());
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  for (double g : rep.level_gaps) EXPECT_EQ(g, 0.0);
  for (const auto& o : rep.outcomes) {
    ASSERT_TRUE(o.N.has_value());
    EXPECT_EQ(*o.N, 1u);
  }
}

TEST(DeltaCauchy, AlternatingSequenceFailsWithWitness) {
  const auto x1 = CoordinateFunction::from_expression("x[1]", kUnit);
  const auto seq = hq::alternating_sequence(x1);
  const auto rep = hq::check_delta_cauchy(seq, small_budget());
  EXPECT_EQ(rep.verdict, Verdict::Fail);
  bool witnessed = false;
  for (const auto& o : rep.outcomes) {
    if (o.witness) {
      witnessed = true;
      EXPECT_NEAR(o.witness->gap, 1.0, 1e-15);
    }
  }
  EXPECT_TRUE(witnessed);
}

TEST(DeltaCauchy, VerdictMatchesUniformCheck) {
  const auto x1 = CoordinateFunction::from_expression("x[1]", kUnit);
  const std::vector<DeltaSequence> seqs{
      DeltaSequence::regular(hq::wallis_sum(kWallis)),
      DeltaSequence::regular(hq::sec9_ex1(kUnit)),
      hq::perturbed_sequence(hq::sec9_ex2(kUnit)),
      hq::alternating_sequence(x1),
  };
  for (const auto& s : seqs) {
    const auto c = hq::check_delta_cauchy(s, small_budget());
    const auto u = hq::check_delta_uniform(s, small_budget());
    EXPECT_EQ(c.verdict, u.verdict) << s.description();
  }
}

TEST(Combinators, SumScaleAbs) {
  const auto f = DeltaSequence::regular(hq::wallis_sum(kUnit));
  const auto zero = DeltaSequence::regular(CoordinateFunction::constant(0.0, kUnit));
  const auto x = head(10);
  for (std::size_t n : {1u, 4u, 10u}) {
    const auto fx = hq::tilde(f, n)(x);
    EXPECT_DOUBLE_EQ(hq::tilde(hq::combine_sum(f, zero), n)(x), fx);
    EXPECT_DOUBLE_EQ(hq::tilde(hq::combine_sum(f, hq::combine_scale(-1.0, f)), n)(x), 0.0);
    EXPECT_DOUBLE_EQ(hq::tilde(hq::combine_scale(1.0, f), n)(x), fx);
    EXPECT_DOUBLE_EQ(hq::tilde(hq::combine_scale(0.0, f), n)(x), 0.0);
    EXPECT_DOUBLE_EQ(hq::tilde(hq::combine_abs(hq::combine_scale(-1.0, f)), n)(x), fx);
  }
}

TEST(Combinators, AbsIsContractive) {
  const auto seq = hq::combine_sum(DeltaSequence::regular(hq::sec9_ex1(kUnit)),
                                   DeltaSequence::regular(CoordinateFunction::constant(-0.8, kUnit)));
  const auto a = hq::combine_abs(seq);
  for (std::size_t s = 0; s < 100; ++s) {
    const auto x = hq::sample_point(seq.domain(), s, 32, hq::Sheet::Upper, 64);
    for (auto [n, m] : {std::pair{1u, 2u}, std::pair{2u, 8u}, std::pair{5u, 64u}}) {
      const double lhs = std::abs(hq::tilde(a, n)(x) - hq::tilde(a, m)(x));
      const double rhs = std::abs(hq::tilde(seq, n)(x) - hq::tilde(seq, m)(x));
      EXPECT_LE(lhs, rhs);
    }
  }
}

TEST(Combinators, LipschitzComposition) {
  const auto base = DeltaSequence::regular(hq::wallis_sum(kUnit));

  hq::LipschitzMap id{[](double t) { return t; }, 1.0, "id", std::nullopt, std::nullopt};
  const auto same = hq::compose_lipschitz(id, base);
  const auto x = head(12);
  EXPECT_DOUBLE_EQ(hq::tilde(same, 12)(x), hq::tilde(base, 12)(x));

  hq::LipschitzMap twice{[](double t) { return 2.0 * t; }, 2.0, "2t", std::nullopt, std::nullopt};
  const auto doubled = hq::compose_lipschitz(twice, base);
  for (std::size_t s = 0; s < 100; ++s) {
    const auto p = hq::sample_point(base.domain(), s, 32, hq::Sheet::Upper, 64);
    const double g = std::abs(hq::tilde(doubled, 3)(p) - hq::tilde(doubled, 40)(p));
    const double f = std::abs(hq::tilde(base, 3)(p) - hq::tilde(base, 40)(p));
    EXPECT_LE(g, 2.0 * f * (1.0 + 1e-15));
  }
}

TEST(Combinators, CoshOfProductIsSecondExample) {
  const auto inner = CoordinateFunction::from_expression("prod(n,1,inf, x[n]^(1/2^n))", kUnit);
  hq::LipschitzMap g{[](double t) { return std::cosh(t); }, std::sinh(1.0), "cosh",
                     hq::Interval{0.0, 1.0}, PowerSeries::cosh()};
  const auto composed = hq::compose_lipschitz(g, DeltaSequence::regular(inner));
  const auto ex2 = hq::sec9_ex2(kUnit);
  for (std::size_t n : {1u, 6u, 30u}) {
    const auto x = head(n);
    EXPECT_NEAR(hq::tilde(composed, n)(x), ex2(x), 1e-14);
  }
}

TEST(Combinators, ModulusViolationIsReported) {
  const auto base = DeltaSequence::regular(hq::wallis_sum(kUnit));
  hq::LipschitzMap liar{[](double t) { return 10.0 * t; }, 1.0, "10t", std::nullopt, std::nullopt};
  try {
    (void)hq::compose_lipschitz(liar, base);
    FAIL() << "expected ModulusViolated";
  } catch (const hq::Error& e) {
    EXPECT_EQ(e.code(), hq::ErrorCode::ModulusViolated);
  }
  hq::LipschitzMap narrow{[](double t) { return t; }, 1.0, "id", hq::Interval{0.0, 0.1},
                          std::nullopt};
  EXPECT_THROW((void)hq::compose_lipschitz(narrow, base), hq::Error);
}

TEST(Sampling, SheetsAndLadder) {
  const auto& w = *kWallis;
  const auto zero = hq::sample_point(w, 5, 4, hq::Sheet::Zero, 10);
  const auto upper = hq::sample_point(w, 5, 4, hq::Sheet::Upper, 10);
  ASSERT_EQ(zero.size(), 10u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(zero[i], upper[i]);
    EXPECT_GE(zero[i], 0.0);
    EXPECT_LE(zero[i], w.side(i + 1));
  }
  for (std::size_t i = 4; i < 10; ++i) {
    EXPECT_EQ(zero[i], 0.0);
    EXPECT_DOUBLE_EQ(upper[i], w.side(i + 1));
  }
  const auto ladder = hq::sampling_ladder(16);
  const std::vector<std::size_t> expected{1, 2, 3, 4, 5, 8, 9, 16};
  EXPECT_EQ(ladder, expected);
}
