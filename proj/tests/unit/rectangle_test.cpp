#include "hq/rectangle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hq/error.hpp"
#include "oracles.hpp"

using hq::ConvergentRectangle;
using hq::TailRule;
using hq::VolumeClass;

namespace {

ConvergentRectangle rect(std::string_view name) {
  auto r = hq::catalog_rectangle(name);
  EXPECT_TRUE(r.has_value()) << name;
  return *r;
}

}  // namespace

TEST(Volume, HilbertCubeIsExactlyOne) {
  const auto report = hq::volume(rect("unit"));
  EXPECT_EQ(report.classification, VolumeClass::NonDegenerate);
  ASSERT_TRUE(report.value);
  EXPECT_EQ(*report.value, 1.0);
}

TEST(Volume, WallisIsHalfPi) {
  const auto report = hq::volume(rect("wallis"));
  EXPECT_EQ(report.classification, VolumeClass::NonDegenerate);
  ASSERT_TRUE(report.value);
  EXPECT_NEAR(*report.value, oracle::kHalfPi, 1e-12);
}

TEST(Volume, ConstantHalfIsDegenerate) {
  const auto report = hq::volume(rect("degenerate_half"));
  EXPECT_EQ(report.classification, VolumeClass::Degenerate);
  EXPECT_EQ(report.value.value_or(-1.0), 0.0);
}

TEST(Volume, ConstantTwoIsDivergent) {
  const auto r = hq::parse_rectangle("tail: 2");
  EXPECT_EQ(r.volume_class(), VolumeClass::Divergent);
  EXPECT_FALSE(r.classification().value.has_value());
}

TEST(Volume, NumericWallisMatchesAnalyticTail) {
  // Same sides through the expression path, no closed form attached.
  hq::VolumeConfig cfg;
  cfg.tol = 1e-12;
  const auto numeric = hq::parse_rectangle("tail: 4*i^2/(4*i^2 - 1)", cfg);
  ASSERT_TRUE(numeric.classification().value);
  EXPECT_FALSE(numeric.classification().analytic);
  EXPECT_NEAR(*numeric.classification().value, oracle::kHalfPi, 10.0 * 1e-10);
}

TEST(Volume, PrefixExtensionIsRepresentationInvariant) {
  // Moving the first three Wallis factors into the prefix leaves the volume.
  const std::vector<double> prefix{oracle::wallis_side(1), oracle::wallis_side(2),
                                   oracle::wallis_side(3)};
  const auto shifted = hq::infinite_product(prefix, [](std::size_t i) {
    return oracle::wallis_side(i);
  });
  ASSERT_TRUE(shifted.value);
  EXPECT_NEAR(*shifted.value, oracle::kHalfPi, 1e-9);

  const auto prefixed = hq::parse_rectangle("prefix: 2, 0.5, 3; tail: 1");
  ASSERT_TRUE(prefixed.classification().value);
  EXPECT_DOUBLE_EQ(*prefixed.classification().value, 3.0);
}

TEST(Volume, RejectsNonPositiveFactors) {
  try {
    hq::infinite_product(std::vector<double>{1.0, 0.0}, [](std::size_t) { return 1.0; });
    FAIL() << "expected NonPositiveBound";
  } catch (const hq::Error& e) {
    EXPECT_EQ(e.code(), hq::ErrorCode::NonPositiveBound);
  }
  EXPECT_THROW(TailRule::constant(-1.0), hq::Error);
}

TEST(Volume, DegenerateProductDoesNotUnderflowIntoNan) {
  const auto report = hq::infinite_product({}, [](std::size_t) { return 1e-200; });
  EXPECT_EQ(report.classification, VolumeClass::Degenerate);
  EXPECT_EQ(report.value.value_or(-1.0), 0.0);
}

TEST(Volume, DegeneratePartialProductsShrink) {
  const auto r = rect("degenerate_half");
  double prev = r.partial_volume(1);
  for (std::size_t n = 2; n <= 40; ++n) {
    const double p = r.partial_volume(n);
    EXPECT_LT(p, prev);
    EXPECT_DOUBLE_EQ(p, std::ldexp(1.0, -static_cast<int>(n)));
    prev = p;
  }
}

TEST(Series, MatchesBaselSum) {
  const auto s = hq::infinite_series(1, [](std::size_t i) {
    return 1.0 / (static_cast<double>(i) * static_cast<double>(i));
  });
  ASSERT_TRUE(s.value);
  EXPECT_NEAR(*s.value, oracle::kPi * oracle::kPi / 6.0, 1e-9);
}

TEST(TailBound, UnitCubeIsZero) {
  const auto u = rect("unit");
  for (std::size_t n : {1u, 5u, 100u}) {
    EXPECT_EQ(hq::tail_product_bound(u, n, n + 17), 0.0);
  }
}

TEST(TailBound, WallisTenToTwenty) {
  const auto w = rect("wallis");
  const double got = hq::tail_product_bound(w, 10, 20);
  EXPECT_GT(got, 0.0);
  EXPECT_LT(got, 0.03);
  EXPECT_NEAR(got, oracle::wallis_range_product(10, 20) - 1.0, 1e-14);

  double prev = got;
  for (std::size_t n = 11; n <= 19; ++n) {
    const double b = hq::tail_product_bound(w, n, 20);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(TailBound, SingleFactor) {
  const auto w = rect("wallis");
  for (std::size_t n : {1u, 2u, 7u, 50u}) {
    const double q = 4.0 * static_cast<double>(n) * static_cast<double>(n);
    EXPECT_NEAR(hq::tail_product_bound(w, n, n), 1.0 / (q - 1.0), 1e-15);
  }
}

TEST(TailBound, LemmaGridScan) {
  // For every ε there is an N past which all tail products stay within ε.
  const auto w = rect("wallis");
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    std::size_t N = 1;
    while (hq::tail_product_bound(w, N + 1, 1'000'000) >= eps) N *= 2;
    for (std::size_t n = N + 1; n < N + 200; n += 13) {
      for (std::size_t m = n; m < n + 5000; m += 397) {
        EXPECT_LT(hq::tail_product_bound(w, n, m), eps) << n << "," << m;
      }
    }
  }
}

TEST(TailBound, RefusesDegenerateRectangles) {
  try {
    hq::tail_product_bound(rect("degenerate_half"), 2, 4);
    FAIL() << "expected DegenerateRectangle";
  } catch (const hq::Error& e) {
    EXPECT_EQ(e.code(), hq::ErrorCode::DegenerateRectangle);
  }
}

TEST(Catalog, BuiltinNames) {
  const auto all = hq::builtin_catalog();
  ASSERT_EQ(all.size(), 3u);
  EXPECT_TRUE(rect("unit").is_unit());
  EXPECT_FALSE(rect("wallis").is_unit());
  EXPECT_DOUBLE_EQ(rect("wallis").side(1), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(rect("wallis").side(2), 16.0 / 15.0);
  EXPECT_DOUBLE_EQ(rect("degenerate_half").side(9), 0.5);
  EXPECT_FALSE(hq::catalog_rectangle("nope").has_value());
}

TEST(Catalog, ParseRectangleAcceptsNamesAndTails) {
  EXPECT_TRUE(hq::parse_rectangle("wallis").same_sides(rect("wallis")));
  EXPECT_TRUE(hq::parse_rectangle("tail: 1").is_unit());
  EXPECT_THROW(hq::parse_rectangle("tail: x[1]"), hq::Error);
  EXPECT_THROW(hq::parse_rectangle("prefix: 1, 2 tail: 1"), hq::Error);
}
