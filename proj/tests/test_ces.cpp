#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cesradon/ces.hpp"
#include "cesradon/error.hpp"
#include "gen.hpp"

using namespace cesradon;

TEST(Alpha, RejectsOutsideUnitInterval) {
  EXPECT_THROW(Alpha(0.0), Error);
  EXPECT_THROW(Alpha(1.5), Error);
  EXPECT_THROW(Alpha(std::nan("")), Error);
  EXPECT_NO_THROW(Alpha(1e-3));
  EXPECT_TRUE(Alpha(1.0).is_one());
}

TEST(PricePoint, Validation) {
  EXPECT_THROW(PricePoint({0.0, 0.0}, 1.0), Error);
  EXPECT_THROW(PricePoint({1.0}, 0.0), Error);
  EXPECT_THROW(PricePoint({-1.0}, 1.0), Error);
  EXPECT_THROW(PricePoint({}, 1.0), Error);
  EXPECT_NO_THROW(PricePoint({0.0, 2.0}, 1.0));
  EXPECT_FALSE(PricePoint({0.0, 2.0}, 1.0).strictly_positive());
}

TEST(CesDot, LinearWhenAlphaIsOne) {
  const double p[3] = {1.0, 2.0, 3.0};
  const double x[3] = {0.5, 0.25, 1.0};
  EXPECT_DOUBLE_EQ(ces_dot(p, x, Alpha::one()), 0.5 + 0.5 + 3.0);
}

TEST(CesDot, KnownValue) {
  // (1 + 1)^2 with alpha = 1/2 and unit entries
  EXPECT_NEAR(ces_sum(1.0, 1.0, Alpha(0.5)), 4.0, 1e-14);
  EXPECT_NEAR(ces_sum(4.0, 9.0, Alpha(0.5)), 25.0, 1e-13);
}

TEST(CesDot, DimensionMismatch) {
  const double p[2] = {1.0, 1.0};
  const double x[1] = {1.0};
  try {
    ces_dot(p, x, Alpha::one());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(CesDot, TinyAlphaDoesNotOverflow) {
  const double p[2] = {1.0, 1.0};
  const double x[2] = {1e10, 2e10};
  const double v = ces_dot(p, x, Alpha(0.01));
  EXPECT_TRUE(std::isfinite(v));
  // (1 + 2^0.01)^100 * 1e10
  EXPECT_NEAR(v / 1e10, std::pow(1.0 + std::pow(2.0, 0.01), 100.0), 1e-9 * v / 1e10);
}

TEST(CesDot, Properties) {
  gen::for_all(11, 200, [](gen::Gen& g, int i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 4));
    const Alpha a(g.uniform(0.1, 1.0));
    const auto p = g.vec(n, 0.0, 3.0);
    const auto x = g.vec(n, 0.0, 3.0);
    const double v = ces_dot(p, x, a);
    // degree-1 homogeneous in x and in p
    const double l = g.log_uniform(0.01, 100.0);
    std::vector<double> lx(x), lp(p);
    for (double& t : lx) t *= l;
    for (double& t : lp) t *= l;
    EXPECT_NEAR(ces_dot(p, lx, a), l * v, 1e-12 * (1.0 + l * v)) << "case " << i;
    EXPECT_NEAR(ces_dot(lp, x, a), l * v, 1e-12 * (1.0 + l * v)) << "case " << i;
    // max y <= sum y <= (sum y^a)^(1/a) <= n^(1/a - 1) sum y for a <= 1
    double lin = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      lin += p[k] * x[k];
      mx = std::max(mx, p[k] * x[k]);
    }
    EXPECT_GE(v, lin * (1.0 - 1e-12)) << "case " << i;
    EXPECT_GE(v, mx * (1.0 - 1e-12)) << "case " << i;
    EXPECT_LE(v, std::pow(static_cast<double>(n), 1.0 / a.value() - 1.0) * lin * (1.0 + 1e-12) + 1e-300) << "case " << i;
  });
}

TEST(Sublevel, IndicatorIncludesLevelSurface) {
  const PricePoint pp({1.0, 1.0}, 2.0);
  const double on[2] = {1.0, 1.0};
  const double out[2] = {1.5, 1.0};
  EXPECT_TRUE(sublevel_indicator(pp, on, Alpha::one()));
  EXPECT_FALSE(sublevel_indicator(pp, out, Alpha::one()));
}

TEST(Sublevel, Bounds) {
  const PricePoint pp({2.0, 0.0}, 4.0);
  EXPECT_DOUBLE_EQ(level_bound(pp, Alpha(0.5), 0), 2.0);
  EXPECT_TRUE(std::isinf(level_bound(pp, Alpha(0.5), 1)));
  EXPECT_THROW(level_bound(pp, Alpha(0.5), 2), Error);
  // remaining bound solves partial + (price x)^a = p0^a
  const Alpha a(0.5);
  const double x = remaining_bound(4.0, 1.0, 2.0, a);
  EXPECT_NEAR(1.0 + std::sqrt(2.0 * x), 2.0, 1e-14);
  EXPECT_EQ(remaining_bound(1.0, 5.0, 1.0, a), 0.0);
  EXPECT_EQ(remaining_bound(1.0, 5.0, 1.0, Alpha::one()), 0.0);
  EXPECT_TRUE(std::isinf(remaining_bound(1.0, 0.0, 0.0, a)));
}
