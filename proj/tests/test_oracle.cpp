#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cesradon/error.hpp"
#include "cesradon/oracle.hpp"
#include "cesradon/parallel.hpp"
#include "cesradon/special.hpp"
#include "gen.hpp"

using namespace cesradon;
using namespace cesradon::oracle;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Philox, KnownAnswerZeroKeyZeroCounter) {
  // Random123 reference vector for philox4x32-10
  const auto b = SeededSampler::block(0, 0, 0);
  EXPECT_EQ(b[0], 0x6627e8d5u);
  EXPECT_EQ(b[1], 0xe169c58du);
  EXPECT_EQ(b[2], 0xbc57ac4cu);
  EXPECT_EQ(b[3], 0x9b00dbd8u);
}

TEST(Philox, StreamsAndIndicesDiffer) {
  EXPECT_NE(SeededSampler::block(1, 0, 0), SeededSampler::block(1, 1, 0));
  EXPECT_NE(SeededSampler::block(1, 0, 0), SeededSampler::block(1, 0, 1));
  EXPECT_NE(SeededSampler::block(1, 0, 0), SeededSampler::block(2, 0, 0));
  EXPECT_EQ(SeededSampler::block(7, 123, 4), SeededSampler::block(7, 123, 4));
}

TEST(Philox, UniformsInRangeWithSaneMoments) {
  SeededSampler s(42);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
  SeededSampler t(42);
  EXPECT_EQ(t.uniform(), SeededSampler::uniforms(42, 0)[0]);
  EXPECT_EQ(t.uniform(), SeededSampler::uniforms(42, 0)[1]);
}

TEST(MonteCarlo, UnitSquareProfit) {
  const McRegion region{{0.0, 0.0}, {1.0, 1.0}, PricePoint({1.0, 1.0}, 1.0), Alpha::one()};
  auto f = [](std::span<const double> x) { return 1.0 - x[0] - x[1]; };
  const McResult r = mc_integrate(f, region, 1 << 18, 5);
  EXPECT_NEAR(r.estimate, 1.0 / 6.0, 3.0 * r.std_error);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_LT(r.std_error, 1e-3);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  const McRegion region{{0.0, 0.0}, {2.0, 1.0}, std::nullopt, Alpha::one()};
  auto f = [](std::span<const double> x) { return std::exp(-x[0] * x[1]); };
  const unsigned before = max_threads();
  set_max_threads(1);
  const McResult a = mc_integrate(f, region, 50000, 11);
  set_max_threads(4);
  const McResult b = mc_integrate(f, region, 50000, 11);
  set_max_threads(before);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(mc_integrate(f, region, 50000, 12).estimate, a.estimate);
}

TEST(NestedQuadrature, FiniteAndInfiniteBounds) {
  auto tri = [](std::size_t k, std::span<const double> prefix) {
    return std::pair<double, double>{0.0, k == 0 ? 1.0 : 1.0 - prefix[0]};
  };
  EXPECT_NEAR(nested_quadrature([](std::span<const double> x) { return x[0] * x[1]; }, 2, tri), 1.0 / 24.0, 1e-13);
  auto orthant = [](std::size_t, std::span<const double>) { return std::pair<double, double>{0.0, kInf}; };
  EXPECT_NEAR(nested_quadrature([](std::span<const double> x) { return std::exp(-x[0] - 2.0 * x[1]); }, 2, orthant),
              0.5, 1e-10);
  auto line = [](std::size_t, std::span<const double>) { return std::pair<double, double>{-kInf, kInf}; };
  EXPECT_NEAR(nested_quadrature([](std::span<const double> x) { return std::exp(-x[0] * x[0]); }, 1, line),
              std::sqrt(std::numbers::pi), 1e-10);
}

TEST(FiniteDifference, RichardsonImproves) {
  auto f = [](double x) { return std::sin(x); };
  const double plain = std::abs(finite_difference(f, 1.0, 1, 0.1, false) - std::cos(1.0));
  const double rich = std::abs(finite_difference(f, 1.0, 1, 0.1, true) - std::cos(1.0));
  EXPECT_LT(rich, 0.01 * plain);
  EXPECT_NEAR(finite_difference(f, 1.0, 2, 1e-3, true), -std::sin(1.0), 1e-8);
  EXPECT_THROW(finite_difference(f, 1.0, 3, 0.1, false), Error);
}

TEST(DirectMellin, ExponentialClosedForm) {
  const UnitProfit pi = [](std::span<const double> p) { return exp_profit(p[0], 1.0); };
  const std::complex<double> half[1] = {0.5};
  const auto v = direct_mellin(pi, half, Alpha::one(), 1e-11);
  EXPECT_NEAR(v.real(), 4.0 * std::sqrt(std::numbers::pi) / 3.0, 1e-9);
  EXPECT_NEAR(v.imag(), 0.0, 1e-10);
  gen::for_all(81, 6, [&](gen::Gen& g, int i) {
    const std::complex<double> t[1] = {{g.uniform(0.3, 0.7), g.uniform(-3.0, 3.0)}};
    const std::complex<double> expect = std::exp(log_gamma(t[0])) / ((1.0 - t[0]) * (2.0 - t[0]));
    EXPECT_LT(std::abs(direct_mellin(pi, t, Alpha::one(), 1e-11) - expect), 1e-8) << "case " << i;
  });
}

TEST(ClosedForms, ExponentialProfitAndMass) {
  // series branch for tiny p0/p must join the direct formula smoothly
  const double p = 1.0;
  for (double p0 : {0.5e-3, 0.99e-3, 1.01e-3, 2e-3}) {
    const double r = p0 / p;
    const double direct = p0 - p * (1.0 - std::exp(-r));
    EXPECT_NEAR(exp_profit(p, p0), direct, 1e-15) << p0;
  }
  EXPECT_NEAR(exp_profit(2.0, 3.0), 3.0 - 2.0 * (1.0 - std::exp(-1.5)), 1e-15);
  EXPECT_NEAR(exp_sublevel_mass(2.0, 3.0), 1.0 - std::exp(-1.5), 1e-15);
}

TEST(ClosedForms, BetaIntegralOneDimension) {
  gen::for_all(82, 50, [](gen::Gen& g, int i) {
    const double a = g.uniform(0.1, 1.0), t = g.uniform(-0.9, 0.95);
    const double ts[1] = {t};
    const double w = a * (1.0 - t);
    EXPECT_NEAR(beta_integral_closed(ts, a), a / (w * (w + 1.0)), 1e-12 * a / (w * (w + 1.0))) << "case " << i;
  });
}
