#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cesradon/error.hpp"
#include "cesradon/log_grid.hpp"
#include "cesradon/parallel.hpp"
#include "cesradon/quadrature.hpp"
#include "cesradon/sample_cache.hpp"
#include "gen.hpp"
#include "region.hpp"

using namespace cesradon;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Integrate, Polynomials) {
  const QuadOptions opt{1e-12, 1e-12};
  const auto r = integrate([](double x) { return x * x * x; }, 0.0, 2.0, opt);
  EXPECT_NEAR(r.value, 4.0, 1e-13);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.evaluations, 21u);
}

TEST(Integrate, SemiInfinite) {
  const QuadOptions opt{1e-13, 1e-13};
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, kInf, opt).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, 0.0, kInf, opt).value,
              0.5 * std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 1.0, kInf, opt).value,
              0.25 * std::numbers::pi, 1e-12);
}

TEST(Integrate, EndpointSingularity) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, QuadOptions{1e-8, 1e-8});
  EXPECT_NEAR(r.value, 2.0, 2e-8);
  EXPECT_TRUE(r.converged);
}

TEST(Integrate, BreakpointsResolveJumps) {
  auto step = [](double x) { return x < 0.3141 ? 1.0 : 3.0; };
  const double bp[1] = {0.3141};
  const auto r = integrate(step, 0.0, 1.0, QuadOptions{1e-12, 1e-12}, bp);
  EXPECT_NEAR(r.value, 0.3141 + 3.0 * (1.0 - 0.3141), 1e-13);
  EXPECT_EQ(r.evaluations, 42u);
}

TEST(Integrate, EmptyOrReversedInterval) {
  const auto r = integrate([](double) { return 1.0; }, 1.0, 1.0, QuadOptions{});
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 1.0, QuadOptions{}).value, 0.0);
}

TEST(Integrate, BudgetExhaustionIsReported) {
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  const auto r = integrate(wild, 0.0, 1.0, QuadOptions{1e-15, 1e-15, 2000});
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.evaluations, 2000u);
}

TEST(Integrate, ComplexBatch) {
  // int_0^inf e^{-x} e^{i w x} dx = 1 / (1 - i w)
  const double w = 2.5;
  auto f = [w](std::span<const double> xs, std::span<std::complex<double>> ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::exp(std::complex<double>(-xs[i], w * xs[i]));
  };
  const auto r = integrate_batch<std::complex<double>>(f, 0.0, kInf, QuadOptions{1e-12, 1e-12});
  EXPECT_LT(std::abs(r.value - 1.0 / std::complex<double>(1.0, -w)), 1e-11);
}

TEST(Integrate, PropertyMonomials) {
  gen::for_all(31, 100, [](gen::Gen& g, int i) {
    const double k = g.uniform(0.0, 6.0), b = g.uniform(0.1, 5.0);
    const auto r = integrate([k](double x) { return std::pow(x, k); }, 0.0, b, QuadOptions{1e-13, 1e-12});
    const double expect = std::pow(b, k + 1.0) / (k + 1.0);
    EXPECT_NEAR(r.value, expect, 1e-11 * (1.0 + expect)) << "case " << i;
  });
}

TEST(Region, TriangleArea) {
  detail::RegionProblem P;
  P.n = 2;
  P.limits = [](std::size_t k, std::span<const double> prefix, double& lo, double& hi, std::vector<double>& br) {
    br.clear();
    lo = 0.0;
    hi = k == 0 ? 1.0 : 1.0 - prefix[0];
  };
  P.inner = [](std::span<const double> prefix, std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = prefix[0] * xs[i];
  };
  const auto r = detail::integrate_region(P, QuadOptions{1e-14, 1e-13});
  EXPECT_NEAR(r.value, 1.0 / 24.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(Region, QuarterDisc) {
  detail::RegionProblem P;
  P.n = 2;
  P.limits = [](std::size_t k, std::span<const double> prefix, double& lo, double& hi, std::vector<double>& br) {
    br.clear();
    lo = 0.0;
    hi = k == 0 ? 1.0 : std::sqrt(std::max(0.0, 1.0 - prefix[0] * prefix[0]));
  };
  P.inner = [](std::span<const double>, std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 1.0;
  };
  EXPECT_NEAR(detail::integrate_region(P, QuadOptions{1e-12, 1e-12}).value, 0.25 * std::numbers::pi, 1e-11);
}

TEST(LogGridTest, Validation) {
  EXPECT_THROW(LogGrid({GridAxis{0.0, 1.0, 12}}), Error);
  EXPECT_THROW(LogGrid({GridAxis{1.0, 0.0, 16}}), Error);
  EXPECT_THROW(LogGrid({GridAxis{0.0, 1.0, 4}}), Error);
  EXPECT_THROW(LogGrid({GridAxis{0.0, 1.0, 16}, GridAxis{0.0, 1.0, 32}}), Error);
  EXPECT_NO_THROW(LogGrid({GridAxis{0.0, 1.0, 16}, GridAxis{-2.0, 1.0, 16}}));
}

TEST(LogGridTest, FlatIndexing) {
  const LogGrid g = LogGrid::uniform(2, -1.0, 1.0, 8);
  EXPECT_EQ(g.size(), 64u);
  std::vector<std::size_t> idx;
  g.unflatten(8 * 3 + 5, idx);
  EXPECT_EQ(idx, (std::vector<std::size_t>{3, 5}));
  std::vector<double> u;
  g.coords(63, u);
  EXPECT_EQ(u, (std::vector<double>{1.0, 1.0}));
  g.coords(0, u);
  EXPECT_EQ(u, (std::vector<double>{-1.0, -1.0}));
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(SampleCacheTest, RoundTripAndKeyMismatch) {
  const auto dir = std::filesystem::temp_directory_path() / "cesradon_cache_test";
  std::filesystem::remove_all(dir);
  SampleCache cache(dir);
  const std::vector<double> v{1.0, -2.5, 1e-300, 3.0};
  cache.store("key-a", v);
  EXPECT_EQ(cache.load("key-a", 4), v);
  EXPECT_FALSE(cache.load("key-a", 5).has_value());
  EXPECT_FALSE(cache.load("key-b", 4).has_value());
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  std::filesystem::remove_all(dir);
}
