#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <vector>

#include "cesradon/simd.hpp"
#include "gen.hpp"

using namespace cesradon;

namespace {

bool have_avx2() { return simd::isa_available(simd::Isa::Avx2); }

double rel(double a, double b) {
  if (a == b) return 0.0;
  if (std::isnan(a) && std::isnan(b)) return 0.0;
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
}

// lengths around the 4-lane boundary and a longer run
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 9, 31, 64, 1000};

}  // namespace

TEST(Simd, ScalarOverrideIsHonoured) {
  simd::set_isa_override(simd::Isa::Scalar);
  EXPECT_EQ(simd::active_isa(), simd::Isa::Scalar);
  simd::set_isa_override(std::nullopt);
  if (have_avx2() && !std::getenv("CESRADON_SIMD")) {
    EXPECT_EQ(simd::active_isa(), simd::Isa::Avx2);
  }
}

TEST(Simd, ExpScaledMatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  gen::Gen g(3);
  for (std::size_t n : kLengths) {
    std::vector<double> x = g.vec(n, -750.0, 720.0);
    if (n > 4) {
      x[0] = 0.0;
      x[1] = -0.0;
      x[2] = 1e-300;
      x[3] = -1e-17;
    }
    std::vector<double> a(n), b(n);
    for (double s : {1.0, -1.0, 0.37}) {
      simd::scalar::exp_scaled(x, s, a);
      simd::avx2::exp_scaled(x, s, b);
      for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < 1e-300) {
          EXPECT_NEAR(b[i], a[i], 1e-300) << x[i];
        } else {
          EXPECT_LE(rel(a[i], b[i]), 4e-15) << "x=" << x[i] << " s=" << s;
        }
      }
    }
  }
}

TEST(Simd, ExpSpecialValues) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> x = {inf, -inf, std::nan(""), 800.0, -800.0, 0.0, 709.0, -745.0};
  std::vector<double> a(x.size()), b(x.size());
  simd::scalar::exp_scaled(x, 1.0, a);
  simd::avx2::exp_scaled(x, 1.0, b);
  EXPECT_EQ(b[0], inf);
  EXPECT_EQ(b[1], 0.0);
  EXPECT_TRUE(std::isnan(b[2]));
  EXPECT_EQ(b[3], inf);
  EXPECT_EQ(b[4], 0.0);
  EXPECT_EQ(b[5], 1.0);
  EXPECT_LE(rel(a[6], b[6]), 4e-15);
}

TEST(Simd, PowMatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  gen::Gen g(5);
  for (std::size_t n : kLengths) {
    std::vector<double> x(n);
    for (double& v : x) v = g.log_uniform(1e-300, 1e300);
    if (n > 2) x[1] = 0.0;
    if (n > 4) x[3] = 4.9e-320;  // subnormal
    std::vector<double> a(n), b(n);
    for (double e : {0.5, 2.0, 0.25, 3.7, 1.0 / 0.3}) {
      simd::scalar::pow_batch(x, e, a);
      simd::avx2::pow_batch(x, e, b);
      for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0 || !std::isfinite(a[i]) || a[i] < 1e-290) continue;
        EXPECT_LE(rel(a[i], b[i]), 2e-13) << "x=" << x[i] << " e=" << e;
      }
      if (n > 2) {
        EXPECT_EQ(b[1], 0.0);
      }
    }
  }
}

TEST(Simd, CesExtendMatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  gen::for_all(7, 50, [](gen::Gen& g, int c) {
    const std::size_t n = kLengths[static_cast<std::size_t>(c) % std::size(kLengths)];
    const double alpha = c % 3 == 0 ? 1.0 : g.uniform(0.1, 1.0);
    const double price = g.uniform(0.1, 5.0);
    const double partial = g.uniform(0.0, 3.0);
    const auto x = g.vec(n, 0.0, 10.0);
    std::vector<double> a(n), b(n);
    simd::scalar::ces_extend(partial, price, alpha, x, a);
    simd::avx2::ces_extend(partial, price, alpha, x, b);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(rel(a[i], b[i]), 1e-13) << "case " << c << " i=" << i;
  });
}

TEST(Simd, DotMatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  gen::Gen g(9);
  for (std::size_t n : kLengths) {
    const auto a = g.vec(n, -1.0, 1.0);
    const auto b = g.vec(n, -1.0, 1.0);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    EXPECT_NEAR(simd::scalar::dot(a, b), simd::avx2::dot(a, b), 1e-15 * (1.0 + mag) * static_cast<double>(n + 1));
  }
}

TEST(Simd, ComplexMultiplyMatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this CPU";
  gen::Gen g(13);
  for (std::size_t n : kLengths) {
    std::vector<std::complex<double>> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = {g.uniform(-2, 2), g.uniform(-2, 2)};
      b[i] = {g.uniform(-2, 2), g.uniform(-2, 2)};
    }
    auto a1 = a, a2 = a;
    simd::scalar::cmul_inplace(a1, b);
    simd::avx2::cmul_inplace(a2, b);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(a1[i] - a2[i]), 4e-16 * (1.0 + std::abs(a1[i])));
  }
}

TEST(Simd, DispatchedEntryPointsAgreeWithBothVariants) {
  gen::Gen g(17);
  const auto x = g.vec(37, 0.0, 4.0);
  std::vector<double> s(x.size()), d(x.size());
  simd::scalar::pow_batch(x, 0.7, s);
  simd::pow_batch(x, 0.7, d);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_LE(rel(s[i], d[i]), 2e-13);
}
