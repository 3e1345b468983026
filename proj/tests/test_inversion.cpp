#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cesradon/error.hpp"
#include "cesradon/inversion.hpp"
#include "cesradon/oracle.hpp"
#include "gen.hpp"

using namespace cesradon;

namespace {

MeasureModel exp_measure(std::size_t n) {
  SeparableDensity s;
  s.axes.assign(n, {Factor::exponential(1.0)});
  return MeasureModel::from_density(s);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

// n = 1 kernel by hand: K = a/(2 pi) u^{A-1} int_{-R}^{R} e^{-i b tau} w (w + 1) dtau with
// w = A - i a tau, A = a (1 - c), b = a log u. Only even moments of cos and odd of sin survive.
double kernel_closed_1d(double u, double c, double a, double R) {
  const double A = a * (1.0 - c), b = a * std::log(u);
  const double s = std::sin(b * R), co = std::cos(b * R);
  const double m0 = 2.0 * s / b;
  const double s1 = 2.0 * (s / (b * b) - R * co / b);  // int tau sin(b tau)
  const double m2 = 2.0 * (R * R * s / b + 2.0 * R * co / (b * b) - 2.0 * s / (b * b * b));
  const double integral = A * (A + 1.0) * m0 - a * (2.0 * A + 1.0) * s1 - a * a * m2;
  return a / (2.0 * std::numbers::pi) * std::exp((A - 1.0) * std::log(u)) * integral;
}

}  // namespace

TEST(InversionConfigTest, Defaults) {
  const InversionConfig one = InversionConfig::defaults(1);
  EXPECT_EQ(one.grid.axis(0).N, 4096u);
  EXPECT_EQ(one.grid.axis(0).u_min, -12.0);
  EXPECT_FALSE(one.truncation.radius.has_value());
  const InversionConfig two = InversionConfig::defaults(2, Alpha(0.5));
  EXPECT_EQ(two.grid.axis(1).N, 256u);
  EXPECT_EQ(two.truncation.taper, Taper::Gaussian);
  EXPECT_EQ(*two.truncation.radius, 8.0);
  EXPECT_EQ(two.strip.c(), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(kind_of([] { MellinStrip({0.5, 1.0}); }), ErrorKind::StripViolation);
}

TEST(InversionConfigTest, DftFrequencies) {
  const GridAxis ax{-4.0, 4.0, 64};
  const double base = 2.0 * std::numbers::pi / (64.0 * ax.spacing());
  EXPECT_EQ(dft_frequency(ax, 0), 0.0);
  EXPECT_NEAR(dft_frequency(ax, 1), base, 1e-15);
  for (std::size_t k = 1; k < 32; ++k) EXPECT_NEAR(dft_frequency(ax, k), -dft_frequency(ax, 64 - k), 1e-12);
  EXPECT_LT(dft_frequency(ax, 32), 0.0);
}

TEST(SpectralDivisor, MatchesGammaRatioOnRealAxis) {
  gen::for_all(61, 60, [](gen::Gen& g, int i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    const double a = g.uniform(0.2, 1.0);
    std::vector<Complex> z(n);
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
      t[k] = g.uniform(0.05, 0.9);
      z[k] = t[k];
    }
    const Complex d = spectral_divisor(z, Alpha(a));
    const double expect = oracle::beta_integral_closed(t, a);
    EXPECT_NEAR(d.real(), expect, 1e-11 * expect) << "case " << i;
    EXPECT_NEAR(d.imag(), 0.0, 1e-13 * expect) << "case " << i;
  });
}

TEST(MellinOfProfit, ExponentialClosedForm) {
  // e^{-x}, alpha = 1: M(z) = Gamma(z) / ((1 - z)(2 - z))
  InversionConfig cfg = InversionConfig::defaults(1);
  cfg.grid = LogGrid::uniform(1, -60.0, 60.0, 8192);
  const std::vector<double> samples = sample_profit_log(exp_measure(1), cfg);
  for (double c : {0.3, 0.5, 0.7}) {
    cfg.strip = MellinStrip::uniform(1, c);
    const Spectrum s = mellin_of_profit(samples, cfg);
    for (std::size_t bin : {0u, 1u, 5u, 40u, 8190u}) {
      const Complex z(c, s.tau(0, bin));
      const Complex expect = std::exp(log_gamma(z)) / ((1.0 - z) * (2.0 - z));
      EXPECT_LT(std::abs(s.values[bin] - expect), 1e-5 * (1.0 + std::abs(expect))) << "c " << c << " bin " << bin;
    }
  }
}

TEST(Inversion, RoundTripExponential1d) {
  const InversionConfig cfg = InversionConfig::defaults(1);
  const DensitySpec d = invert_profit(sample_profit_log(exp_measure(1), cfg), cfg);
  for (double x = 0.2; x <= 3.0; x += 0.1) EXPECT_NEAR(d.eval(std::vector<double>{x}), std::exp(-x), 1e-3) << x;
}

TEST(Inversion, RoundTripAlphaHalf) {
  SeparableDensity s;
  s.axes = {{Factor::power(1.0), Factor::gaussian()}};
  const MeasureModel m = MeasureModel::from_density(s);
  const InversionConfig cfg = InversionConfig::defaults(1, Alpha(0.5));
  const DensitySpec d = invert_profit(sample_profit_log(m, cfg), cfg);
  for (double x = 0.3; x <= 2.0; x += 0.1) {
    EXPECT_NEAR(d.eval(std::vector<double>{x}), x * std::exp(-x * x), 2e-3) << x;
  }
}

TEST(Inversion, ZeroSamplesGiveZeroDensity) {
  InversionConfig cfg = InversionConfig::defaults(1);
  const DensitySpec d = invert_profit(std::vector<double>(cfg.grid.size(), 0.0), cfg);
  for (double x : {0.1, 1.0, 10.0}) EXPECT_EQ(d.eval(std::vector<double>{x}), 0.0);
}

TEST(Inversion, NarrowGridLeaks) {
  InversionConfig cfg = InversionConfig::defaults(1);
  cfg.grid = LogGrid::uniform(1, -1.0, 1.0, 256);
  const std::vector<double> samples = sample_profit_log(exp_measure(1), cfg);
  EXPECT_GT(boundary_leak(samples, cfg), cfg.leak_threshold);
  EXPECT_EQ(kind_of([&] { mellin_of_profit(samples, cfg); }), ErrorKind::BoundaryLeak);
}

TEST(Inversion, WrongSampleCount) {
  const InversionConfig cfg = InversionConfig::defaults(1);
  EXPECT_EQ(kind_of([&] { invert_profit(std::vector<double>(10, 0.0), cfg); }), ErrorKind::DimensionMismatch);
}

TEST(Inversion, RadonRouteSamples) {
  // e^{-x}: R(p, p0) = e^{-p0/p} / p
  InversionConfig cfg = InversionConfig::defaults(1);
  cfg.grid = LogGrid::uniform(1, -6.0, 6.0, 64);
  RadonProvider provider = [](std::span<const double> p) {
    RadonSlice rs;
    rs.p.assign(p.begin(), p.end());
    for (int i = 1; i <= 4000; ++i) {
      const double t = 2.5e-4 * i;
      rs.p0_grid.push_back(t);
      rs.values.push_back(std::exp(-t / p[0]) / p[0]);
    }
    return rs;
  };
  const std::vector<double> s = sample_profit_from_radon(provider, cfg);
  std::vector<double> u;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cfg.grid.coords(i, u);
    if (u[0] < -3.0) continue;  // R(p, .) has width p; the fixed slice grid stops resolving it
    // first-interval anchor M(t0) = t0 R(t0) costs about h^2 / (2 p^3)
    const double p = std::exp(u[0]), h = 2.5e-4;
    EXPECT_NEAR(s[i], oracle::exp_profit(p, 1.0), 1e-8 + h * h / (p * p * p)) << "u " << u[0];
  }
}

TEST(Kernel, OneDimensionalClosedForm) {
  gen::for_all(62, 20, [](gen::Gen& g, int i) {
    const double a = g.uniform(0.3, 1.0), c = g.uniform(0.2, 0.8), R = g.uniform(5.0, 30.0);
    double u = g.log_uniform(0.2, 5.0);
    if (std::abs(std::log(u)) < 0.05) u = 1.5;
    const double uu[1] = {u};
    const KernelValue kv = kernel_eval(uu, MellinStrip::uniform(1, c), Alpha(a), R, 1e-12);
    const double expect = kernel_closed_1d(u, c, a, R);
    const double scale = a * a * R * R * R / std::numbers::pi * std::pow(u, a * (1.0 - c) - 1.0);
    EXPECT_NEAR(kv.re, expect, 1e-9 * scale) << "case " << i;
    EXPECT_NEAR(kv.im, 0.0, 1e-9 * scale) << "case " << i;
  });
}

TEST(Kernel, TwoDimensionalIsReal) {
  const double u[2] = {0.8, 1.7};
  const KernelValue kv = kernel_eval(u, MellinStrip::uniform(2, 0.5), Alpha::one(), 10.0, 1e-9);
  EXPECT_TRUE(kv.converged);
  EXPECT_LT(std::abs(kv.im), 1e-8 * (1.0 + std::abs(kv.re)));
  EXPECT_EQ(kind_of([] {
              const double u3[3] = {1.0, 1.0, 1.0};
              kernel_eval(u3, MellinStrip::uniform(3, 0.5), Alpha::one(), 5.0);
            }),
            ErrorKind::MethodUnavailable);
}
