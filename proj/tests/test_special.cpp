#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cesradon/error.hpp"
#include "cesradon/special.hpp"
#include "gen.hpp"

using namespace cesradon;

namespace {

// Reference values from mpmath.loggamma at 30 digits. mpmath follows the
// continuous branch, so imaginary parts are compared modulo 2 pi.
struct LgCase {
  double re, im, lg_re, lg_im;
};
constexpr LgCase kLogGamma[] = {
    {1.0, 1.0, -0.6509231993018564, -0.3016403204675332},
    {0.5, 10.0, -14.789024734744293, 13.03002003491109},
    {-0.5, 2.0, -2.946115355521421, -2.4083119718987955},
    {0.3, -25.0, -38.994733598718014, -55.158603080460566},
    {-2.5, 0.1, -0.10314924404281921, -9.314444268359837},
    {7.25, 3.0, 6.406908360437459, 5.82431972421005},
    {0.5, 0.0, 0.5723649429247001, 0.0},
    {0.001, 50.0, -79.57297725301407, 144.8156662054459},
};

double angle_gap(double a, double b) {
  const double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  return std::abs(d);
}

}  // namespace

TEST(LogGamma, FrozenReferenceValues) {
  for (const LgCase& c : kLogGamma) {
    const Complex v = log_gamma({c.re, c.im});
    EXPECT_NEAR(v.real(), c.lg_re, 1e-12 * (1.0 + std::abs(c.lg_re))) << c.re << "+" << c.im << "i";
    EXPECT_LT(angle_gap(v.imag(), c.lg_im), 1e-11 * (1.0 + std::abs(c.lg_im))) << c.re << "+" << c.im << "i";
  }
}

TEST(LogGamma, AbsGammaOnePlusI) {
  // |Gamma(1 + i)|^2 = pi / sinh(pi)
  const double expect = std::sqrt(std::numbers::pi / std::sinh(std::numbers::pi));
  EXPECT_NEAR(expect, 0.52156404686494, 1e-13);
  EXPECT_NEAR(std::exp(log_gamma({1.0, 1.0}).real()), expect, 1e-14);
}

TEST(LogGamma, MatchesLgammaOnPositiveReals) {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 2.5, 10.0, 40.0, 170.5}) {
    const Complex v = log_gamma({x, 0.0});
    EXPECT_NEAR(v.real(), std::lgamma(x), 1e-13 * (1.0 + std::abs(std::lgamma(x)))) << x;
    EXPECT_EQ(v.imag(), 0.0) << x;
  }
}

TEST(LogGamma, Poles) {
  for (double k : {0.0, -1.0, -2.0, -7.0}) {
    try {
      log_gamma({k, 0.0});
      FAIL() << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::PoleError);
    }
  }
  EXPECT_NO_THROW(log_gamma({-1.0, 1e-8}));
}

TEST(LogGamma, ConjugateSymmetry) {
  gen::for_all(21, 200, [](gen::Gen& g, int i) {
    const Complex z{g.uniform(-5.0, 10.0), g.uniform(0.01, 60.0)};
    const Complex a = log_gamma(z), b = log_gamma(std::conj(z));
    EXPECT_NEAR(a.real(), b.real(), 1e-12 * (1.0 + std::abs(a.real()))) << "case " << i;
    EXPECT_NEAR(a.imag(), -b.imag(), 1e-12 * (1.0 + std::abs(a.imag()))) << "case " << i;
  });
}

TEST(LogGamma, Recurrence) {
  // log Gamma(z + 1) = log Gamma(z) + log z  (mod 2 pi i)
  gen::for_all(22, 300, [](gen::Gen& g, int i) {
    const Complex z{g.uniform(-6.0, 12.0), g.uniform(-40.0, 40.0)};
    if (std::abs(z.imag()) < 1e-3) return;
    const Complex lhs = log_gamma(z + 1.0);
    const Complex rhs = log_gamma(z) + std::log(z);
    EXPECT_NEAR(lhs.real(), rhs.real(), 1e-11 * (1.0 + std::abs(lhs.real()))) << "case " << i;
    EXPECT_LT(angle_gap(lhs.imag(), rhs.imag()), 1e-10 * (1.0 + std::abs(lhs.imag()))) << "case " << i;
  });
}

TEST(LogGamma, Reflection) {
  // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
  gen::for_all(23, 200, [](gen::Gen& g, int i) {
    const Complex z{g.uniform(-3.0, 3.0), g.uniform(0.05, 8.0)};
    const Complex lhs = log_gamma(z) + log_gamma(1.0 - z);
    const Complex rhs = std::log(std::numbers::pi / std::sin(std::numbers::pi * z));
    EXPECT_NEAR(lhs.real(), rhs.real(), 1e-11 * (1.0 + std::abs(rhs.real()))) << "case " << i;
    EXPECT_LT(angle_gap(lhs.imag(), rhs.imag()), 1e-10) << "case " << i;
  });
}

TEST(Beta, SingleArgumentIsOne) {
  const Complex z[1] = {{0.3, 4.0}};
  EXPECT_EQ(log_beta_multivariate(z), Complex(0.0, 0.0));
  EXPECT_EQ(beta_multivariate(z), Complex(1.0, 0.0));
}

TEST(Beta, RealArgumentsMatchTgamma) {
  gen::for_all(24, 100, [](gen::Gen& g, int i) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 4));
    std::vector<Complex> z(n);
    double sum = 0.0, expect = 1.0;
    for (Complex& t : z) {
      t = g.uniform(0.1, 4.0);
      sum += t.real();
      expect *= std::tgamma(t.real());
    }
    expect /= std::tgamma(sum);
    const Complex b = beta_multivariate(z);
    EXPECT_NEAR(b.real(), expect, 1e-12 * expect) << "case " << i;
    EXPECT_NEAR(b.imag(), 0.0, 1e-14 * expect) << "case " << i;
  });
}

TEST(Beta, TwoArgumentIdentity) {
  // B(a + 1, b) = B(a, b) a / (a + b)
  gen::for_all(25, 200, [](gen::Gen& g, int i) {
    const Complex a{g.uniform(0.1, 3.0), g.uniform(-10.0, 10.0)};
    const Complex b{g.uniform(0.1, 3.0), g.uniform(-10.0, 10.0)};
    const Complex z0[2] = {a, b};
    const Complex z1[2] = {a + 1.0, b};
    const Complex lhs = beta_multivariate(z1);
    const Complex rhs = beta_multivariate(z0) * a / (a + b);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::abs(rhs)) << "case " << i;
  });
}

TEST(Beta2, ClosedForm) {
  gen::for_all(26, 200, [](gen::Gen& g, int i) {
    const Complex w{g.uniform(-3.0, 3.0), g.uniform(-20.0, 20.0)};
    if (std::abs(w) < 1e-3 || std::abs(w + 1.0) < 1e-3) return;
    const Complex expect = 1.0 / (w * (w + 1.0));
    EXPECT_LT(std::abs(beta2(w) - expect), 1e-13 * std::abs(expect)) << "case " << i;
    if (w.real() > 0.0) {
      const Complex z[2] = {2.0, w};
      EXPECT_LT(std::abs(beta_multivariate(z) - expect), 1e-11 * std::abs(expect)) << "case " << i;
    }
  });
}

TEST(Beta2, Poles) {
  for (Complex w : {Complex(0.0, 0.0), Complex(-1.0, 0.0)}) {
    try {
      beta2(w);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::PoleError);
    }
  }
}
