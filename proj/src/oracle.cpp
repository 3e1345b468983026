#include "cesradon/oracle.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cesradon/error.hpp"
#include "cesradon/parallel.hpp"

namespace cesradon::oracle {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// One axis: finite, or mapped onto [0, 1).
// One integrator per nesting depth: inner levels may grow the shared abscissa tables.
boost::math::quadrature::tanh_sinh<double>& integrator(std::size_t depth) {
  static thread_local std::vector<std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>> pool;
  while (pool.size() <= depth) pool.push_back(std::make_unique<boost::math::quadrature::tanh_sinh<double>>(12));
  return *pool[depth];
}

double integrate_axis(const std::function<double(double)>& g, double lo, double hi, double tol, std::size_t depth) {
  auto& ts = integrator(depth);
  double err = 0.0;
  double l1 = 0.0;
  double v = 0.0;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    if (!(hi > lo)) return 0.0;
    v = ts.integrate(g, lo, hi, tol, &err, &l1);
  } else if (std::isfinite(lo) || std::isfinite(hi)) {
    const double base = std::isfinite(lo) ? lo : hi;
    const double sign = std::isfinite(lo) ? 1.0 : -1.0;
    auto mapped = [&](double s, double sc) {
      // sc = 1 - s near the right end
      const double one_minus = s > 0.5 ? sc : 1.0 - s;
      if (one_minus <= 0.0) return 0.0;
      const double x = base + sign * s / one_minus;
      const double jac = 1.0 / (one_minus * one_minus);
      if (!std::isfinite(x) || !std::isfinite(jac)) return 0.0;
      const double fx = g(x);
      return fx == 0.0 ? 0.0 : fx * jac;
    };
    v = ts.integrate(mapped, 0.0, 1.0, tol, &err, &l1);
  } else {
    return integrate_axis(g, -kInf, 0.0, tol, depth) + integrate_axis(g, 0.0, kInf, tol, depth);
  }
  // Inner levels feed the outer estimate; only the outermost one is judged.
  if (!std::isfinite(v) || (depth == 0 && err > std::max(1e3 * tol * l1, 1e-14))) {
    fail(ErrorKind::NonConvergent, "nested_quadrature: error estimate above tolerance");
  }
  return v;
}

double nested_level(const Integrand& f, std::size_t n, const AxisBounds& bounds, double tol,
                    std::vector<double>& x, std::size_t k) {
  const auto [lo, hi] = bounds(k, std::span<const double>(x.data(), k));
  auto g = [&](double xk) {
    x[k] = xk;
    if (k + 1 == n) return f(x);
    return nested_level(f, n, bounds, tol, x, k + 1);
  };
  return integrate_axis(g, lo, hi, tol, k);
}

}  // namespace

std::array<std::uint32_t, 4> SeededSampler::block(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0};
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int r = 0; r < 10; ++r) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kW0;
    k1 += kW1;
  }
  return c;
}

std::array<double, 2> SeededSampler::uniforms(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  const auto b = block(seed, index, stream);
  return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
}

double SeededSampler::uniform() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const auto u = uniforms(seed_, counter_++);
  spare_ = u[1];
  return u[0];
}

McResult mc_integrate(const Integrand& f, const McRegion& region, std::size_t n_samples, std::uint64_t seed) {
  const std::size_t n = region.lo.size();
  if (n == 0 || region.hi.size() != n) fail(ErrorKind::DimensionMismatch, "mc_integrate: box corners differ in length");
  if (n_samples < 2) fail(ErrorKind::InvalidArgument, "mc_integrate: need at least two samples");
  double vol = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(region.lo[k]) || !std::isfinite(region.hi[k]) || !(region.hi[k] >= region.lo[k])) {
      fail(ErrorKind::InvalidArgument, "mc_integrate: region must have finite volume");
    }
    vol *= region.hi[k] - region.lo[k];
  }
  const std::size_t blocks_per_sample = (n + 1) / 2;
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<double> s1(chunks), s2(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> x(n);
    double a = 0.0, b = 0.0;
    const std::size_t end = std::min(n_samples, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      for (std::size_t j = 0; j < blocks_per_sample; ++j) {
        const auto u = SeededSampler::uniforms(seed, i * blocks_per_sample + j);
        for (std::size_t l = 0; l < 2 && 2 * j + l < n; ++l) {
          const std::size_t k = 2 * j + l;
          x[k] = region.lo[k] + (region.hi[k] - region.lo[k]) * u[l];
        }
      }
      double v = 0.0;
      if (!region.sublevel || sublevel_indicator(*region.sublevel, x, region.alpha)) v = f(x);
      a += v;
      b += v * v;
    }
    s1[c] = a;
    s2[c] = b;
  });
  const double N = static_cast<double>(n_samples);
  const double mean = std::accumulate(s1.begin(), s1.end(), 0.0) / N;
  const double var = std::max(0.0, std::accumulate(s2.begin(), s2.end(), 0.0) / N - mean * mean) * N / (N - 1.0);
  return {vol * mean, vol * std::sqrt(var / N)};
}

double nested_quadrature(const Integrand& f, std::size_t n, const AxisBounds& bounds, double tol) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "nested_quadrature: dimension must be positive");
  std::vector<double> x(n);
  return nested_level(f, n, bounds, tol, x, 0);
}

double finite_difference(const std::function<double(double)>& f, double x, int order, double h, bool richardson) {
  if (order != 1 && order != 2) fail(ErrorKind::InvalidArgument, "finite_difference: order must be 1 or 2");
  auto d = [&](double s) {
    if (order == 1) return (f(x + s) - f(x - s)) / (2.0 * s);
    return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s);
  };
  if (!richardson) return d(h);
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

std::complex<double> direct_mellin(const UnitProfit& profit, std::span<const std::complex<double>> t, Alpha alpha,
                                   double tol) {
  const std::size_t n = t.size();
  for (const auto& tk : t) {
    if (!(tk.real() < 1.0)) fail(ErrorKind::StripViolation, "direct_mellin: Re t must be < 1");
  }
  const double a = alpha.value();
  // p = e^u, dp = e^u du: integrand e^{(1 - t).u} Pi(e^{u / a}, 1).
  auto part = [&](bool imag) {
    Integrand f = [&, imag](std::span<const double> u) {
      std::vector<double> p(n);
      double re = 0.0, ph = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        p[k] = std::exp(u[k] / a);
        re += (1.0 - t[k].real()) * u[k];
        ph -= t[k].imag() * u[k];
      }
      if (re > 700.0) return 0.0;
      const double v = profit(p);
      if (v == 0.0) return 0.0;
      return std::exp(re) * v * (imag ? std::sin(ph) : std::cos(ph));
    };
    AxisBounds b = [](std::size_t, std::span<const double>) { return std::pair{-kInf, kInf}; };
    return nested_quadrature(f, n, b, tol);
  };
  return {part(false), part(true)};
}

double exp_profit(double p, double p0) {
  if (p0 <= 0.0) return 0.0;
  if (p == 0.0) return p0;
  const double r = p0 / p;
  // Pi = p0 (1 - (1 - e^{-r}) / r)
  if (r < 1e-3) return p0 * r * (0.5 - r * (1.0 / 6.0 - r * (1.0 / 24.0 - r / 120.0)));
  return p0 * (1.0 + std::expm1(-r) / r);
}

double exp_sublevel_mass(double p, double p0) {
  if (p0 <= 0.0) return 0.0;
  if (p == 0.0) return 1.0;
  return -std::expm1(-p0 / p);
}

double beta_integral_closed(std::span<const double> t, double alpha) {
  const double n = static_cast<double>(t.size());
  double st = 0.0;
  double log_b = 0.0;
  for (double tk : t) {
    st += tk;
    log_b += std::lgamma(1.0 - tk);
  }
  log_b -= std::lgamma(n - st);
  const double w = alpha * (n - st);
  return alpha * std::exp(log_b) / (w * (w + 1.0));
}

}  // namespace cesradon::oracle
