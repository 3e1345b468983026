#pragma once

// Brute-force references for tests and the self-test driver. Nothing in the
// production path calls into this module.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cesradon/ces.hpp"

namespace cesradon::oracle {

/// Philox4x32-10 keyed by the seed; block i is a pure function of (seed, i).
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0);
  /// Two 53-bit uniforms in [0, 1) from block `index`.
  static std::array<double, 2> uniforms(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0);

  /// Next uniform in [0, 1) from the running counter.
  double uniform();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

struct McRegion {
  std::vector<double> lo;
  std::vector<double> hi;
  // When set, the integrand is multiplied by the indicator of {p . x <= p0}.
  std::optional<PricePoint> sublevel;
  Alpha alpha = Alpha::one();
};

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

using Integrand = std::function<double(std::span<const double> x)>;

McResult mc_integrate(const Integrand& f, const McRegion& region, std::size_t n_samples, std::uint64_t seed);

/// [lo, hi] for axis k given x_0..x_{k-1}; either end may be infinite.
using AxisBounds = std::function<std::pair<double, double>(std::size_t k, std::span<const double> prefix)>;

/// Iterated tanh-sinh quadrature; infinite ends mapped by x = s / (1 - s).
/// NonConvergent when the error estimate stays above the requested tolerance.
double nested_quadrature(const Integrand& f, std::size_t n, const AxisBounds& bounds, double tol = 1e-10);

/// Central difference of order 1 or 2; `richardson` adds one (4 D(h/2) - D(h)) / 3 level.
double finite_difference(const std::function<double(double)>& f, double x, int order, double h, bool richardson);

/// int p^{-t} Pi(p^{1/a}, 1) dp over the orthant, computed in u = log p.
using UnitProfit = std::function<double(std::span<const double> p)>;
std::complex<double> direct_mellin(const UnitProfit& profit, std::span<const std::complex<double>> t, Alpha alpha,
                                   double tol = 1e-10);

// Closed forms for the exponential fixture a(x) = e^{-x}, n = 1.
double exp_profit(double p, double p0);
double exp_sublevel_mass(double p, double p0);

/// alpha B(1 - t) B(2, alpha (n - sum t)) for real t, via std::tgamma.
double beta_integral_closed(std::span<const double> t, double alpha);

}  // namespace cesradon::oracle
