#pragma once

// Adaptive Gauss-Kronrod (10/21) integration with a global error heap.
// Integrands are evaluated in batches of 21 nodes so that callers can push
// the inner loop through the SIMD kernels.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace cesradon {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_evaluations = std::size_t{1} << 20;
};

template <class T>
struct QuadResult {
  T value{};
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 11> kGkNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kGkWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600656325262, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7, 9).
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651344};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
};

// Interval [0, inf) is handled as t in [0, 1) with x = a + t / (1 - t).
struct Mapping {
  double a;
  bool semi_infinite;

  double to_t(double x) const { return semi_infinite ? (x - a) / (1.0 + (x - a)) : x; }
};

template <class T, class F>
Segment<T> gk21(F& f, const Mapping& map, double ta, double tb, std::array<double, 21>& x,
                std::array<double, 21>& jac, std::array<T, 21>& y) {
  const double c = 0.5 * (ta + tb);
  const double h = 0.5 * (tb - ta);
  for (int i = 0; i < 10; ++i) {
    x[2 * i] = c - h * kGkNodes[i];
    x[2 * i + 1] = c + h * kGkNodes[i];
  }
  x[20] = c;
  for (int i = 0; i < 21; ++i) {
    if (map.semi_infinite) {
      const double t = x[i];
      const double d = 1.0 - t;
      jac[i] = 1.0 / (d * d);
      x[i] = map.a + t / d;
    } else {
      jac[i] = 1.0;
    }
  }
  f(std::span<const double>(x), std::span<T>(y));
  T kron = y[20] * jac[20] * kGkWeights[10];
  T gauss{};
  double abs_sum = magnitude(y[20] * jac[20]) * kGkWeights[10];
  for (int i = 0; i < 10; ++i) {
    const T pair = y[2 * i] * jac[2 * i] + y[2 * i + 1] * jac[2 * i + 1];
    kron += pair * kGkWeights[i];
    abs_sum += (magnitude(y[2 * i] * jac[2 * i]) + magnitude(y[2 * i + 1] * jac[2 * i + 1])) *
               kGkWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  Segment<T> s{ta, tb, kron * h, 0.0};
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * h;
  s.error = std::max(magnitude((kron - gauss) * h), roundoff);
  // A non-finite sample poisons the interval; report it as unresolved.
  if (!std::isfinite(s.error)) s.error = std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace detail

/// Integrates over [a, b] (b may be +inf). `f(xs, ys)` fills ys[i] = f(xs[i]).
/// Breakpoints inside (a, b) start as interval boundaries.
template <class T, class F>
QuadResult<T> integrate_batch(F&& f, double a, double b, const QuadOptions& opt,
                              std::span<const double> breakpoints = {}) {
  QuadResult<T> res;
  if (!(b > a)) return res;
  const detail::Mapping map{a, std::isinf(b)};
  std::vector<double> cuts;
  cuts.push_back(map.to_t(a));
  for (double bp : breakpoints) {
    if (bp > a && bp < b) cuts.push_back(map.to_t(bp));
  }
  cuts.push_back(map.semi_infinite ? 1.0 : b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::array<double, 21> x{};
  std::array<double, 21> jac{};
  std::array<T, 21> y{};
  using Seg = detail::Segment<T>;
  auto by_error = [](const Seg& l, const Seg& r) { return l.error < r.error; };
  std::vector<Seg> heap;
  std::vector<Seg> frozen;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(detail::gk21<T>(f, map, cuts[i], cuts[i + 1], x, jac, y));
    res.evaluations += 21;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&](T& value, double& error) {
    value = T{};
    error = 0.0;
    for (const Seg& s : heap) {
      value += s.value;
      error += s.error;
    }
    for (const Seg& s : frozen) {
      value += s.value;
      error += s.error;
    }
  };
  T value{};
  double error = 0.0;
  totals(value, error);
  std::size_t since_resum = 0;
  while (!heap.empty() && error > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(value))) {
    if (res.evaluations + 42 > opt.max_evaluations) break;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Seg worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-15 * (1.0 + std::abs(mid))) {
      frozen.push_back(worst);
      continue;
    }
    const Seg left = detail::gk21<T>(f, map, worst.a, mid, x, jac, y);
    const Seg right = detail::gk21<T>(f, map, mid, worst.b, x, jac, y);
    res.evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    if (++since_resum == 64) {
      totals(value, error);
      since_resum = 0;
    }
  }
  // Deterministic final sum in interval order.
  heap.insert(heap.end(), frozen.begin(), frozen.end());
  std::sort(heap.begin(), heap.end(), [](const Seg& l, const Seg& r) { return l.a < r.a; });
  res.value = T{};
  res.abs_error = 0.0;
  for (const Seg& s : heap) {
    res.value += s.value;
    res.abs_error += s.error;
  }
  res.converged = res.abs_error <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(res.value));
  return res;
}

/// Scalar-integrand convenience wrapper.
template <class F>
QuadResult<double> integrate(F&& f, double a, double b, const QuadOptions& opt,
                             std::span<const double> breakpoints = {}) {
  auto batch = [&f](std::span<const double> xs, std::span<double> ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
  };
  return integrate_batch<double>(batch, a, b, opt, breakpoints);
}

}  // namespace cesradon
