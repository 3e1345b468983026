#include <cmath>

#include "cesradon/simd.hpp"

namespace cesradon::simd::scalar {

void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out) {
  if (alpha == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = partial + price * x[i];
    return;
  }
  const double inv = 1.0 / alpha;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = price * x[i];
    const double t = partial + (y > 0.0 ? std::pow(y, alpha) : 0.0);
    out[i] = t > 0.0 ? std::pow(t, inv) : 0.0;
  }
}

void exp_scaled(std::span<const double> x, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(scale * x[i]);
}

void pow_batch(std::span<const double> x, double e, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? std::pow(x[i], e) : (e == 0.0 ? 1.0 : 0.0);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

}  // namespace cesradon::simd::scalar
