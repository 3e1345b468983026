#include "cesradon/ces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cesradon/error.hpp"

namespace cesradon {

Alpha::Alpha(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1], got " + std::to_string(value));
  }
}

OrthantPoint::OrthantPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) fail(ErrorKind::InvalidArgument, "orthant point needs n >= 1");
  for (double c : coords_) {
    if (!(c >= 0.0)) fail(ErrorKind::InvalidArgument, "orthant coordinates must be >= 0");
  }
}

PricePoint::PricePoint(std::vector<double> p, double p0) : p_(std::move(p)), p0_(p0) {
  if (p_.empty()) fail(ErrorKind::InvalidArgument, "price vector needs n >= 1");
  bool any_positive = false;
  for (double v : p_) {
    if (!(v >= 0.0)) fail(ErrorKind::InvalidArgument, "prices must be >= 0");
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) fail(ErrorKind::InvalidArgument, "price vector must not vanish");
  if (!(p0_ > 0.0)) fail(ErrorKind::InvalidArgument, "p0 must be > 0");
}

bool PricePoint::strictly_positive() const noexcept {
  return std::all_of(p_.begin(), p_.end(), [](double v) { return v > 0.0; });
}

PricePoint PricePoint::scaled(double lambda) const {
  std::vector<double> q(p_);
  for (double& v : q) v *= lambda;
  return PricePoint(std::move(q), p0_ * lambda);
}

double ces_sum(double a, double b, Alpha alpha) {
  const double ab[2] = {a, b};
  const double ones[2] = {1.0, 1.0};
  return ces_dot(ones, ab, alpha);
}

double ces_dot(std::span<const double> p, std::span<const double> x, Alpha alpha) {
  if (p.size() != x.size()) {
    fail(ErrorKind::DimensionMismatch,
         "ces_dot: |p| = " + std::to_string(p.size()) + ", |x| = " + std::to_string(x.size()));
  }
  if (alpha.is_one()) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * x[k];
    return s;
  }
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m = std::max(m, p[k] * x[k]);
  if (m == 0.0) return 0.0;
  if (std::isinf(m)) return m;
  const double a = alpha.value();
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double y = p[k] * x[k];
    if (y > 0.0) s += std::exp(a * std::log(y / m));
  }
  return m * std::exp(std::log(s) / a);
}

bool sublevel_indicator(const PricePoint& pp, std::span<const double> x, Alpha alpha) {
  return ces_dot(pp.p(), x, alpha) <= pp.p0();
}

double level_bound(const PricePoint& pp, Alpha /*alpha*/, std::size_t axis) {
  if (axis >= pp.dim()) fail(ErrorKind::OutOfRange, "level_bound: axis out of range");
  const double pk = pp.p()[axis];
  if (pk == 0.0) return std::numeric_limits<double>::infinity();
  return pp.p0() / pk;
}

double remaining_bound(double p0, double partial, double price, Alpha alpha) {
  if (price == 0.0) return std::numeric_limits<double>::infinity();
  if (alpha.is_one()) return std::max(p0 - partial, 0.0) / price;
  const double a = alpha.value();
  const double rest = std::pow(p0, a) - partial;
  if (rest <= 0.0) return 0.0;
  return std::pow(rest, 1.0 / a) / price;
}

}  // namespace cesradon
