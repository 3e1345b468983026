#pragma once

// CES algebra on the nonnegative orthant: the alpha-sum a (+) b = (a^a + b^a)^(1/a)
// and the generalized scalar product p (.) x built from it.

#include <cstddef>
#include <span>
#include <vector>

namespace cesradon {

/// Substitution exponent, 0 < alpha <= 1.
class Alpha {
 public:
  explicit Alpha(double value);
  static Alpha one() { return Alpha(1.0); }

  double value() const noexcept { return value_; }
  bool is_one() const noexcept { return value_ == 1.0; }

  friend bool operator==(Alpha, Alpha) = default;

 private:
  double value_;
};

/// Point of R^n_+ (n >= 1, all coordinates >= 0).
class OrthantPoint {
 public:
  explicit OrthantPoint(std::vector<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t k) const { return coords_[k]; }

 private:
  std::vector<double> coords_;
};

/// Evaluation point (p, p0): p >= 0 with p != 0, and p0 > 0.
class PricePoint {
 public:
  PricePoint(std::vector<double> p, double p0);

  std::size_t dim() const noexcept { return p_.size(); }
  std::span<const double> p() const noexcept { return p_; }
  double p0() const noexcept { return p0_; }
  bool strictly_positive() const noexcept;

  /// (lambda p, lambda p0)
  PricePoint scaled(double lambda) const;

 private:
  std::vector<double> p_;
  double p0_;
};

double ces_sum(double a, double b, Alpha alpha);

/// (sum_k (p_k x_k)^alpha)^(1/alpha), computed with max-factoring so that tiny
/// alpha does not overflow the intermediate power.
double ces_dot(std::span<const double> p, std::span<const double> x, Alpha alpha);

/// theta(p0 - p (.) x); the level surface itself counts as inside.
bool sublevel_indicator(const PricePoint& pp, std::span<const double> x, Alpha alpha);

/// Largest coordinate along `axis` reachable inside {p (.) x <= p0}; +inf when p_axis = 0.
double level_bound(const PricePoint& pp, Alpha alpha, std::size_t axis);

/// Exact bound for coordinate k once the earlier coordinates contribute
/// `partial` = sum_{j<k} (p_j x_j)^alpha: ((p0^alpha - partial)_+)^(1/alpha) / p_k.
double remaining_bound(double p0, double partial, double price, Alpha alpha);

}  // namespace cesradon
