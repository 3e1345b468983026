#pragma once

// Signed measures on R^n_+: finitely many atoms plus an optional density.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cesradon/ces.hpp"
#include "cesradon/log_grid.hpp"

namespace cesradon {

enum class FactorKind { Exponential, Power, Gaussian, Bump, IndicatorScale };

/// One-dimensional factor of a separable density.
///   Exponential     e^{-rate x}
///   Power           x^exponent on [0, cutoff]
///   Gaussian        e^{-x^2}
///   Bump            (1 - (x/cutoff)^2)^exponent on [0, cutoff]
///   IndicatorScale  `inside` on (lo, hi), 1 elsewhere
struct Factor {
  FactorKind kind = FactorKind::Exponential;
  double rate = 1.0;
  double exponent = 0.0;
  double cutoff = std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = 0.0;
  double inside = 1.0;

  static Factor exponential(double rate);
  static Factor power(double exponent, double cutoff = std::numeric_limits<double>::infinity());
  static Factor gaussian();
  static Factor bump(double half_width, double exponent);
  static Factor indicator_scale(double lo, double hi, double inside);

  double eval(double x) const;
  /// Coordinate beyond which the factor is zero or negligible (< 1e-26 relative).
  double extent() const;
  bool nonnegative() const;
  friend bool operator==(const Factor&, const Factor&) = default;
};

struct SeparableDensity {
  std::vector<std::vector<Factor>> axes;  // one factor list per coordinate
  double scale = 1.0;
};

struct BoxDensity {
  std::vector<double> lower;   // defaults to the origin when empty
  std::vector<double> corner;
  double value = 1.0;
};

/// Samples on a grid in log x with multilinear interpolation; 0 outside the hull.
struct GridDensity {
  LogGrid grid;
  std::vector<double> values;
};

struct CallbackDensity {
  std::size_t dim = 1;
  std::function<double(std::span<const double>)> fn;
  std::vector<double> extent;  // per axis; empty means unbounded
  bool nonnegative = false;
  std::string label = "callback";
};

class DensitySpec {
 public:
  using Variant = std::variant<SeparableDensity, BoxDensity, GridDensity, CallbackDensity>;

  DensitySpec(Variant v);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Variant> && !std::is_same_v<std::decay_t<T>, DensitySpec> &&
             std::is_constructible_v<Variant, T>)
  DensitySpec(T&& alt) : DensitySpec(Variant(std::forward<T>(alt))) {}  // NOLINT(google-explicit-constructor)

  const Variant& variant() const noexcept { return v_; }
  std::string_view variant_name() const noexcept;
  std::size_t dim() const noexcept { return dim_; }

  double eval(std::span<const double> x) const;
  /// out_i = a(prefix..., xs_i): the last coordinate varies, earlier ones are fixed.
  void eval_line(std::span<const double> prefix, std::span<const double> xs,
                 std::span<double> out) const;

  double extent(std::size_t axis) const;
  /// Points on `axis` where the density may jump (support edges, indicator edges).
  std::vector<double> breakpoints(std::size_t axis) const;
  bool nonnegative_by_construction() const;
  /// |a|, same variant where possible.
  DensitySpec abs() const;

 private:
  Variant v_;
  std::size_t dim_ = 0;
};

double eval_density(const DensitySpec& d, const OrthantPoint& x);

struct Atom {
  std::vector<double> location;
  double weight = 0.0;
};

class MeasureModel {
 public:
  MeasureModel(std::size_t dim, std::vector<Atom> atoms, std::optional<DensitySpec> density);
  static MeasureModel zero(std::size_t dim) { return MeasureModel(dim, {}, std::nullopt); }
  static MeasureModel from_density(DensitySpec d);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<DensitySpec>& density() const noexcept { return density_; }
  bool is_zero() const noexcept { return atoms_.empty() && !density_; }
  bool nonnegative_by_construction() const;
  bool has_atom_at_origin() const;

  /// Total variation measure |m|.
  MeasureModel abs() const;
  MeasureModel without_atoms() const { return MeasureModel(dim_, {}, density_); }

 private:
  std::size_t dim_;
  std::vector<Atom> atoms_;
  std::optional<DensitySpec> density_;
};

/// Atom weights summed exactly plus the density integral. NonConvergent when the
/// quadrature budget (2^20 evaluations per integral) runs out before tol.
double total_mass(const MeasureModel& m, double tol);

struct WeightedNormReport {
  double l1_weighted = 0.0;  // int |a| prod x^{alpha(c-1)}
  double l2_weighted = 0.0;  // int |a|^2 prod x^{2 alpha(c-1)+1}
  std::vector<double> c;
  double alpha = 1.0;
  bool l1_finite = false;
  bool l2_finite = false;
};

/// Throws StripViolation if some c_k >= 1.
WeightedNormReport weighted_norms(const DensitySpec& d, std::span<const double> c, Alpha alpha,
                                  double tol);

}  // namespace cesradon
