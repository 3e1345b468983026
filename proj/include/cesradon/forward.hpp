#pragma once

// Forward transforms of a measure m on R^n_+ at (p, p0):
//   profit   Pi(p, p0) = int (p0 - p (.) x)_+ m(dx)
//   mass     M(p, p0)  = m{x : p (.) x <= p0}      (= dPi/dp0)
//   radon    R(p, p0)  = dM/dp0

#include <span>
#include <vector>

#include "cesradon/ces.hpp"
#include "cesradon/measures.hpp"

namespace cesradon {

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;
  friend bool operator==(const Tolerance&, const Tolerance&) = default;
};

/// Throws UnboundedRegion when p_k = 0 on an axis where the density has
/// unbounded support, NonConvergent on budget exhaustion.
double profit_transform(const MeasureModel& m, const PricePoint& pp, Alpha alpha, Tolerance tol = {});
double sublevel_mass(const MeasureModel& m, const PricePoint& pp, Alpha alpha, Tolerance tol = {});

/// Same profit integral after the coordinate warp y = x^alpha:
/// int (p0 - (sum p_k^alpha y_k)^{1/alpha})_+ a_*(y) dy with
/// a_*(y) = alpha^{-n} a(y^{1/alpha}) prod y_k^{1/alpha - 1}. Density part only.
double profit_transform_warped(const DensitySpec& d, const PricePoint& pp, Alpha alpha,
                               Tolerance tol = {});

enum class RadonMethod { Derivative, Surface };

struct RadonSlice {
  std::vector<double> p;
  double alpha = 1.0;
  std::vector<double> p0_grid;
  std::vector<double> values;      // R(p, p0_i)
  std::vector<double> cdf_values;  // M(p, p0_i); may be empty for externally supplied slices
};

struct RadonOptions {
  Tolerance tol{1e-13, 1e-12};
  double step_rel = 1e-3;  // derivative method: h = step_rel * p0
};

/// Derivative: one Richardson level on central differences of M. Surface:
/// quadrature along the level curve, n = 2 only. MethodUnavailable otherwise,
/// and for the derivative method when an atom sits on a difference stencil.
RadonSlice radon_slice(const MeasureModel& m, std::span<const double> p, Alpha alpha,
                       std::span<const double> p0_grid, RadonMethod method,
                       const RadonOptions& opt = {});

/// Pi(p, p0) = int_0^p0 int_0^t R ds dt by trapezoids, using Pi(+0) = M(+0) = 0.
/// OutOfRange unless 0 < p0 <= last grid point.
double profit_from_radon(const RadonSlice& rs, double p0);

}  // namespace cesradon
