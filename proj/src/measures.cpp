#include "cesradon/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cesradon/error.hpp"
#include "cesradon/simd.hpp"
#include "region.hpp"

namespace cesradon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_factor(const Factor& f) {
  switch (f.kind) {
    case FactorKind::Exponential:
      if (!(f.rate > 0.0)) fail(ErrorKind::InvalidArgument, "exponential factor needs rate > 0");
      break;
    case FactorKind::Power:
      if (!(f.exponent > -1.0)) fail(ErrorKind::InvalidArgument, "power factor needs exponent > -1");
      if (!(f.cutoff > 0.0)) fail(ErrorKind::InvalidArgument, "power factor needs cutoff > 0");
      break;
    case FactorKind::Gaussian:
      break;
    case FactorKind::Bump:
      if (!(f.cutoff > 0.0 && std::isfinite(f.cutoff))) {
        fail(ErrorKind::InvalidArgument, "bump factor needs a finite half-width > 0");
      }
      if (!(f.exponent >= 0.0)) fail(ErrorKind::InvalidArgument, "bump factor needs exponent >= 0");
      break;
    case FactorKind::IndicatorScale:
      if (!(f.lo < f.hi)) fail(ErrorKind::InvalidArgument, "indicator factor needs lo < hi");
      if (!std::isfinite(f.inside)) fail(ErrorKind::InvalidArgument, "indicator value must be finite");
      break;
  }
}

// Multilinear interpolation in log coordinates.
double grid_eval(const GridDensity& g, std::span<const double> x) {
  const std::size_t n = g.grid.dim();
  // Cell index and fractional offset per axis.
  std::array<std::size_t, 3> cell{};
  std::array<double, 3> frac{};
  std::vector<std::size_t> cell_v;
  std::vector<double> frac_v;
  std::size_t* cell_p = cell.data();
  double* frac_p = frac.data();
  if (n > 3) {
    cell_v.resize(n);
    frac_v.resize(n);
    cell_p = cell_v.data();
    frac_p = frac_v.data();
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0)) return 0.0;
    const GridAxis& a = g.grid.axis(k);
    const double v = std::log(x[k]);
    if (v < a.u_min || v > a.u_max) return 0.0;
    double t = (v - a.u_min) / a.spacing();
    std::size_t i = static_cast<std::size_t>(t);
    if (i >= a.N - 1) i = a.N - 2;
    cell_p[k] = i;
    frac_p[k] = std::clamp(t - static_cast<double>(i), 0.0, 1.0);
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool up = (corner >> k) & 1u;
      w *= up ? frac_p[k] : 1.0 - frac_p[k];
      flat = flat * g.grid.axis(k).N + cell_p[k] + (up ? 1 : 0);
    }
    if (w != 0.0) acc += w * g.values[flat];
  }
  return acc;
}

}  // namespace

Factor Factor::exponential(double rate) {
  Factor f;
  f.kind = FactorKind::Exponential;
  f.rate = rate;
  validate_factor(f);
  return f;
}

Factor Factor::power(double exponent, double cutoff) {
  Factor f;
  f.kind = FactorKind::Power;
  f.exponent = exponent;
  f.cutoff = cutoff;
  validate_factor(f);
  return f;
}

Factor Factor::gaussian() {
  Factor f;
  f.kind = FactorKind::Gaussian;
  return f;
}

Factor Factor::bump(double half_width, double exponent) {
  Factor f;
  f.kind = FactorKind::Bump;
  f.cutoff = half_width;
  f.exponent = exponent;
  validate_factor(f);
  return f;
}

Factor Factor::indicator_scale(double lo, double hi, double inside) {
  Factor f;
  f.kind = FactorKind::IndicatorScale;
  f.lo = lo;
  f.hi = hi;
  f.inside = inside;
  validate_factor(f);
  return f;
}

double Factor::eval(double x) const {
  switch (kind) {
    case FactorKind::Exponential:
      return std::exp(-rate * x);
    case FactorKind::Power:
      if (x > cutoff) return 0.0;
      if (x == 0.0) return exponent == 0.0 ? 1.0 : (exponent > 0.0 ? 0.0 : kInf);
      return std::pow(x, exponent);
    case FactorKind::Gaussian:
      return std::exp(-x * x);
    case FactorKind::Bump: {
      if (x >= cutoff) return 0.0;
      const double r = x / cutoff;
      return std::pow(1.0 - r * r, exponent);
    }
    case FactorKind::IndicatorScale:
      return (x > lo && x < hi) ? inside : 1.0;
  }
  return 0.0;
}

double Factor::extent() const {
  switch (kind) {
    case FactorKind::Exponential:
      return 60.0 / rate;
    case FactorKind::Gaussian:
      return 8.0;
    case FactorKind::Power:
    case FactorKind::Bump:
      return cutoff;
    case FactorKind::IndicatorScale:
      return kInf;
  }
  return kInf;
}

bool Factor::nonnegative() const {
  return kind != FactorKind::IndicatorScale || inside >= 0.0;
}

DensitySpec::DensitySpec(Variant v) : v_(std::move(v)) {
  std::visit(Overloaded{
                 [&](const SeparableDensity& s) {
                   if (s.axes.empty()) fail(ErrorKind::InvalidArgument, "separable density needs n >= 1");
                   for (const auto& axis : s.axes) {
                     for (const Factor& f : axis) validate_factor(f);
                   }
                   if (!std::isfinite(s.scale)) fail(ErrorKind::InvalidArgument, "density scale must be finite");
                   dim_ = s.axes.size();
                 },
                 [&](const BoxDensity& b) {
                   if (b.corner.empty()) fail(ErrorKind::InvalidArgument, "box density needs n >= 1");
                   if (!b.lower.empty() && b.lower.size() != b.corner.size()) {
                     fail(ErrorKind::DimensionMismatch, "box lower/corner sizes differ");
                   }
                   for (std::size_t k = 0; k < b.corner.size(); ++k) {
                     const double lo = b.lower.empty() ? 0.0 : b.lower[k];
                     if (!(lo >= 0.0 && lo < b.corner[k] && std::isfinite(b.corner[k]))) {
                       fail(ErrorKind::InvalidArgument, "box needs 0 <= lower < corner < inf");
                     }
                   }
                   dim_ = b.corner.size();
                 },
                 [&](const GridDensity& g) {
                   if (g.grid.dim() == 0) fail(ErrorKind::InvalidArgument, "grid density needs a grid");
                   if (g.values.size() != g.grid.size()) {
                     fail(ErrorKind::DimensionMismatch,
                          "grid density: " + std::to_string(g.values.size()) + " values for " +
                              std::to_string(g.grid.size()) + " grid points");
                   }
                   dim_ = g.grid.dim();
                 },
                 [&](const CallbackDensity& c) {
                   if (!c.fn) fail(ErrorKind::InvalidArgument, "callback density without evaluator");
                   if (c.dim == 0) fail(ErrorKind::InvalidArgument, "callback density needs n >= 1");
                   if (!c.extent.empty() && c.extent.size() != c.dim) {
                     fail(ErrorKind::DimensionMismatch, "callback extent size differs from dim");
                   }
                   dim_ = c.dim;
                 },
             },
             v_);
}

std::string_view DensitySpec::variant_name() const noexcept {
  switch (v_.index()) {
    case 0: return "Separable";
    case 1: return "Box";
    case 2: return "GridSampled";
    default: return "Callback";
  }
}

double DensitySpec::eval(std::span<const double> x) const {
  if (x.size() != dim_) fail(ErrorKind::DimensionMismatch, "density evaluated at wrong dimension");
  return std::visit(Overloaded{
                        [&](const SeparableDensity& s) {
                          double v = s.scale;
                          for (std::size_t k = 0; k < dim_ && v != 0.0; ++k) {
                            for (const Factor& f : s.axes[k]) v *= f.eval(x[k]);
                          }
                          return v;
                        },
                        [&](const BoxDensity& b) {
                          for (std::size_t k = 0; k < dim_; ++k) {
                            const double lo = b.lower.empty() ? 0.0 : b.lower[k];
                            if (x[k] < lo || x[k] > b.corner[k]) return 0.0;
                          }
                          return b.value;
                        },
                        [&](const GridDensity& g) { return grid_eval(g, x); },
                        [&](const CallbackDensity& c) { return c.fn(x); },
                    },
                    v_);
}

void DensitySpec::eval_line(std::span<const double> prefix, std::span<const double> xs,
                            std::span<double> out) const {
  if (prefix.size() + 1 != dim_) fail(ErrorKind::DimensionMismatch, "eval_line: bad prefix size");
  if (const auto* s = std::get_if<SeparableDensity>(&v_)) {
    double common = s->scale;
    for (std::size_t k = 0; k + 1 < dim_; ++k) {
      for (const Factor& f : s->axes[k]) common *= f.eval(prefix[k]);
    }
    std::fill(out.begin(), out.end(), common);
    if (common == 0.0) return;
    std::vector<double> tmp;
    for (const Factor& f : s->axes[dim_ - 1]) {
      if (f.kind == FactorKind::Exponential) {
        tmp.resize(xs.size());
        simd::exp_scaled(xs, -f.rate, tmp);
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= tmp[i];
      } else {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= f.eval(xs[i]);
      }
    }
    return;
  }
  std::vector<double> x(dim_);
  std::copy(prefix.begin(), prefix.end(), x.begin());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x[dim_ - 1] = xs[i];
    out[i] = eval(x);
  }
}

double DensitySpec::extent(std::size_t axis) const {
  if (axis >= dim_) fail(ErrorKind::OutOfRange, "density extent: axis out of range");
  return std::visit(Overloaded{
                        [&](const SeparableDensity& s) {
                          double e = kInf;
                          for (const Factor& f : s.axes[axis]) e = std::min(e, f.extent());
                          return e;
                        },
                        [&](const BoxDensity& b) { return b.corner[axis]; },
                        [&](const GridDensity& g) { return std::exp(g.grid.axis(axis).u_max); },
                        [&](const CallbackDensity& c) {
                          return c.extent.empty() ? kInf : c.extent[axis];
                        },
                    },
                    v_);
}

std::vector<double> DensitySpec::breakpoints(std::size_t axis) const {
  std::vector<double> out;
  if (const auto* s = std::get_if<SeparableDensity>(&v_)) {
    for (const Factor& f : s->axes[axis]) {
      if (f.kind == FactorKind::IndicatorScale) {
        out.push_back(f.lo);
        out.push_back(f.hi);
      } else if (f.kind == FactorKind::Power || f.kind == FactorKind::Bump) {
        if (std::isfinite(f.cutoff)) out.push_back(f.cutoff);
      }
    }
  } else if (const auto* b = std::get_if<BoxDensity>(&v_)) {
    if (!b->lower.empty() && b->lower[axis] > 0.0) out.push_back(b->lower[axis]);
    out.push_back(b->corner[axis]);
  } else if (const auto* g = std::get_if<GridDensity>(&v_)) {
    out.push_back(std::exp(g->grid.axis(axis).u_min));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool DensitySpec::nonnegative_by_construction() const {
  return std::visit(Overloaded{
                        [](const SeparableDensity& s) {
                          if (s.scale < 0.0) return false;
                          for (const auto& axis : s.axes) {
                            for (const Factor& f : axis) {
                              if (!f.nonnegative()) return false;
                            }
                          }
                          return true;
                        },
                        [](const BoxDensity& b) { return b.value >= 0.0; },
                        [](const GridDensity& g) {
                          return std::all_of(g.values.begin(), g.values.end(),
                                             [](double v) { return v >= 0.0; });
                        },
                        [](const CallbackDensity& c) { return c.nonnegative; },
                    },
                    v_);
}

DensitySpec DensitySpec::abs() const {
  return std::visit(Overloaded{
                        [](SeparableDensity s) -> DensitySpec {
                          s.scale = std::abs(s.scale);
                          for (auto& axis : s.axes) {
                            for (Factor& f : axis) f.inside = std::abs(f.inside);
                          }
                          return DensitySpec(std::move(s));
                        },
                        [](BoxDensity b) -> DensitySpec {
                          b.value = std::abs(b.value);
                          return DensitySpec(std::move(b));
                        },
                        [](GridDensity g) -> DensitySpec {
                          for (double& v : g.values) v = std::abs(v);
                          return DensitySpec(std::move(g));
                        },
                        [](CallbackDensity c) -> DensitySpec {
                          auto fn = c.fn;
                          c.fn = [fn](std::span<const double> x) { return std::abs(fn(x)); };
                          c.nonnegative = true;
                          c.label = "|" + c.label + "|";
                          return DensitySpec(std::move(c));
                        },
                    },
                    v_);
}

double eval_density(const DensitySpec& d, const OrthantPoint& x) { return d.eval(x.coords()); }

MeasureModel::MeasureModel(std::size_t dim, std::vector<Atom> atoms,
                           std::optional<DensitySpec> density)
    : dim_(dim), atoms_(std::move(atoms)), density_(std::move(density)) {
  if (dim_ == 0) fail(ErrorKind::InvalidArgument, "measure needs n >= 1");
  for (const Atom& a : atoms_) {
    if (a.location.size() != dim_) fail(ErrorKind::DimensionMismatch, "atom location has wrong dimension");
    for (double c : a.location) {
      if (!(c >= 0.0 && std::isfinite(c))) fail(ErrorKind::InvalidArgument, "atom outside the orthant");
    }
    if (!std::isfinite(a.weight)) fail(ErrorKind::InvalidArgument, "atom weight must be finite");
  }
  if (density_ && density_->dim() != dim_) {
    fail(ErrorKind::DimensionMismatch, "density dimension differs from measure dimension");
  }
}

MeasureModel MeasureModel::from_density(DensitySpec d) {
  const std::size_t n = d.dim();
  return MeasureModel(n, {}, std::move(d));
}

bool MeasureModel::nonnegative_by_construction() const {
  for (const Atom& a : atoms_) {
    if (a.weight < 0.0) return false;
  }
  return !density_ || density_->nonnegative_by_construction();
}

bool MeasureModel::has_atom_at_origin() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) {
    return a.weight != 0.0 &&
           std::all_of(a.location.begin(), a.location.end(), [](double c) { return c == 0.0; });
  });
}

MeasureModel MeasureModel::abs() const {
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.weight = std::abs(a.weight);
  std::optional<DensitySpec> d;
  if (density_) d = density_->abs();
  return MeasureModel(dim_, std::move(atoms), std::move(d));
}

double total_mass(const MeasureModel& m, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "total_mass: tol must be > 0");
  double mass = 0.0;
  for (const Atom& a : m.atoms()) mass += a.weight;
  if (!m.density()) return mass;
  const DensitySpec& d = *m.density();
  detail::RegionProblem P;
  P.n = d.dim();
  P.limits = [&d](std::size_t k, std::span<const double>, double& lo, double& hi,
                  std::vector<double>& breaks) {
    lo = 0.0;
    hi = d.extent(k);
    breaks = d.breakpoints(k);
  };
  P.inner = [&d](std::span<const double> prefix, std::span<const double> xs, std::span<double> out) {
    d.eval_line(prefix, xs, out);
  };
  const QuadResult<double> r = detail::integrate_region(P, QuadOptions{tol, 1e-13, std::size_t{1} << 20});
  if (!r.converged || !std::isfinite(r.value)) {
    fail(ErrorKind::NonConvergent, "total_mass: density integral did not reach tol = " + std::to_string(tol));
  }
  return mass + r.value;
}

WeightedNormReport weighted_norms(const DensitySpec& d, std::span<const double> c, Alpha alpha,
                                  double tol) {
  const std::size_t n = d.dim();
  if (c.size() != n) fail(ErrorKind::DimensionMismatch, "weighted_norms: strip dimension differs");
  for (double ck : c) {
    if (!(ck < 1.0)) fail(ErrorKind::StripViolation, "weighted_norms: strip needs every c_k < 1");
  }
  const double a = alpha.value();
  WeightedNormReport rep;
  rep.c.assign(c.begin(), c.end());
  rep.alpha = a;

  // In log coordinates x = e^v the weight x^w dx becomes e^{v (w + 1)} dv.
  auto estimate = [&](int power, double eps, double big) {
    std::vector<double> shift(n);
    for (std::size_t k = 0; k < n; ++k) {
      shift[k] = power == 1 ? a * (c[k] - 1.0) + 1.0 : 2.0 * a * (c[k] - 1.0) + 2.0;
    }
    detail::RegionProblem P;
    P.n = n;
    P.limits = [&](std::size_t k, std::span<const double>, double& lo, double& hi,
                   std::vector<double>& breaks) {
      const double e = d.extent(k);
      lo = std::log(eps);
      hi = std::log(std::isinf(e) ? big : e);
      breaks.clear();
      for (double bp : d.breakpoints(k)) {
        if (bp > 0.0) breaks.push_back(std::log(bp));
      }
    };
    P.inner = [&](std::span<const double> prefix, std::span<const double> vs, std::span<double> out) {
      std::vector<double> x(n);
      double w_prefix = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        x[k] = std::exp(prefix[k]);
        w_prefix += shift[k] * prefix[k];
      }
      for (std::size_t i = 0; i < vs.size(); ++i) {
        x[n - 1] = std::exp(vs[i]);
        const double av = std::abs(d.eval(x));
        const double base = power == 1 ? av : av * av;
        out[i] = base == 0.0 ? 0.0 : base * std::exp(w_prefix + shift[n - 1] * vs[i]);
      }
    };
    return detail::integrate_region(P, QuadOptions{0.01 * tol, 1e-10, std::size_t{1} << 20});
  };

  // Truncations eps_j = 10^{-2^j} (and 10^{2^j} for unbounded axes); the
  // estimate is declared finite once the increments shrink geometrically.
  auto run = [&](int power, double& value, bool& finite) {
    std::vector<double> seq;
    bool all_converged = true;
    double d0 = kInf;
    double d1 = kInf;
    for (int j = 0; j <= 6; ++j) {
      const double scale = std::pow(10.0, std::pow(2.0, j));
      const QuadResult<double> r = estimate(power, 1.0 / scale, scale);
      all_converged = all_converged && r.converged && std::isfinite(r.value);
      if (!seq.empty()) {
        d0 = d1;
        d1 = std::abs(r.value - seq.back());
      }
      seq.push_back(r.value);
      if (!std::isfinite(r.value)) break;
      if (seq.size() >= 3 && d1 <= std::max(tol, 1e-10 * std::abs(r.value))) break;
    }
    value = seq.back();
    finite = all_converged && seq.size() >= 3 && (d1 <= tol || d1 <= 0.25 * d0);
  };
  run(1, rep.l1_weighted, rep.l1_finite);
  run(2, rep.l2_weighted, rep.l2_finite);
  return rep;
}

}  // namespace cesradon
