#include "cesradon/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "cesradon/error.hpp"
#include "cesradon/parallel.hpp"
#include "cesradon/simd.hpp"
#include "region.hpp"

namespace cesradon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Integrand { Profit, Mass };

double pow_alpha(double v, double a) { return a == 1.0 ? v : (v > 0.0 ? std::pow(v, a) : 0.0); }

double atoms_part(const MeasureModel& m, const PricePoint& pp, Alpha alpha, Integrand kind) {
  double s = 0.0;
  for (const Atom& at : m.atoms()) {
    const double level = ces_dot(pp.p(), at.location, alpha);
    if (kind == Integrand::Profit) {
      s += at.weight * std::max(0.0, pp.p0() - level);
    } else if (level <= pp.p0()) {
      s += at.weight;
    }
  }
  return s;
}

double density_part(const DensitySpec& d, const PricePoint& pp, Alpha alpha, Integrand kind,
                    Tolerance tol) {
  const std::size_t n = d.dim();
  if (pp.dim() != n) fail(ErrorKind::DimensionMismatch, "price dimension differs from measure");
  const double a = alpha.value();
  const double p0 = pp.p0();
  const double p0a = pow_alpha(p0, a);
  const std::span<const double> p = pp.p();
  for (std::size_t k = 0; k < n; ++k) {
    if (p[k] == 0.0 && std::isinf(d.extent(k))) {
      std::ostringstream os;
      os << "p_" << k << " = 0 with unbounded density support on that axis";
      fail(ErrorKind::UnboundedRegion, os.str());
    }
  }
  auto partial_of = [&](std::span<const double> prefix) {
    double s = 0.0;
    for (std::size_t j = 0; j < prefix.size(); ++j) s += pow_alpha(p[j] * prefix[j], a);
    return s;
  };
  detail::RegionProblem P;
  P.n = n;
  P.limits = [&](std::size_t k, std::span<const double> prefix, double& lo, double& hi,
                 std::vector<double>& breaks) {
    const double partial = partial_of(prefix);
    lo = 0.0;
    hi = std::min(remaining_bound(p0, partial, p[k], alpha), d.extent(k));
    breaks.clear();
    for (double b : d.breakpoints(k)) {
      if (b > 0.0 && b < hi) breaks.push_back(b);
    }
    // Kink where the next axis switches from the level bound to its support edge.
    if (k + 1 < n && p[k] > 0.0 && p[k + 1] > 0.0 && std::isfinite(d.extent(k + 1))) {
      const double rem = p0a - partial - pow_alpha(p[k + 1] * d.extent(k + 1), a);
      if (rem > 0.0) {
        const double xs = (a == 1.0 ? rem : std::pow(rem, 1.0 / a)) / p[k];
        if (xs < hi) breaks.push_back(xs);
      }
    }
  };
  P.inner = [&](std::span<const double> prefix, std::span<const double> xs, std::span<double> out) {
    d.eval_line(prefix, xs, out);
    if (kind == Integrand::Mass) return;
    const double partial = partial_of(prefix);
    std::array<double, 21> level_buf{};
    std::vector<double> level_heap;
    std::span<double> lv(level_buf.data(), xs.size());
    if (xs.size() > level_buf.size()) {
      level_heap.resize(xs.size());
      lv = level_heap;
    }
    simd::ces_extend(partial, p[n - 1], a, xs, lv);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= std::max(0.0, p0 - lv[i]);
  };
  const QuadResult<double> r =
      detail::integrate_region(P, QuadOptions{tol.abs, tol.rel, std::size_t{1} << 20});
  if (!r.converged || !std::isfinite(r.value)) {
    std::ostringstream os;
    os << (kind == Integrand::Profit ? "profit_transform" : "sublevel_mass")
       << ": quadrature stopped at error " << r.abs_error << " after " << r.evaluations
       << " evaluations";
    fail(ErrorKind::NonConvergent, os.str());
  }
  return r.value;
}

double transform(const MeasureModel& m, const PricePoint& pp, Alpha alpha, Integrand kind,
                 Tolerance tol) {
  if (pp.dim() != m.dim()) fail(ErrorKind::DimensionMismatch, "price dimension differs from measure");
  double v = atoms_part(m, pp, alpha, kind);
  if (m.density()) v += density_part(*m.density(), pp, alpha, kind, tol);
  return v;
}

}  // namespace

double profit_transform(const MeasureModel& m, const PricePoint& pp, Alpha alpha, Tolerance tol) {
  return transform(m, pp, alpha, Integrand::Profit, tol);
}

double sublevel_mass(const MeasureModel& m, const PricePoint& pp, Alpha alpha, Tolerance tol) {
  return transform(m, pp, alpha, Integrand::Mass, tol);
}

double profit_transform_warped(const DensitySpec& d, const PricePoint& pp, Alpha alpha,
                               Tolerance tol) {
  const std::size_t n = d.dim();
  if (pp.dim() != n) fail(ErrorKind::DimensionMismatch, "price dimension differs from density");
  const double a = alpha.value();
  const double inv = 1.0 / a;
  const double p0 = pp.p0();
  const double p0a = pow_alpha(p0, a);
  std::vector<double> q(n);  // p_k^alpha
  for (std::size_t k = 0; k < n; ++k) {
    q[k] = pow_alpha(pp.p()[k], a);
    if (q[k] == 0.0 && std::isinf(d.extent(k))) {
      fail(ErrorKind::UnboundedRegion, "warped profit: zero price on an unbounded axis");
    }
  }
  const double norm = std::pow(a, -static_cast<double>(n));
  auto linear_of = [&](std::span<const double> prefix) {
    double s = 0.0;
    for (std::size_t j = 0; j < prefix.size(); ++j) s += q[j] * prefix[j];
    return s;
  };
  detail::RegionProblem P;
  P.n = n;
  P.limits = [&](std::size_t k, std::span<const double> prefix, double& lo, double& hi,
                 std::vector<double>& breaks) {
    const double rem = std::max(0.0, p0a - linear_of(prefix));
    lo = 0.0;
    hi = std::min(q[k] > 0.0 ? rem / q[k] : kInf, pow_alpha(d.extent(k), a));
    breaks.clear();
    for (double b : d.breakpoints(k)) {
      const double bw = pow_alpha(b, a);
      if (bw > 0.0 && bw < hi) breaks.push_back(bw);
    }
  };
  P.inner = [&](std::span<const double> prefix, std::span<const double> ys, std::span<double> out) {
    std::vector<double> x(n);
    double jac_prefix = norm;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      x[k] = std::pow(prefix[k], inv);
      jac_prefix *= prefix[k] > 0.0 ? std::pow(prefix[k], inv - 1.0) : (inv == 1.0 ? 1.0 : 0.0);
    }
    const double lin = linear_of(prefix);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      x[n - 1] = std::pow(ys[i], inv);
      const double jac =
          jac_prefix * (ys[i] > 0.0 ? std::pow(ys[i], inv - 1.0) : (inv == 1.0 ? 1.0 : 0.0));
      const double level = std::pow(std::max(0.0, lin + q[n - 1] * ys[i]), inv);
      out[i] = std::max(0.0, p0 - level) * d.eval(x) * jac;
    }
  };
  const QuadResult<double> r =
      detail::integrate_region(P, QuadOptions{tol.abs, tol.rel, std::size_t{1} << 20});
  if (!r.converged) fail(ErrorKind::NonConvergent, "warped profit: quadrature did not converge");
  return r.value;
}

namespace {

// R(p, p0) for n = 2 as a level-curve integral. With (p1 x1)^a = p0^a s and
// (p2 x2)^a = p0^a (1 - s), the area element is
// t / (a p1 p2) (s (1 - s))^{1/a - 1} dt ds, so differentiating the sublevel
// mass in p0 leaves the s-integral at t = p0.
double surface_value(const DensitySpec& d, std::span<const double> p, double a, double p0,
                     Tolerance tol) {
  const double inv = 1.0 / a;
  const double c1 = p0 / p[0];
  const double c2 = p0 / p[1];
  std::vector<double> breaks;
  for (double b : d.breakpoints(0)) breaks.push_back(std::pow(b * p[0] / p0, a));
  for (double b : d.breakpoints(1)) breaks.push_back(1.0 - std::pow(b * p[1] / p0, a));
  for (std::size_t k = 0; k < 2; ++k) {
    const double e = d.extent(k);
    if (std::isfinite(e)) {
      breaks.push_back(k == 0 ? std::pow(e * p[0] / p0, a) : 1.0 - std::pow(e * p[1] / p0, a));
    }
  }
  auto f = [&](std::span<const double> ss, std::span<double> out) {
    double x[2];
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const double s = ss[i];
      x[0] = c1 * std::pow(s, inv);
      x[1] = c2 * std::pow(1.0 - s, inv);
      const double w = inv == 1.0 ? 1.0 : std::pow(s * (1.0 - s), inv - 1.0);
      out[i] = d.eval(x) * w;
    }
  };
  const QuadResult<double> r = integrate_batch<double>(f, 0.0, 1.0, QuadOptions{tol.abs, tol.rel}, breaks);
  if (!r.converged) fail(ErrorKind::NonConvergent, "surface radon: quadrature did not converge");
  return p0 / (a * p[0] * p[1]) * r.value;
}

}  // namespace

RadonSlice radon_slice(const MeasureModel& m, std::span<const double> p, Alpha alpha,
                       std::span<const double> p0_grid, RadonMethod method, const RadonOptions& opt) {
  if (p.size() != m.dim()) fail(ErrorKind::DimensionMismatch, "radon_slice: price dimension differs");
  for (std::size_t i = 0; i < p0_grid.size(); ++i) {
    if (!(p0_grid[i] > 0.0) || (i > 0 && !(p0_grid[i] > p0_grid[i - 1]))) {
      fail(ErrorKind::InvalidArgument, "radon_slice: p0 grid must be positive and increasing");
    }
  }
  RadonSlice rs;
  rs.p.assign(p.begin(), p.end());
  rs.alpha = alpha.value();
  rs.p0_grid.assign(p0_grid.begin(), p0_grid.end());
  rs.values.assign(p0_grid.size(), 0.0);
  rs.cdf_values.assign(p0_grid.size(), 0.0);
  if (m.is_zero()) return rs;
  const std::vector<double> pv(p.begin(), p.end());

  if (method == RadonMethod::Surface) {
    if (m.dim() != 2) fail(ErrorKind::MethodUnavailable, "surface method needs n = 2");
    if (!m.atoms().empty() || !m.density()) {
      fail(ErrorKind::MethodUnavailable, "surface method needs an absolutely continuous measure");
    }
    if (!(p[0] > 0.0 && p[1] > 0.0)) {
      fail(ErrorKind::MethodUnavailable, "surface method needs strictly positive prices");
    }
  } else {
    for (const Atom& at : m.atoms()) {
      const double level = ces_dot(p, at.location, alpha);
      for (double p0 : p0_grid) {
        const double h = opt.step_rel * p0;
        if (at.weight != 0.0 && std::abs(level - p0) <= h) {
          fail(ErrorKind::MethodUnavailable, "derivative method: atom on a difference stencil");
        }
      }
    }
  }

  parallel_for(p0_grid.size(), [&](std::size_t i) {
    const double p0 = p0_grid[i];
    rs.cdf_values[i] = sublevel_mass(m, PricePoint(pv, p0), alpha, opt.tol);
    if (!m.density()) return;
    if (method == RadonMethod::Surface) {
      rs.values[i] = surface_value(*m.density(), p, alpha.value(), p0, opt.tol);
      return;
    }
    const MeasureModel dens = m.without_atoms();
    auto mass = [&](double t) { return sublevel_mass(dens, PricePoint(pv, t), alpha, opt.tol); };
    const double h = opt.step_rel * p0;
    const double d1 = (mass(p0 + h) - mass(p0 - h)) / (2.0 * h);
    const double d2 = (mass(p0 + 0.5 * h) - mass(p0 - 0.5 * h)) / h;
    rs.values[i] = (4.0 * d2 - d1) / 3.0;
  });
  return rs;
}

double profit_from_radon(const RadonSlice& rs, double p0) {
  const auto& t = rs.p0_grid;
  if (t.empty() || rs.values.size() != t.size()) {
    fail(ErrorKind::InvalidArgument, "profit_from_radon: empty or inconsistent slice");
  }
  if (!(p0 > 0.0) || p0 > t.back() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "profit_from_radon: p0 = " << p0 << " outside (0, " << t.back() << "]";
    fail(ErrorKind::OutOfRange, os.str());
  }
  const bool have_cdf = rs.cdf_values.size() == t.size();
  // M on the grid: anchored at the first sample, trapezoids of R afterwards.
  std::vector<double> mass(t.size());
  mass[0] = have_cdf ? rs.cdf_values[0] : t[0] * rs.values[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    mass[i] = mass[i - 1] + 0.5 * (t[i] - t[i - 1]) * (rs.values[i] + rs.values[i - 1]);
  }
  // Pi(t0) with M linear on [0, t0] and M(0) = 0.
  if (p0 <= t[0]) {
    const double m_at = mass[0] * p0 / t[0];
    return 0.5 * p0 * m_at;
  }
  double pi = 0.5 * t[0] * mass[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (p0 <= t[i]) {
      const double r_at = rs.values[i - 1] + (rs.values[i] - rs.values[i - 1]) * (p0 - t[i - 1]) / (t[i] - t[i - 1]);
      const double m_at = mass[i - 1] + 0.5 * (p0 - t[i - 1]) * (rs.values[i - 1] + r_at);
      return pi + 0.5 * (p0 - t[i - 1]) * (mass[i - 1] + m_at);
    }
    pi += 0.5 * (t[i] - t[i - 1]) * (mass[i] + mass[i - 1]);
  }
  return pi;
}

}  // namespace cesradon
