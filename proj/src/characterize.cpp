#include "cesradon/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "cesradon/error.hpp"
#include "cesradon/parallel.hpp"
#include "cesradon/quadrature.hpp"
#include "region.hpp"

namespace cesradon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckReport make_report(std::string condition, double violation, double tol, std::optional<Witness> w) {
  CheckReport r;
  r.condition = std::move(condition);
  r.tolerance = tol;
  r.violation = violation;
  r.verdict = classify(violation, tol);
  if (r.verdict != Verdict::Pass) r.witness = std::move(w);
  if (r.verdict == Verdict::Fail && !r.witness) r.witness = Witness{{}, {violation}, "no location recorded"};
  return r;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// All multi-indices k in N^n with |k| <= k_max.
void multi_indices(std::size_t n, int k_max, std::vector<std::vector<int>>& out) {
  std::vector<int> k(n, 0);
  for (;;) {
    out.push_back(k);
    std::size_t j = 0;
    for (; j < n; ++j) {
      ++k[j];
      int s = 0;
      for (int v : k) s += v;
      if (s <= k_max) break;
      k[j] = 0;
    }
    if (j == n) return;
  }
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify(double violation, double tol) noexcept {
  if (!(violation == violation)) return Verdict::Fail;
  if (violation <= tol) return Verdict::Pass;
  if (violation <= 10.0 * tol) return Verdict::Inconclusive;
  return Verdict::Fail;
}

nlohmann::json report_to_json(const CheckReport& r) {
  nlohmann::json j;
  j["condition"] = r.condition;
  j["verdict"] = std::string(to_string(r.verdict));
  j["tolerance"] = r.tolerance;
  j["violation"] = r.violation;
  if (r.witness) {
    j["witness"] = {{"point", r.witness->point}, {"values", r.witness->values}, {"note", r.witness->note}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

CheckReport check_radon_nonneg(const RadonSlice& rs, double tol) {
  double worst = 0.0;
  std::optional<Witness> w;
  for (std::size_t i = 0; i < rs.values.size(); ++i) {
    if (-rs.values[i] > worst) {
      worst = -rs.values[i];
      w = Witness{{rs.p0_grid[i]}, {rs.values[i]}, "R(p, p0) < 0"};
      w->point.insert(w->point.begin(), rs.p.begin(), rs.p.end());
    }
  }
  for (std::size_t i = 1; i < rs.cdf_values.size(); ++i) {
    const double drop = rs.cdf_values[i - 1] - rs.cdf_values[i];
    if (drop > worst) {
      worst = drop;
      w = Witness{{rs.p0_grid[i - 1], rs.p0_grid[i]}, {rs.cdf_values[i - 1], rs.cdf_values[i]},
                  "sublevel mass decreases between p0 values"};
      w->point.insert(w->point.begin(), rs.p.begin(), rs.p.end());
    }
  }
  return make_report("radon_nonneg", worst, tol, w);
}

CheckReport check_radon_homogeneity(const MassProvider& mass, std::span<const PricePoint> probes, double tol,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
  std::vector<double> lambdas(probes.size());
  for (double& l : lambdas) l = std::exp(log_lambda(rng));
  std::vector<double> diff(probes.size());
  std::vector<double> base(probes.size());
  std::vector<double> scaled(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    const PricePoint& pp = probes[i];
    const PricePoint sp = pp.scaled(lambdas[i]);
    base[i] = mass(pp.p(), pp.p0());
    scaled[i] = mass(sp.p(), sp.p0());
    diff[i] = std::abs(scaled[i] - base[i]);
  });
  double worst = 0.0;
  std::optional<Witness> w;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (diff[i] > worst || !(diff[i] == diff[i])) {
      worst = diff[i] == diff[i] ? diff[i] : kInf;
      std::vector<double> pt(probes[i].p().begin(), probes[i].p().end());
      pt.push_back(probes[i].p0());
      pt.push_back(lambdas[i]);
      w = Witness{pt, {base[i], scaled[i]}, "mass(l p, l p0) != mass(p, p0); point = (p, p0, l)"};
    }
  }
  return make_report("radon_homogeneity", worst, tol, w);
}

FProbe f_probe_from_radon(MassProvider mass, Alpha alpha, double tol) {
  const double a = alpha.value();
  FProbe f;
  f.alpha = a;
  f.provenance = Provenance::FromRadonData;
  f.eval = [mass = std::move(mass), a, tol](std::span<const double> p) {
    std::vector<double> q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!(p[k] > 0.0)) fail(ErrorKind::InvalidArgument, "F probe needs strictly positive p");
      q[k] = std::pow(p[k], 1.0 / a);
    }
    // Integration by parts: int e^{-t^a} dM(t) = int_0^inf e^{-s} M(s^{1/a}) ds.
    auto integrand = [&](double s) { return std::exp(-s) * mass(q, std::pow(s, 1.0 / a)); };
    const QuadResult<double> r = integrate(integrand, 0.0, kInf, QuadOptions{0.01 * tol, 1e-10, std::size_t{1} << 16});
    if (!r.converged || !std::isfinite(r.value)) {
      fail(ErrorKind::TailDivergence, "F probe: integral against e^{-s} did not settle");
    }
    return r.value;
  };
  return f;
}

FProbe f_probe_from_measure(const MeasureModel& m, Alpha alpha, double tol) {
  const double a = alpha.value();
  FProbe f;
  f.alpha = a;
  f.provenance = Provenance::FromMeasure;
  f.eval = [m, a, tol](std::span<const double> p) {
    if (p.size() != m.dim()) fail(ErrorKind::DimensionMismatch, "F probe: dimension differs from measure");
    auto weight = [&](std::size_t k, double x) { return std::exp(-p[k] * (a == 1.0 ? x : std::pow(x, a))); };
    double s = 0.0;
    for (const Atom& at : m.atoms()) {
      double e = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) e += p[k] * (a == 1.0 ? at.location[k] : std::pow(at.location[k], a));
      s += at.weight * std::exp(-e);
    }
    if (!m.density()) return s;
    const DensitySpec& d = *m.density();
    detail::RegionProblem P;
    P.n = d.dim();
    P.limits = [&](std::size_t k, std::span<const double>, double& lo, double& hi, std::vector<double>& br) {
      lo = 0.0;
      hi = d.extent(k);
      br = d.breakpoints(k);
    };
    P.inner = [&](std::span<const double> prefix, std::span<const double> xs, std::span<double> out) {
      d.eval_line(prefix, xs, out);
      double wp = 1.0;
      for (std::size_t k = 0; k < prefix.size(); ++k) wp *= weight(k, prefix[k]);
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= wp * weight(prefix.size(), xs[i]);
    };
    const QuadResult<double> r = detail::integrate_region(P, QuadOptions{tol, 1e-11, std::size_t{1} << 20});
    if (!r.converged) fail(ErrorKind::NonConvergent, "F probe: density quadrature did not converge");
    return s + r.value;
  };
  return f;
}

FProbe f_probe_from_profit(ProfitProvider profit, Alpha alpha, double tol) {
  const double a = alpha.value();
  FProbe f;
  f.alpha = a;
  f.provenance = Provenance::FromProfitData;
  // Two integrations by parts move both derivatives onto e^{-t^a}; no differencing of Pi,
  // so kinks from atoms stay kinks instead of steep ramps.
  f.eval = [profit = std::move(profit), a, tol](std::span<const double> p) {
    std::vector<double> q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!(p[k] > 0.0)) fail(ErrorKind::InvalidArgument, "F probe needs strictly positive p");
      q[k] = std::pow(p[k], 1.0 / a);
    }
    auto integrand = [&](double s) {
      if (!(s > 0.0)) return 0.0;
      const double t = std::pow(s, 1.0 / a);
      const double w = a * s / t + (1.0 - a) / t;
      return std::exp(-s) * w * profit(q, t);
    };
    const QuadResult<double> r = integrate(integrand, 0.0, kInf, QuadOptions{0.01 * tol, 1e-10, std::size_t{1} << 16});
    if (!r.converged || !std::isfinite(r.value)) {
      fail(ErrorKind::TailDivergence, "F probe: integral of Pi against e^{-s} did not settle");
    }
    return r.value;
  };
  return f;
}

CheckReport check_completely_monotone(const FProbe& f, std::span<const std::vector<double>> grid, double h,
                                      int k_max, double tol, std::string condition) {
  if (!(h > 0.0) || k_max < 1) fail(ErrorKind::InvalidArgument, "complete monotonicity check needs h > 0, k_max >= 1");
  if (grid.empty()) return make_report(std::move(condition), 0.0, tol, std::nullopt);
  const std::size_t n = grid.front().size();
  std::vector<std::vector<int>> ks;
  multi_indices(n, k_max, ks);
  // Lattice offsets needed per grid point are exactly the multi-indices.
  std::vector<double> values(grid.size() * ks.size());
  parallel_for(values.size(), [&](std::size_t idx) {
    const std::vector<double>& q = grid[idx / ks.size()];
    const std::vector<int>& off = ks[idx % ks.size()];
    std::vector<double> x(q);
    for (std::size_t j = 0; j < n; ++j) x[j] += h * off[j];
    values[idx] = f(x);
  });
  std::map<std::vector<int>, std::size_t> slot;
  for (std::size_t i = 0; i < ks.size(); ++i) slot[ks[i]] = i;
  double worst = 0.0;
  std::optional<Witness> w;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (const std::vector<int>& k : ks) {
      int order = 0;
      for (int v : k) order += v;
      // Delta^k F(q) = sum_{j <= k} prod (-1)^{k_i - j_i} C(k_i, j_i) F(q + j h)
      double acc = 0.0;
      for (const std::vector<int>& j : ks) {
        bool inside = true;
        double coef = 1.0;
        for (std::size_t i = 0; i < n && inside; ++i) {
          if (j[i] > k[i]) {
            inside = false;
          } else {
            coef *= binomial(k[i], j[i]) * (((k[i] - j[i]) % 2) ? -1.0 : 1.0);
          }
        }
        if (inside) acc += coef * values[g * ks.size() + slot[j]];
      }
      const double signed_val = (order % 2 ? -1.0 : 1.0) * acc;
      const double viol = std::isfinite(signed_val) ? -signed_val : kInf;
      if (viol > worst) {
        worst = viol;
        std::vector<double> kd(k.begin(), k.end());
        std::ostringstream note;
        note << "(-1)^|k| Delta_h^k F < 0 with h = " << h << "; values = (k..., signed difference)";
        kd.push_back(signed_val);
        w = Witness{grid[g], kd, note.str()};
      }
    }
  }
  return make_report(std::move(condition), worst, tol, w);
}

CheckReport check_f_bounded(const FProbe& f, std::span<const double> direction, double tol, std::string condition) {
  std::vector<double> lam;
  std::vector<double> v;
  for (int j = 0; j <= 8; ++j) {
    const double l = std::pow(10.0, -j);
    std::vector<double> x(direction.begin(), direction.end());
    for (double& c : x) c *= l;
    lam.push_back(l);
    v.push_back(f(x));
  }
  std::vector<double> pt(direction.begin(), direction.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || std::abs(v[i]) > 1e12) {
      return make_report(std::move(condition), kInf, tol, Witness{pt, {lam[i], v[i]}, "F(l d) blows up as l -> 0"});
    }
  }
  const double d1 = std::abs(v[8] - v[7]);
  const double d0 = std::abs(v[7] - v[6]);
  if (d1 <= tol || d1 <= 0.5 * d0) return make_report(std::move(condition), 0.0, tol, std::nullopt);
  CheckReport r = make_report(std::move(condition), d1, tol, Witness{pt, {v[6], v[7], v[8]}, "F(l d) still moving at l = 1e-8"});
  if (r.verdict == Verdict::Fail) r.verdict = Verdict::Inconclusive;
  return r;
}

CheckReport check_f_decay(const FProbe& f, std::span<const double> direction, double tol, std::string condition) {
  std::vector<double> v;
  for (int j = 0; j <= 8; ++j) {
    std::vector<double> x(direction.begin(), direction.end());
    for (double& c : x) c *= std::pow(10.0, j);
    v.push_back(f(x));
  }
  std::vector<double> pt(direction.begin(), direction.end());
  const double last = v[8];
  const double prev = v[7];
  if (std::abs(last) <= tol) return make_report(std::move(condition), 0.0, tol, std::nullopt);
  const Witness w{pt, {prev, last}, "F(l d) at l = 1e7, 1e8"};
  if (std::abs(last - prev) <= 0.01 * std::abs(last)) {
    // Plateau away from zero: the limit is not 0 (e.g. mass at the origin).
    CheckReport r = make_report(std::move(condition), std::abs(last), tol, w);
    r.verdict = Verdict::Fail;
    return r;
  }
  if (std::abs(last) > 0.9 * std::abs(prev)) {
    CheckReport r = make_report(std::move(condition), std::abs(last), tol, w);
    r.verdict = Verdict::Inconclusive;
    return r;
  }
  return make_report(std::move(condition), 0.0, tol, std::nullopt);
}

std::vector<std::vector<double>> default_f_grid(std::size_t n, double* pitch) {
  if (pitch) *pitch = 0.5;
  if (n == 1) return {{0.5}, {1.0}, {1.5}, {2.0}, {2.5}};
  std::vector<std::vector<double>> g;
  const double pts[5][2] = {{0.5, 0.5}, {1.0, 0.5}, {0.5, 1.0}, {1.0, 1.0}, {1.5, 1.5}};
  for (const auto& p : pts) {
    std::vector<double> q(n, p[1]);
    q[0] = p[0];
    g.push_back(q);
  }
  return g;
}

std::vector<PricePoint> random_probes(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> price(0.5, 2.0);
  std::uniform_real_distribution<double> level(0.5, 3.0);
  std::vector<PricePoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> p(n);
    for (double& v : p) v = price(rng);
    out.emplace_back(std::move(p), level(rng));
  }
  return out;
}

std::vector<CheckReport> check_profit_conditions(const ProfitProvider& profit, Alpha alpha,
                                                 std::span<const PricePoint> probes, const CharacterizeOptions& opt) {
  std::vector<CheckReport> out;
  const double tol = opt.tol;
  if (probes.empty()) fail(ErrorKind::InvalidArgument, "profit checks need probes");
  const std::size_t n = probes.front().dim();
  auto pi = [&](const PricePoint& pp) { return profit(pp.p(), pp.p0()); };

  {  // convexity in (p, p0) at midpoints of consecutive probe pairs
    double worst = 0.0;
    std::optional<Witness> w;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const PricePoint& A = probes[i];
      const PricePoint& B = probes[(i + 1) % probes.size()];
      std::vector<double> mid(n);
      for (std::size_t k = 0; k < n; ++k) mid[k] = 0.5 * (A.p()[k] + B.p()[k]);
      const PricePoint M(mid, 0.5 * (A.p0() + B.p0()));
      const double va = pi(A), vb = pi(B), vm = pi(M);
      const double viol = vm - 0.5 * (va + vb);
      if (viol > worst) {
        worst = viol;
        std::vector<double> pt(mid);
        pt.push_back(M.p0());
        w = Witness{pt, {va, vb, vm}, "Pi(midpoint) above the chord"};
      }
    }
    out.push_back(make_report("profit_convexity", worst, tol, w));
  }
  {  // degree-1 homogeneity
    std::mt19937_64 rng(opt.seed + 17);
    std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
    double worst = 0.0;
    std::optional<Witness> w;
    for (const PricePoint& pp : probes) {
      const double l = std::exp(log_lambda(rng));
      const double base = pi(pp);
      const double scaled = pi(pp.scaled(l));
      const double viol = std::abs(scaled - l * base);
      if (viol > worst || !(viol == viol)) {
        worst = viol == viol ? viol : kInf;
        std::vector<double> pt(pp.p().begin(), pp.p().end());
        pt.push_back(pp.p0());
        pt.push_back(l);
        w = Witness{pt, {base, scaled}, "Pi(l p, l p0) != l Pi(p, p0); point = (p, p0, l)"};
      }
    }
    out.push_back(make_report("profit_homogeneity", worst, tol, w));
  }
  {  // Pi(p, +0) = dPi/dp0(p, +0) = 0 by linear extrapolation
    double worst = 0.0;
    std::optional<Witness> w;
    for (const PricePoint& pp : probes) {
      const double h = 1e-4 * pp.p0();
      const double f1 = profit(pp.p(), h), f2 = profit(pp.p(), 2 * h), f4 = profit(pp.p(), 4 * h);
      const double value0 = 2.0 * f1 - f2;
      const double d1 = (f2 - f1) / h;
      const double d2 = (f4 - f2) / (2.0 * h);
      const double slope0 = 2.0 * d1 - d2;
      const double viol = std::max(std::abs(value0), std::abs(slope0));
      if (viol > worst) {
        worst = viol;
        std::vector<double> pt(pp.p().begin(), pp.p().end());
        w = Witness{pt, {value0, slope0}, "extrapolated Pi(p, +0) and dPi/dp0(p, +0)"};
      }
    }
    out.push_back(make_report("profit_boundary", worst, tol, w));
  }
  {  // F from the profit data
    const FProbe F = f_probe_from_profit(profit, alpha, 1e-3 * tol);
    double pitch = 0.5;
    std::vector<std::vector<double>> grid = opt.f_grid.empty() ? default_f_grid(n, &pitch) : opt.f_grid;
    const double h = opt.h > 0.0 ? opt.h : 0.1 * pitch;
    out.push_back(check_completely_monotone(F, grid, h, opt.k_max, tol, "profit_f_completely_monotone"));
    out.push_back(check_f_bounded(F, std::vector<double>(n, 1.0), tol, "profit_f_bounded"));
  }
  return out;
}

std::vector<CheckReport> characterize_f(const FProbe& f, std::size_t n, const CharacterizeOptions& opt) {
  std::vector<CheckReport> out;
  double pitch = 0.5;
  std::vector<std::vector<double>> grid = opt.f_grid.empty() ? default_f_grid(n, &pitch) : opt.f_grid;
  const double h = opt.h > 0.0 ? opt.h : 0.1 * pitch;
  const std::vector<double> dir(n, 1.0);
  out.push_back(check_completely_monotone(f, grid, h, opt.k_max, opt.tol, "radon_f_completely_monotone"));
  out.push_back(check_f_bounded(f, dir, opt.tol, "radon_f_bounded"));
  out.push_back(check_f_decay(f, dir, opt.tol, "radon_f_decay"));
  return out;
}

std::vector<CheckReport> characterize_measure(const MeasureModel& m, Alpha alpha, const CharacterizeOptions& opt) {
  const std::size_t n = m.dim();
  const Tolerance qtol{1e-13, 1e-12};
  const std::vector<PricePoint> probes = random_probes(n, opt.probes, opt.seed);
  std::vector<CheckReport> out;

  {  // sign of R along a few price rays
    std::vector<double> grid;
    for (int i = 0; i < 40; ++i) grid.push_back(0.05 + 0.1 * i);
    CheckReport worst;
    worst.condition = "radon_nonneg";
    worst.tolerance = opt.tol;
    const MeasureModel dens = m.without_atoms();
    for (std::size_t i = 0; i < std::min<std::size_t>(3, probes.size()) + 1; ++i) {
      const std::vector<double> p = i == 0 ? std::vector<double>(n, 1.0)
                                           : std::vector<double>(probes[i - 1].p().begin(), probes[i - 1].p().end());
      RadonSlice rs = radon_slice(dens, p, alpha, grid, RadonMethod::Derivative, RadonOptions{qtol, 1e-3});
      for (std::size_t j = 0; j < grid.size(); ++j) rs.cdf_values[j] = sublevel_mass(m, PricePoint(p, grid[j]), alpha, qtol);
      CheckReport r = check_radon_nonneg(rs, opt.tol);
      if (i == 0 || r.violation > worst.violation) worst = r;
    }
    out.push_back(worst);
  }
  MassProvider mass = [m, alpha, qtol](std::span<const double> p, double p0) {
    return sublevel_mass(m, PricePoint(std::vector<double>(p.begin(), p.end()), p0), alpha, qtol);
  };
  out.push_back(check_radon_homogeneity(mass, probes, opt.tol, opt.seed));
  {
    const FProbe F = f_probe_from_radon(mass, alpha, 1e-3 * opt.tol);
    for (CheckReport& r : characterize_f(F, n, opt)) out.push_back(std::move(r));
  }
  // Density part through the warped route when alpha != 1; the direct one is far slower there.
  const bool warp = !alpha.is_one() && m.density().has_value();
  const MeasureModel atoms_only(n, m.atoms(), std::nullopt);
  ProfitProvider profit = [m, atoms_only, warp, alpha, qtol](std::span<const double> p, double p0) {
    const PricePoint pp(std::vector<double>(p.begin(), p.end()), p0);
    if (!warp) return profit_transform(m, pp, alpha, qtol);
    return profit_transform(atoms_only, pp, alpha, qtol) + profit_transform_warped(*m.density(), pp, alpha, qtol);
  };
  for (CheckReport& r : check_profit_conditions(profit, alpha, probes, opt)) out.push_back(std::move(r));
  return out;
}

}  // namespace cesradon
