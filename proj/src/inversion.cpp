#include "cesradon/inversion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cesradon/error.hpp"
#include "cesradon/measures_json.hpp"
#include "cesradon/parallel.hpp"
#include "cesradon/quadrature.hpp"
#include "cesradon/sample_cache.hpp"
#include "cesradon/simd.hpp"

namespace cesradon {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalized forward DFT (e^{-2 pi i jk/N}) over all axes, in place.
void fft_forward(std::vector<Complex>& data, const LogGrid& g) {
  std::vector<int> dims;
  for (const GridAxis& a : g.axes()) dims.push_back(static_cast<int>(a.N));
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

void check_dims(const InversionConfig& cfg) {
  if (cfg.strip.dim() != cfg.grid.dim()) {
    fail(ErrorKind::DimensionMismatch, "strip dimension differs from grid dimension");
  }
}

// Phase factors e^{-i sum_k tau_k shift_k}, one per lattice point.
std::vector<Complex> phases(const LogGrid& g, std::span<const double> shift) {
  const std::size_t n = g.dim();
  std::vector<Complex> out(g.size());
  std::vector<std::size_t> idx;
  for (std::size_t f = 0; f < out.size(); ++f) {
    g.unflatten(f, idx);
    double ph = 0.0;
    for (std::size_t k = 0; k < n; ++k) ph += dft_frequency(g.axis(k), idx[k]) * shift[k];
    out[f] = std::polar(1.0, -ph);
  }
  return out;
}

std::string grid_key(const LogGrid& g) { return grid_to_json(g).dump(); }

}  // namespace

MellinStrip::MellinStrip(std::vector<double> c) : c_(std::move(c)) {
  if (c_.empty()) fail(ErrorKind::InvalidArgument, "strip needs n >= 1");
  double sum = 0.0;
  for (double ck : c_) {
    if (!(ck < 1.0) || !std::isfinite(ck)) {
      fail(ErrorKind::StripViolation, "strip needs every c_k < 1, got " + std::to_string(ck));
    }
    sum += ck;
  }
  if (!(static_cast<double>(c_.size()) - sum > 0.0)) {
    fail(ErrorKind::StripViolation, "strip needs n - sum c > 0");
  }
}

InversionConfig InversionConfig::defaults(std::size_t n, Alpha alpha) {
  InversionConfig cfg;
  cfg.alpha = alpha;
  cfg.strip = MellinStrip::uniform(n, 0.5);
  if (n == 1) {
    cfg.grid = LogGrid::uniform(1, -12.0, 12.0, 4096);
  } else {
    cfg.grid = LogGrid::uniform(n, -8.0, 8.0, 256);
    cfg.truncation = Truncation{8.0, Taper::Gaussian};
  }
  return cfg;
}

double InversionConfig::max_frequency() const {
  double s = 0.0;
  for (const GridAxis& a : grid.axes()) {
    const double nyq = std::numbers::pi / a.spacing();
    s += nyq * nyq;
  }
  return std::sqrt(s);
}

void InversionConfig::validate() const {
  if (grid.dim() == 0) fail(ErrorKind::InvalidArgument, "inversion config without grid");
  check_dims(*this);
  if (truncation.radius) {
    if (!(*truncation.radius > 0.0)) fail(ErrorKind::InvalidArgument, "truncation radius must be > 0");
    if (*truncation.radius > max_frequency() * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "truncation radius " << *truncation.radius << " exceeds the lattice maximum " << max_frequency();
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
  if (!(leak_threshold > 0.0)) fail(ErrorKind::InvalidArgument, "leak threshold must be > 0");
}

double dft_frequency(const GridAxis& axis, std::size_t k) {
  const auto N = static_cast<long long>(axis.N);
  const long long kk = static_cast<long long>(k) < N / 2 ? static_cast<long long>(k) : static_cast<long long>(k) - N;
  return kTwoPi * static_cast<double>(kk) / (static_cast<double>(N) * axis.spacing());
}

std::vector<double> sample_profit_log(const ProfitEvaluator& profit, const InversionConfig& cfg, double p0) {
  cfg.validate();
  if (!(p0 > 0.0)) fail(ErrorKind::InvalidArgument, "sample_profit_log: p0 must be > 0");
  const LogGrid& g = cfg.grid;
  const double inv = 1.0 / cfg.alpha.value();
  std::vector<double> out(g.size());
  parallel_for(out.size(), [&](std::size_t f) {
    std::vector<double> u;
    g.coords(f, u);
    for (double& v : u) v = p0 * std::exp(v * inv);
    out[f] = profit(u, p0) / p0;
  });
  return out;
}

std::vector<double> sample_profit_log(const MeasureModel& m, const InversionConfig& cfg) {
  cfg.validate();
  if (m.dim() != cfg.grid.dim()) fail(ErrorKind::DimensionMismatch, "measure dimension differs from grid");
  if (m.is_zero()) return std::vector<double>(cfg.grid.size(), 0.0);
  // For alpha < 1 the sublevel boundary has unbounded slope at the axes; the
  // warped form integrates over a simplex instead and is much cheaper.
  const bool warp = !cfg.alpha.is_one() && m.density().has_value();
  const MeasureModel atoms_only(m.dim(), m.atoms(), std::nullopt);
  auto eval = [&](std::span<const double> p, double p0) {
    const PricePoint pp(std::vector<double>(p.begin(), p.end()), p0);
    if (!warp) return profit_transform(m, pp, cfg.alpha, cfg.sample_tol);
    const double atoms = atoms_only.is_zero() ? 0.0 : profit_transform(atoms_only, pp, cfg.alpha, cfg.sample_tol);
    return atoms + profit_transform_warped(*m.density(), pp, cfg.alpha, cfg.sample_tol);
  };
  const auto cache = SampleCache::from_env();
  std::string key;
  if (cache) {
    try {
      std::ostringstream os;
      os.precision(17);
      os << "profit|" << measure_to_json(m).dump() << "|" << grid_key(cfg.grid) << "|alpha=" << cfg.alpha.value()
         << "|tol=" << cfg.sample_tol.abs << "," << cfg.sample_tol.rel;
      key = os.str();
    } catch (const Error&) {
      key.clear();  // callback densities are not cacheable
    }
    if (!key.empty()) {
      if (auto hit = cache->load(key, cfg.grid.size())) return *hit;
    }
  }
  std::vector<double> out = sample_profit_log(eval, cfg, 1.0);
  if (cache && !key.empty()) cache->store(key, out);
  return out;
}

double boundary_leak(std::span<const double> samples, const InversionConfig& cfg) {
  const LogGrid& g = cfg.grid;
  if (samples.size() != g.size()) fail(ErrorKind::DimensionMismatch, "sample count differs from grid size");
  double peak = 0.0;
  double edge = 0.0;
  std::vector<std::size_t> idx;
  std::vector<double> u;
  for (std::size_t f = 0; f < samples.size(); ++f) {
    g.unflatten(f, idx);
    g.coords(f, u);
    double e = 0.0;
    bool on_edge = false;
    for (std::size_t k = 0; k < g.dim(); ++k) {
      e += (1.0 - cfg.strip[k]) * u[k];
      on_edge = on_edge || idx[k] == 0 || idx[k] + 1 == g.axis(k).N;
    }
    const double v = std::abs(std::exp(e) * samples[f]);
    peak = std::max(peak, v);
    if (on_edge) edge = std::max(edge, v);
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

Spectrum mellin_of_profit(std::span<const double> samples, const InversionConfig& cfg) {
  cfg.validate();
  const LogGrid& g = cfg.grid;
  if (samples.size() != g.size()) fail(ErrorKind::DimensionMismatch, "sample count differs from grid size");
  Spectrum s;
  s.grid = g;
  s.boundary_leak = boundary_leak(samples, cfg);
  if (s.boundary_leak > cfg.leak_threshold) {
    std::ostringstream os;
    os << "samples do not decay toward the grid boundary (edge/peak = " << s.boundary_leak
       << " > " << cfg.leak_threshold << "); widen the grid";
    fail(ErrorKind::BoundaryLeak, os.str());
  }
  const std::size_t n = g.dim();
  s.values.resize(g.size());
  std::vector<double> u;
  for (std::size_t f = 0; f < samples.size(); ++f) {
    g.coords(f, u);
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) e += (1.0 - cfg.strip[k]) * u[k];
    s.values[f] = samples[f] == 0.0 ? 0.0 : std::exp(e) * samples[f];
  }
  fft_forward(s.values, g);
  double vol = 1.0;
  std::vector<double> shift(n);
  for (std::size_t k = 0; k < n; ++k) {
    vol *= g.axis(k).spacing();
    shift[k] = g.axis(k).u_min;
  }
  std::vector<Complex> ph = phases(g, shift);
  for (Complex& v : ph) v *= vol;
  simd::cmul_inplace(s.values, ph);
  return s;
}

Complex spectral_divisor(std::span<const Complex> z, Alpha alpha) {
  const double a = alpha.value();
  std::vector<Complex> one_minus(z.size());
  Complex sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    one_minus[k] = 1.0 - z[k];
    sum += z[k];
  }
  return a * beta_multivariate(one_minus) * beta2(a * (static_cast<double>(z.size()) - sum));
}

Spectrum spectral_divide(const Spectrum& m, const InversionConfig& cfg) {
  check_dims(cfg);
  const LogGrid& g = m.grid;
  const std::size_t n = g.dim();
  const double a = cfg.alpha.value();
  Spectrum out = m;
  std::vector<Complex> recip(g.size());
  std::vector<std::size_t> idx;
  std::vector<Complex> one_minus(n);
  for (std::size_t f = 0; f < recip.size(); ++f) {
    g.unflatten(f, idx);
    Complex sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex z(cfg.strip[k], dft_frequency(g.axis(k), idx[k]));
      one_minus[k] = 1.0 - z;
      sum += z;
    }
    // 1 / (a B(1 - z) B(2, w)) = w (w + 1) e^{-log B(1 - z)} / a, w = a (n - sum z)
    const Complex w = a * (static_cast<double>(n) - sum);
    if (w == Complex(0.0) || w == Complex(-1.0)) fail(ErrorKind::PoleError, "spectral divisor vanishes");
    recip[f] = w * (w + 1.0) * std::exp(-log_beta_multivariate(one_minus)) / a;
  }
  simd::cmul_inplace(out.values, recip);
  return out;
}

std::vector<Complex> inverse_fourier(const Spectrum& s, const InversionConfig& cfg) {
  cfg.validate();
  const LogGrid& g = s.grid;
  const std::size_t n = g.dim();
  std::vector<Complex> h = s.values;
  std::vector<std::size_t> idx;
  if (cfg.truncation.radius) {
    const double R = *cfg.truncation.radius;
    for (std::size_t f = 0; f < h.size(); ++f) {
      g.unflatten(f, idx);
      double r2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = dft_frequency(g.axis(k), idx[k]);
        r2 += t * t;
      }
      const double r = std::sqrt(r2) / R;
      if (cfg.truncation.taper == Taper::Hard) {
        if (r > 1.0) h[f] = 0.0;
      } else {
        const double r8 = (r * r) * (r * r) * (r * r) * (r * r);
        h[f] *= std::exp(-r8 * std::numbers::ln10);
      }
    }
  }
  std::vector<double> shift(n);
  double scale = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    shift[k] = -g.axis(k).u_max;
    scale *= 1.0 / (static_cast<double>(g.axis(k).N) * g.axis(k).spacing());  // dtau / 2 pi
  }
  std::vector<Complex> ph = phases(g, shift);
  for (Complex& v : ph) v *= scale;
  simd::cmul_inplace(h, ph);
  fft_forward(h, g);
  return h;
}

LogGrid reconstruction_grid(const InversionConfig& cfg) {
  const double inv = 1.0 / cfg.alpha.value();
  std::vector<GridAxis> axes;
  for (const GridAxis& a : cfg.grid.axes()) axes.push_back(GridAxis{-a.u_max * inv, -a.u_min * inv, a.N});
  return LogGrid(std::move(axes));
}

DensitySpec reconstruct_density(const Spectrum& s, const InversionConfig& cfg) {
  const std::vector<Complex> f = inverse_fourier(s, cfg);
  const LogGrid& g = s.grid;
  const std::size_t n = g.dim();
  const double a = cfg.alpha.value();
  std::vector<GridAxis> s_axes;
  for (const GridAxis& ax : g.axes()) s_axes.push_back(GridAxis{-ax.u_max, -ax.u_min, ax.N});
  const LogGrid sg(s_axes);
  GridDensity out{reconstruction_grid(cfg), std::vector<double>(f.size())};
  const double an = std::pow(a, static_cast<double>(n));
  std::vector<double> sv;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sg.coords(i, sv);
    // a(x) = a^n a_*(x^a) prod x^{a-1}, x = e^{s/a}, a_*(e^s) = f e^{-c.s}
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) e += sv[k] * (-cfg.strip[k] + (a - 1.0) / a);
    out.values[i] = an * f[i].real() * std::exp(e);
  }
  return DensitySpec(std::move(out));
}

DensitySpec invert_profit(const std::vector<double>& samples, const InversionConfig& cfg) {
  return reconstruct_density(spectral_divide(mellin_of_profit(samples, cfg), cfg), cfg);
}

namespace {

struct KernelIntegrand {
  std::vector<double> log_u;
  std::vector<double> c;
  double a;
  Complex operator()(std::span<const double> tau) const {
    const std::size_t n = c.size();
    Complex expo = 0.0;
    Complex sum = 0.0;
    std::vector<Complex> one_minus(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex z(c[k], tau[k]);
      expo += (-a * (z - 1.0) - 1.0) * log_u[k];
      one_minus[k] = 1.0 - z;
      sum += z;
    }
    const Complex w = a * (static_cast<double>(n) - sum);
    return std::exp(expo - log_beta_multivariate(one_minus)) * w * (w + 1.0);
  }
};

}  // namespace

KernelValue kernel_eval(std::span<const double> u, const MellinStrip& strip, Alpha alpha, double R, double tol) {
  const std::size_t n = u.size();
  if (n == 0 || n > 2) fail(ErrorKind::MethodUnavailable, "kernel_eval supports n = 1 and n = 2");
  if (strip.dim() != n) fail(ErrorKind::DimensionMismatch, "kernel_eval: strip dimension differs");
  if (!(R > 0.0)) fail(ErrorKind::InvalidArgument, "kernel_eval: R must be > 0");
  KernelIntegrand F{{}, strip.c(), alpha.value()};
  for (double uk : u) {
    if (!(uk > 0.0)) fail(ErrorKind::InvalidArgument, "kernel_eval: u must be strictly positive");
    F.log_u.push_back(std::log(uk));
  }
  const double a = alpha.value();
  const double pref = std::pow(a, 2.0 * static_cast<double>(n) - 1.0) / std::pow(kTwoPi, static_cast<double>(n));
  // Absolute floor from the integrand size at the origin and the rim; the
  // integral itself can cancel far below either.
  double scale_probe = 0.0;
  {
    const double zero[2] = {0.0, 0.0};
    const double rim[2] = {R, 0.0};
    scale_probe = std::abs(F(std::span<const double>(zero, n))) + std::abs(F(std::span<const double>(rim, n)));
  }
  const QuadOptions opt{1e-14 * scale_probe * std::pow(R, static_cast<double>(n)), tol, std::size_t{1} << 22};
  Complex total = 0.0;
  bool converged = true;
  double tail = 0.0;
  if (n == 1) {
    auto f = [&](std::span<const double> ts, std::span<Complex> ys) {
      for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = F(std::span<const double>(&ts[i], 1));
    };
    const auto r = integrate_batch<Complex>(f, -R, R, opt);
    total = r.value;
    converged = r.converged;
    const double tp = R;
    const double tm = -R;
    tail = 0.1 * R * (std::abs(F(std::span<const double>(&tp, 1))) + std::abs(F(std::span<const double>(&tm, 1))));
  } else {
    auto outer = [&](std::span<const double> t1s, std::span<Complex> ys) {
      for (std::size_t i = 0; i < t1s.size(); ++i) {
        const double t1 = t1s[i];
        const double half = std::sqrt(std::max(0.0, R * R - t1 * t1));
        auto inner = [&](std::span<const double> t2s, std::span<Complex> zs) {
          double tau[2] = {t1, 0.0};
          for (std::size_t j = 0; j < t2s.size(); ++j) {
            tau[1] = t2s[j];
            zs[j] = F(tau);
          }
        };
        const auto r = integrate_batch<Complex>(inner, -half, half, opt);
        converged = converged && r.converged;
        ys[i] = r.value;
      }
    };
    const auto r = integrate_batch<Complex>(outer, -R, R, opt);
    total = r.value;
    converged = converged && r.converged;
    double ring = 0.0;
    constexpr int kAngles = 64;
    for (int j = 0; j < kAngles; ++j) {
      const double th = kTwoPi * j / kAngles;
      const double tau[2] = {R * std::cos(th), R * std::sin(th)};
      ring += std::abs(F(tau));
    }
    tail = 0.1 * R * kTwoPi * R * ring / kAngles;
  }
  KernelValue kv;
  kv.converged = converged;
  kv.re = pref * total.real();
  kv.im = pref * total.imag();
  const double mag = std::abs(pref * total);
  kv.tail_ratio = mag > 0.0 ? pref * tail / mag : (tail > 0.0 ? INFINITY : 0.0);
  kv.truncation_warning = kv.tail_ratio > 1e-3;
  return kv;
}

double reconstruct_via_kernel(const UnitProfit& profit, std::span<const double> x, const MellinStrip& strip,
                              Alpha alpha, double R, const KernelQuadrature& q) {
  const std::size_t n = x.size();
  if (n == 0 || n > 2) fail(ErrorKind::MethodUnavailable, "reconstruct_via_kernel supports n = 1 and n = 2");
  if (strip.dim() != n) fail(ErrorKind::DimensionMismatch, "reconstruct_via_kernel: strip dimension differs");
  for (double xk : x) {
    if (!(xk > 0.0)) fail(ErrorKind::InvalidArgument, "reconstruct_via_kernel: x must be strictly positive");
  }
  if (!(q.v_max > q.v_min)) fail(ErrorKind::InvalidArgument, "reconstruct_via_kernel: empty range");
  const double a = alpha.value();
  // p_k = e^{v_k / a}, dp_k = p_k / a dv_k
  auto integrand = [&](std::span<const double> v) {
    std::vector<double> p(n);
    std::vector<double> px(n);
    double jac = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = std::exp(v[k] / a);
      px[k] = p[k] * x[k];
      jac *= p[k] / a;
    }
    const double pi = profit(p);
    if (pi == 0.0) return 0.0;
    return kernel_eval(px, strip, alpha, R, 1e-11).re * pi * jac;
  };
  const QuadOptions opt{1e-13, q.tol, std::size_t{1} << 18};
  QuadResult<double> r;
  if (n == 1) {
    r = integrate(
        [&](double v) { return integrand(std::span<const double>(&v, 1)); }, q.v_min, q.v_max, opt);
  } else {
    bool ok = true;
    r = integrate(
        [&](double v1) {
          const auto in = integrate(
              [&](double v2) {
                const double v[2] = {v1, v2};
                return integrand(v);
              },
              q.v_min, q.v_max, QuadOptions{1e-13, q.tol, std::size_t{1} << 16});
          ok = ok && in.converged;
          return in.value;
        },
        q.v_min, q.v_max, QuadOptions{1e-13, q.tol, std::size_t{1} << 16});
    r.converged = r.converged && ok;
  }
  if (!r.converged) fail(ErrorKind::NonConvergent, "reconstruct_via_kernel: quadrature did not converge");
  return r.value;
}

std::vector<double> sample_profit_from_radon(const RadonProvider& provider, const InversionConfig& cfg) {
  return sample_profit_log(
      [&](std::span<const double> p, double p0) { return profit_from_radon(provider(p), p0); }, cfg, 1.0);
}

DensitySpec invert_radon(const RadonProvider& provider, const InversionConfig& cfg) {
  return invert_profit(sample_profit_from_radon(provider, cfg), cfg);
}

}  // namespace cesradon
