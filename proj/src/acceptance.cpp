#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "cesradon/characterize.hpp"
#include "cesradon/error.hpp"
#include "cesradon/forward.hpp"
#include "cesradon/inversion.hpp"
#include "cesradon/oracle.hpp"
#include "cesradon/special.hpp"
#include "cli/commands.hpp"
#include "cli/fixtures.hpp"

namespace cesradon::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

std::string sci(double v, int prec = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", prec, v);
  return buf;
}

std::string fixed(double v, int prec = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

double rel_l2(const DensitySpec& got, const DensitySpec& truth, double lo, double hi, int pts) {
  const std::size_t n = truth.dim();
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= static_cast<std::size_t>(pts);
  double num = 0.0, den = 0.0;
  std::vector<double> x(n);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t r = f;
    for (std::size_t k = n; k-- > 0;) {
      x[k] = lo + (hi - lo) * static_cast<double>(r % pts) / (pts - 1);
      r /= pts;
    }
    const double a = got.eval(x);
    const double e = truth.eval(x);
    num += (a - e) * (a - e);
    den += e * e;
  }
  return std::sqrt(num / den);
}

MeasureModel fixture_measure(const std::string& name) { return *cli::make_fixture(name).measure; }

double round_trip_error(const MeasureModel& m, Alpha alpha, double lo, double hi) {
  const InversionConfig cfg = InversionConfig::defaults(m.dim(), alpha);
  const std::vector<double> samples = sample_profit_log(m, cfg);
  const DensitySpec d = invert_profit(samples, cfg);
  return rel_l2(d, *m.density(), lo, hi, m.dim() == 1 ? 561 : 61);
}

// --- criteria -------------------------------------------------------------

void beta_integral(std::mt19937_64& rng, std::vector<Result>& out) {
  Result r{"1", "beta_integral", "20 cases, rel err <= 1e-6, <= 60 s", "", false};
  std::uniform_real_distribution<double> tdist(-1.0, 0.9);
  const double alphas[3] = {0.25, 0.5, 1.0};
  double worst = 0.0;
  std::string worst_case;
  for (int c = 0; c < 20; ++c) {
    const std::size_t n = 1 + static_cast<std::size_t>(c % 2);
    const double a = alphas[(c / 2) % 3];
    std::vector<double> t(n);
    for (double& v : t) v = tdist(rng);
    oracle::Integrand f = [&](std::span<const double> u) {
      double s = 0.0, w = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        s += u[k];
        w *= std::pow(u[k], -t[k]);
      }
      const double g = 1.0 - std::pow(s, 1.0 / a);
      return g > 0.0 ? w * g : 0.0;
    };
    oracle::AxisBounds b = [](std::size_t k, std::span<const double> prefix) {
      double used = 0.0;
      for (std::size_t j = 0; j < k; ++j) used += prefix[j];
      return std::pair{0.0, std::max(0.0, 1.0 - used)};
    };
    const double quad = oracle::nested_quadrature(f, n, b, 1e-12);
    std::vector<Complex> one_minus(n);
    double st = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      one_minus[k] = 1.0 - t[k];
      st += t[k];
    }
    const Complex closed = a * beta_multivariate(one_minus) * beta2(Complex(a * (static_cast<double>(n) - st)));
    const double rel = std::abs(quad - closed.real()) / std::abs(closed.real());
    if (rel > worst) {
      worst = rel;
      std::ostringstream os;
      os << "n=" << n << " a=" << a << " t0=" << fixed(t[0], 3);
      worst_case = os.str();
    }
  }
  r.measured = "max rel " + sci(worst) + " (" + worst_case + ")";
  r.pass = worst <= 1e-6;
  out.push_back(r);
}

void roundtrip_exp(std::vector<Result>& out) {
  Result r{"2", "roundtrip_exp", "rel L2 on [0.2,3] <= 2%, <= 30 s", "", false};
  const double e = round_trip_error(fixture_measure("exp1"), Alpha::one(), 0.2, 3.0);
  r.measured = "rel L2 " + sci(e);
  r.pass = e <= 0.02;
  out.push_back(r);
}

void roundtrip_alpha(std::vector<Result>& out) {
  Result r{"3", "roundtrip_alpha", "alpha=0.5 x e^{-x^2}: rel L2 on [0.3,2] <= 3%, <= 60 s", "", false};
  const double e = round_trip_error(fixture_measure("gauss_alpha"), Alpha(0.5), 0.3, 2.0);
  r.measured = "rel L2 " + sci(e);
  r.pass = e <= 0.03;
  out.push_back(r);
}

void roundtrip_2d(std::vector<Result>& out) {
  Result r{"4", "roundtrip_2d", "e^{-x1-x2}, alpha in {1,0.5}: rel L2 on [0.3,2]^2 <= 5%, <= 300 s", "", false};
  const MeasureModel m = fixture_measure("exp2");
  const double e1 = round_trip_error(m, Alpha::one(), 0.3, 2.0);
  const double e2 = round_trip_error(m, Alpha(0.5), 0.3, 2.0);
  r.measured = "alpha=1: " + sci(e1) + ", alpha=0.5: " + sci(e2);
  r.pass = e1 <= 0.05 && e2 <= 0.05;
  out.push_back(r);
}

void derivative_law(std::mt19937_64& rng, std::vector<Result>& out) {
  Result r{"5", "derivative_law", "10 points: err(h)/err(h/2) >= 3.5, err(h/2) <= 1e-5", "", false};
  const MeasureModel m = fixture_measure("exp2");
  std::uniform_real_distribution<double> pd(0.5, 2.0), p0d(0.5, 3.0);
  const Tolerance tight{1e-14, 1e-13};
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_terminal = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Alpha alpha(i % 2 ? 0.5 : 1.0);
    const std::vector<double> p = {pd(rng), pd(rng)};
    const double p0 = p0d(rng);
    auto pi = [&](double t) { return profit_transform(m, PricePoint(p, t), alpha, tight); };
    const double mass = sublevel_mass(m, PricePoint(p, p0), alpha, tight);
    const double h = 0.01 * p0;
    const double e1 = std::abs(oracle::finite_difference(pi, p0, 1, h, false) - mass);
    const double e2 = std::abs(oracle::finite_difference(pi, p0, 1, 0.5 * h, false) - mass);
    min_ratio = std::min(min_ratio, e1 / e2);
    max_terminal = std::max(max_terminal, e2);
  }
  r.measured = "min ratio " + fixed(min_ratio, 3) + ", max err(h/2) " + sci(max_terminal);
  r.pass = min_ratio >= 3.5 && max_terminal <= 1e-5;
  out.push_back(r);
}

void homogeneity(std::uint64_t seed, std::vector<Result>& out) {
  Result r{"6", "homogeneity", "50 probes: |Pi(lp,lp0)-l Pi| and |M(lp,lp0)-M| <= 1e-6", "", false};
  const MeasureModel m = fixture_measure("exp2");
  const std::vector<PricePoint> probes = random_probes(2, 50, seed);
  std::mt19937_64 rng(seed + 6);
  std::uniform_real_distribution<double> ll(std::log(0.1), std::log(10.0));
  const Tolerance tol{1e-12, 1e-11};
  double worst_pi = 0.0, worst_m = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Alpha alpha(i % 2 ? 0.5 : 1.0);
    const double l = std::exp(ll(rng));
    const PricePoint& pp = probes[i];
    const PricePoint sp = pp.scaled(l);
    worst_pi = std::max(worst_pi, std::abs(profit_transform(m, sp, alpha, tol) - l * profit_transform(m, pp, alpha, tol)));
    worst_m = std::max(worst_m, std::abs(sublevel_mass(m, sp, alpha, tol) - sublevel_mass(m, pp, alpha, tol)));
  }
  r.measured = "Pi " + sci(worst_pi) + ", M " + sci(worst_m);
  r.pass = worst_pi <= 1e-6 && worst_m <= 1e-6;
  out.push_back(r);
}

void mellin(std::mt19937_64& rng, std::vector<Result>& out) {
  Result a{"7a", "mellin", "10 strip points: |fft - direct| <= 1e-4 (1 + |direct|)", "", false};
  const MeasureModel m = fixture_measure("exp1");
  InversionConfig cfg = InversionConfig::defaults(1);
  cfg.grid = LogGrid::uniform(1, -40.0, 40.0, std::size_t{1} << 14);
  const std::vector<double> samples = sample_profit_log(m, cfg);
  oracle::UnitProfit exact = [](std::span<const double> p) { return oracle::exp_profit(p[0], 1.0); };
  std::uniform_real_distribution<double> cd(0.3, 0.7);
  const double dtau = dft_frequency(cfg.grid.axis(0), 1);
  const int kmax = static_cast<int>(3.0 / dtau);
  std::uniform_int_distribution<int> kd(-kmax, kmax);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    cfg.strip = MellinStrip::uniform(1, cd(rng));
    const int k = kd(rng);
    const std::size_t bin = k >= 0 ? static_cast<std::size_t>(k) : cfg.grid.axis(0).N - static_cast<std::size_t>(-k);
    const Spectrum s = mellin_of_profit(samples, cfg);
    const Complex fft = s.values[bin];
    const std::complex<double> t[1] = {Complex(cfg.strip[0], s.tau(0, bin))};
    const Complex direct = oracle::direct_mellin(exact, t, Alpha::one(), 1e-11);
    worst = std::max(worst, std::abs(fft - direct) / (1.0 + std::abs(direct)));
  }
  a.measured = "max scaled diff " + sci(worst);
  a.pass = worst <= 1e-4;
  out.push_back(a);

  Result b{"7b", "mellin", "value at t=0.5 equals 4 pi/3 to 1e-4 relative", "", false};
  cfg.strip = MellinStrip::uniform(1, 0.5);
  const Complex v = mellin_of_profit(samples, cfg).values[0];
  const double target = 4.0 * std::numbers::pi / 3.0;
  const double rel = std::abs(v - target) / target;
  b.measured = "fft " + fixed(v.real(), 6) + ", rel diff " + sci(rel);
  b.pass = rel <= 1e-4;
  out.push_back(b);

  Result info{"7i", "mellin", "closed form Gamma(1/2) B(2,1/2) = 4 sqrt(pi)/3", "", false};
  info.informational = true;
  const double right = 4.0 * std::sqrt(std::numbers::pi) / 3.0;
  const double rel2 = std::abs(v - right) / right;
  info.measured = "expected " + fixed(right, 6) + ", rel diff " + sci(rel2);
  info.pass = rel2 <= 1e-4;
  out.push_back(info);
}

void surface(std::mt19937_64& rng, std::vector<Result>& out) {
  Result r{"8", "surface", "10 points: surface vs derivative R rel <= 1e-4", "", false};
  const MeasureModel m = fixture_measure("bump2");
  std::uniform_real_distribution<double> pd(0.5, 2.0), p0d(0.3, 2.5);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Alpha alpha(i % 2 ? 0.5 : 1.0);
    const std::vector<double> p = {pd(rng), pd(rng)};
    const double p0s[1] = {p0d(rng)};
    const double s = radon_slice(m, p, alpha, p0s, RadonMethod::Surface).values[0];
    const double d = radon_slice(m, p, alpha, p0s, RadonMethod::Derivative).values[0];
    const double scale = std::max(std::abs(s), std::abs(d));
    worst = std::max(worst, scale > 0.0 ? std::abs(s - d) / scale : 0.0);
  }
  r.measured = "max rel " + sci(worst);
  r.pass = worst <= 1e-4;
  out.push_back(r);
}

void characterize_suite(std::uint64_t seed, std::vector<Result>& out) {
  Result r{"9", "characterize", "4 clean exit 0, 4 corrupted exit 4 naming the broken condition", "", false};
  CharacterizeOptions opt;
  opt.seed = seed;
  int ok = 0;
  std::string misses;
  for (const std::string& name : cli::clean_fixture_names()) {
    const int code = cli::exit_code_for(cli::run_fixture(cli::make_fixture(name), opt));
    if (code == cli::kExitOk) {
      ++ok;
    } else {
      misses += " " + name + "->" + std::to_string(code);
    }
  }
  for (const std::string& name : cli::corrupted_fixture_names()) {
    const cli::Fixture fx = cli::make_fixture(name);
    const std::vector<CheckReport> reps = cli::run_fixture(fx, opt);
    bool named = false;
    for (const CheckReport& c : reps) {
      named = named || (c.condition == fx.expected_condition && c.verdict == Verdict::Fail && c.witness);
    }
    const int code = cli::exit_code_for(reps);
    if (code == cli::kExitCharacterizationFail && named) {
      ++ok;
    } else {
      misses += " " + name + "->" + std::to_string(code);
    }
  }
  r.measured = std::to_string(ok) + "/8 as expected" + (misses.empty() ? "" : " (" + misses.substr(1) + ")");
  r.pass = ok == 8;
  out.push_back(r);
}

void kernel(std::vector<Result>& out) {
  Result r{"10", "kernel", "5 points: kernel vs fft rel <= 2%, |Im K| <= 1e-8", "", false};
  const MeasureModel m = fixture_measure("exp1");
  const double R = 30.0;
  InversionConfig cfg = InversionConfig::defaults(1);
  cfg.truncation = Truncation{R, Taper::Hard};
  const DensitySpec fft = invert_profit(sample_profit_log(m, cfg), cfg);
  UnitProfit profit = [&](std::span<const double> p) {
    return profit_transform(m, PricePoint({p[0]}, 1.0), Alpha::one(), Tolerance{1e-12, 1e-11});
  };
  double peak = 0.0;
  for (int i = 0; i <= 280; ++i) peak = std::max(peak, std::abs(fft.eval(std::vector<double>{0.2 + 0.01 * i})));
  const double xs[5] = {0.3, 0.6, 1.0, 1.5, 2.0};
  double worst = 0.0, worst_im = 0.0;
  int used = 0;
  for (double x : xs) {
    const double a_fft = fft.eval(std::vector<double>{x});
    if (std::abs(a_fft) <= 0.1 * peak) continue;
    ++used;
    const double xx[1] = {x};
    const double a_k = reconstruct_via_kernel(profit, xx, cfg.strip, Alpha::one(), R);
    worst = std::max(worst, std::abs(a_k - a_fft) / std::abs(a_fft));
    const double u[1] = {x};
    worst_im = std::max(worst_im, std::abs(kernel_eval(u, cfg.strip, Alpha::one(), R).im));
  }
  r.measured = std::to_string(used) + " points, max rel " + sci(worst) + ", max |Im K| " + sci(worst_im);
  r.pass = used == 5 && worst <= 0.02 && worst_im <= 1e-8;
  out.push_back(r);
}

void special(std::mt19937_64& rng, std::vector<Result>& out) {
  Result r{"11", "special", "1000 strip points: recurrence/reflection rel <= 1e-10; beta2 w(w+1) = 1", "", false};
  std::uniform_real_distribution<double> cd(-0.9, 0.9), td(-30.0, 30.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex z(cd(rng), td(rng));
    const Complex rec = std::exp(log_gamma(z + 1.0) - log_gamma(z) - std::log(z)) - 1.0;
    const Complex refl =
        std::exp(log_gamma(z) + log_gamma(1.0 - z) + std::log(std::sin(std::numbers::pi * z)) - std::log(std::numbers::pi)) - 1.0;
    worst = std::max({worst, std::abs(rec), std::abs(refl)});
  }
  double worst_b = 0.0;
  std::uniform_real_distribution<double> wd(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex w(wd(rng), wd(rng));
    worst_b = std::max(worst_b, std::abs(beta2(w) * w * (w + 1.0) - 1.0));
  }
  r.measured = "gamma " + sci(worst) + ", beta2 " + sci(worst_b);
  r.pass = worst <= 1e-10 && worst_b <= 8.0 * std::numeric_limits<double>::epsilon();
  out.push_back(r);
}

struct Entry {
  const char* name;
  double budget_s;  // 0: no runtime limit
  std::function<void(const Options&, std::vector<Result>&)> fn;
};

std::vector<Entry> entries() {
  auto rng_for = [](const Options& o, int id) { return std::mt19937_64(o.seed * 1000003u + static_cast<unsigned>(id)); };
  return {
      {"beta_integral", 60.0, [=](const Options& o, auto& out) { auto g = rng_for(o, 1); beta_integral(g, out); }},
      {"roundtrip_exp", 30.0, [](const Options&, auto& out) { roundtrip_exp(out); }},
      {"roundtrip_alpha", 60.0, [](const Options&, auto& out) { roundtrip_alpha(out); }},
      {"roundtrip_2d", 300.0, [](const Options&, auto& out) { roundtrip_2d(out); }},
      {"derivative_law", 0.0, [=](const Options& o, auto& out) { auto g = rng_for(o, 5); derivative_law(g, out); }},
      {"homogeneity", 0.0, [](const Options& o, auto& out) { homogeneity(o.seed, out); }},
      {"mellin", 0.0, [=](const Options& o, auto& out) { auto g = rng_for(o, 7); mellin(g, out); }},
      {"surface", 0.0, [=](const Options& o, auto& out) { auto g = rng_for(o, 8); surface(g, out); }},
      {"characterize", 0.0, [](const Options& o, auto& out) { characterize_suite(o.seed, out); }},
      {"kernel", 0.0, [](const Options&, auto& out) { kernel(out); }},
      {"special", 0.0, [=](const Options& o, auto& out) { auto g = rng_for(o, 11); special(g, out); }},
  };
}

void print_line(std::ostream& os, const Result& r) {
  const char* verdict = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
  os << "[" << std::setw(3) << r.id << "] " << std::left << std::setw(16) << r.name << std::right << ' ' << verdict
     << "  " << r.measured << "  (target: " << r.target << "; " << fixed(r.seconds, 1) << " s)\n";
}

}  // namespace

std::vector<std::string> criterion_names() {
  std::vector<std::string> v;
  for (const Entry& e : entries()) v.emplace_back(e.name);
  return v;
}

std::vector<Result> run(const Options& opt, std::ostream& log) {
  std::vector<Result> all;
  for (const Entry& e : entries()) {
    if (!opt.filter.empty() && std::string(e.name).find(opt.filter) == std::string::npos) continue;
    std::vector<Result> got;
    const auto t0 = Clock::now();
    try {
      e.fn(opt, got);
    } catch (const Error& err) {
      got.clear();
      got.push_back(Result{"?", e.name, "", std::string("error: ") + err.what(), false});
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    for (Result& r : got) {
      r.seconds = secs;
      if (e.budget_s > 0.0 && secs > e.budget_s && !r.informational) {
        r.pass = false;
        r.measured += " [over time budget]";
      }
      print_line(log, r);
      log.flush();
      all.push_back(std::move(r));
    }
  }
  return all;
}

void print_table(std::ostream& os, const std::vector<Result>& results) {
  os << "\ncriterion  name              verdict  measured\n";
  int pass = 0, counted = 0;
  for (const Result& r : results) {
    const char* verdict = r.informational ? "info" : (r.pass ? "pass" : "FAIL");
    os << std::left << std::setw(10) << r.id << ' ' << std::setw(17) << r.name << ' ' << std::setw(8) << verdict
       << ' ' << r.measured << std::right << '\n';
    if (!r.informational) {
      ++counted;
      pass += r.pass ? 1 : 0;
    }
  }
  os << pass << "/" << counted << " criteria passed\n";
}

bool all_passed(const std::vector<Result>& results) {
  if (results.empty()) return false;
  return std::all_of(results.begin(), results.end(), [](const Result& r) { return r.informational || r.pass; });
}

}  // namespace cesradon::acceptance
