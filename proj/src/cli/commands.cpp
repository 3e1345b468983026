#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "acceptance.hpp"
#include "cesradon/gridfile.hpp"
#include "cesradon/inversion.hpp"
#include "cesradon/measures_json.hpp"
#include "cesradon/parallel.hpp"
#include "cli/fixtures.hpp"

namespace cesradon::cli {
namespace {

using nlohmann::json;

Tolerance tolerance_or(const RunConfig& cfg, Tolerance fallback) { return cfg.tol ? *cfg.tol : fallback; }

MellinStrip strip_for(const RunConfig& cfg, std::size_t n) {
  if (cfg.strip.empty()) return MellinStrip::uniform(n, 0.5);
  if (cfg.strip.size() == 1) return MellinStrip::uniform(n, cfg.strip.front());
  if (cfg.strip.size() != n) fail(ErrorKind::ConfigError, "config: 'strip' length differs from the dimension");
  return MellinStrip(cfg.strip);
}

void apply_truncation(const RunConfig& cfg, InversionConfig& ic) {
  if (cfg.radius) ic.truncation = Truncation{*cfg.radius, cfg.taper == "gaussian" ? Taper::Gaussian : Taper::Hard};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  os << j.dump(2) << '\n';
}

// Relative L2 error of a reconstruction against the true density on a box.
double l2_rel_error(const DensitySpec& got, const DensitySpec& truth, double lo, double hi, int pts) {
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
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

int exit_code_for(const std::vector<CheckReport>& reports) {
  bool inconclusive = false;
  for (const CheckReport& r : reports) {
    if (r.verdict == Verdict::Fail) return kExitCharacterizationFail;
    inconclusive = inconclusive || r.verdict == Verdict::Inconclusive;
  }
  return inconclusive ? kExitInconclusive : kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::IoError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::StripViolation:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

MeasureModel load_measure(const RunConfig& cfg) {
  if (!cfg.fixture.empty()) {
    Fixture fx = make_fixture(cfg.fixture);
    if (!fx.measure) fail(ErrorKind::ConfigError, "fixture '" + cfg.fixture + "' is not a measure");
    return *fx.measure;
  }
  std::ifstream is(cfg.measure);
  if (!is) fail(ErrorKind::ConfigError, "cannot open measure '" + cfg.measure + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("measure json: ") + e.what());
  }
  return measure_from_json(j);
}

int cmd_forward(const RunConfig& cfg, std::ostream& out) {
  const MeasureModel m = load_measure(cfg);
  const Alpha alpha(cfg.alpha);
  const Tolerance tol = tolerance_or(cfg, Tolerance{1e-12, 1e-11});
  GridFile g;
  g.quantity = cfg.quantity;
  g.alpha = cfg.alpha;
  g.p0 = cfg.p0;
  if (!cfg.grid.empty()) {
    g.axes = cfg.grid;
  } else {
    for (const auto& p : cfg.prices) {
      std::vector<double> u(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) u[k] = std::log(p[k]);
      g.points.push_back(std::move(u));
    }
  }
  if (g.dim() != m.dim()) fail(ErrorKind::ConfigError, "config: grid dimension differs from the measure");
  g.values.resize(g.rows());
  parallel_for(g.values.size(), [&](std::size_t i) {
    std::vector<double> u;
    g.coords(i, u);
    std::vector<double> p(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) p[k] = g.scattered() ? cfg.prices[i][k] : std::exp(u[k]);
    if (cfg.quantity == "radon") {
      const double p0s[1] = {cfg.p0};
      g.values[i] = radon_slice(m, p, alpha, p0s, RadonMethod::Derivative, RadonOptions{tol, 1e-3}).values[0];
    } else if (cfg.quantity == "mass") {
      g.values[i] = sublevel_mass(m, PricePoint(p, cfg.p0), alpha, tol);
    } else {
      g.values[i] = profit_transform(m, PricePoint(p, cfg.p0), alpha, tol);
    }
  });
  save_grid(cfg.out, g);
  out << "wrote " << g.rows() << " " << cfg.quantity << " values to " << cfg.out << '\n';
  return kExitOk;
}

int cmd_invert(const RunConfig& cfg, std::ostream& out) {
  std::optional<MeasureModel> truth;
  InversionConfig ic;
  std::vector<double> samples;
  if (!cfg.input.empty()) {
    const GridFile g = load_grid(cfg.input);
    if (g.quantity != "profit") fail(ErrorKind::ConfigError, "invert needs a profit grid, got '" + g.quantity + "'");
    if (g.scattered()) fail(ErrorKind::ConfigError, "invert needs a regular grid, not scattered points");
    const Alpha alpha(g.alpha);
    ic = InversionConfig::defaults(g.dim(), alpha);
    // file coordinates are log p at level p0; the pipeline wants u = alpha log(p / p0)
    std::vector<GridAxis> axes;
    for (const GridAxis& a : g.axes) {
      axes.push_back(GridAxis{alpha.value() * (a.u_min - std::log(g.p0)), alpha.value() * (a.u_max - std::log(g.p0)), a.N});
    }
    ic.grid = LogGrid(std::move(axes));
    samples = g.values;
    for (double& v : samples) v /= g.p0;
  } else {
    truth = load_measure(cfg);
    const Alpha alpha(cfg.alpha);
    ic = InversionConfig::defaults(truth->dim(), alpha);
    if (!cfg.grid.empty()) ic.grid = LogGrid(cfg.grid);
  }
  const std::size_t n = ic.grid.dim();
  ic.strip = strip_for(cfg, n);
  apply_truncation(cfg, ic);
  if (cfg.tol) ic.sample_tol = *cfg.tol;
  ic.validate();
  if (truth) samples = sample_profit_log(*truth, ic);

  const Spectrum mel = mellin_of_profit(samples, ic);
  const DensitySpec d = reconstruct_density(spectral_divide(mel, ic), ic);
  const auto& gd = std::get<GridDensity>(d.variant());
  GridFile g;
  g.axes = gd.grid.axes();
  g.quantity = "density";
  g.alpha = ic.alpha.value();
  g.values = gd.values;
  save_grid(cfg.out, g);

  json summary;
  summary["strip"] = ic.strip.c();
  summary["R"] = ic.truncation.radius ? json(*ic.truncation.radius) : json(nullptr);
  summary["taper"] = ic.truncation.taper == Taper::Gaussian ? "gaussian" : "hard";
  summary["boundary_leak"] = mel.boundary_leak;
  summary["grid"] = grid_to_json(ic.grid);
  if (truth && truth->density() && truth->atoms().empty()) {
    const double lo = n == 1 ? 0.2 : 0.3;
    const double hi = n == 1 ? 3.0 : 2.0;
    summary["l2_rel_error"] = l2_rel_error(d, *truth->density(), lo, hi, n == 1 ? 561 : 61);
    summary["l2_box"] = {lo, hi};
  }
  write_json(cfg.out + ".summary.json", summary);
  out << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_characterize(const RunConfig& cfg, std::ostream& out) {
  CharacterizeOptions opt;
  opt.seed = cfg.seed;
  if (cfg.tol) opt.tol = cfg.tol->abs;
  std::vector<CheckReport> reports;
  if (!cfg.fixture.empty()) {
    reports = run_fixture(make_fixture(cfg.fixture), opt);
  } else if (!cfg.measure.empty()) {
    reports = characterize_measure(load_measure(cfg), Alpha(cfg.alpha), opt);
  } else {
    const GridFile g = load_grid(cfg.input);
    if (g.quantity != "profit" || g.scattered()) {
      fail(ErrorKind::ConfigError, "characterize input must be a regular profit grid");
    }
    // Pi(p, p0) = p0 Pi(p / p0, 1): the extension assumes degree-1
    // homogeneity, so that condition is not reported for grid input.
    const double lp0 = std::log(g.p0);
    GridDensity table{LogGrid(g.axes), g.values};
    for (double& v : table.values) v /= g.p0;
    const DensitySpec interp{table};
    ProfitProvider profit = [interp, lp0, axes = g.axes](std::span<const double> p, double p0) {
      if (!(p0 > 0.0)) return 0.0;
      std::vector<double> x(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double u = std::max(std::log(p[k] / p0) + lp0, axes[k].u_min);
        x[k] = std::exp(u);
      }
      return p0 * interp.eval(x);
    };
    const auto probes = random_probes(g.dim(), opt.probes, opt.seed);
    for (CheckReport& r : check_profit_conditions(profit, Alpha(g.alpha), probes, opt)) {
      if (r.condition != "profit_homogeneity") reports.push_back(std::move(r));
    }
  }
  json arr = json::array();
  for (const CheckReport& r : reports) arr.push_back(report_to_json(r));
  if (!cfg.out.empty()) write_json(cfg.out, arr);
  out << arr.dump(2) << '\n';
  return exit_code_for(reports);
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = cfg.kernel_u.size();
  std::vector<double> u(cfg.kernel_u);
  for (double& v : u) v = std::exp(v);
  const KernelValue k = kernel_eval(u, strip_for(cfg, n), Alpha(cfg.alpha), *cfg.radius);
  json j = {{"u", cfg.kernel_u},          {"R", *cfg.radius},
            {"re", k.re},                 {"im", k.im},
            {"tail_ratio", k.tail_ratio}, {"truncation_warning", k.truncation_warning},
            {"converged", k.converged}};
  if (!cfg.out.empty()) write_json(cfg.out, j);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  acceptance::Options opt;
  opt.filter = cfg.filter;
  opt.seed = cfg.seed;
  const std::vector<acceptance::Result> results = acceptance::run(opt, out);
  acceptance::print_table(out, results);
  return acceptance::all_passed(results) ? kExitOk : kExitSelftestFail;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.threads) set_max_threads(cfg.threads);
    switch (cfg.mode) {
      case Mode::Forward: return cmd_forward(cfg, out);
      case Mode::Invert: return cmd_invert(cfg, out);
      case Mode::Characterize: return cmd_characterize(cfg, out);
      case Mode::Kernel: return cmd_kernel(cfg, out);
      case Mode::Selftest: return cmd_selftest(cfg, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace cesradon::cli
