#include "cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cesradon/error.hpp"
#include "cesradon/gridfile.hpp"

namespace cesradon::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ConfigError, "config: " + what); }

double get_num(const json& j, const char* key) {
  if (!j.at(key).is_number()) bad(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string get_str(const json& j, const char* key) {
  if (!j.at(key).is_string()) bad(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_vec(const json& j, const char* key) {
  const json& a = j.at(key);
  if (a.is_number()) return {a.get<double>()};
  if (!a.is_array()) bad(std::string("'") + key + "' must be a number array");
  std::vector<double> v;
  for (const json& x : a) {
    if (!x.is_number()) bad(std::string("'") + key + "' must be a number array");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::Forward: return "forward";
    case Mode::Invert: return "invert";
    case Mode::Characterize: return "characterize";
    case Mode::Kernel: return "kernel";
    case Mode::Selftest: return "selftest";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  for (Mode m : {Mode::Forward, Mode::Invert, Mode::Characterize, Mode::Kernel, Mode::Selftest}) {
    if (s == to_string(m)) return m;
  }
  bad("unknown mode '" + s + "' (forward, invert, characterize, kernel, selftest)");
}

std::vector<GridAxis> parse_grid(const std::string& text) {
  std::vector<GridAxis> axes;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) axes.push_back(parse_axis(part));
  if (axes.empty()) bad("empty grid");
  return axes;
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) bad("'alpha' must lie in (0, 1]");
  if (!(p0 > 0.0) || !std::isfinite(p0)) bad("'p0' must be positive");
  for (double c : strip) {
    if (!(c < 1.0)) bad("'strip' entries must be < 1");
  }
  if (radius && !(*radius > 0.0)) bad("'radius' must be positive");
  if (taper != "hard" && taper != "gaussian") bad("'taper' must be hard or gaussian");
  if (quantity != "profit" && quantity != "radon" && quantity != "mass") bad("'quantity' must be profit, radon or mass");
  if (tol && (!(tol->abs >= 0.0) || !(tol->rel >= 0.0))) bad("'tol' entries must be nonnegative");
  for (const GridAxis& a : grid) {
    if (!(a.u_max > a.u_min) || a.N < 2) bad("grid axes need u_min < u_max and N >= 2");
  }
  if (!measure.empty() && !fixture.empty()) bad("give either 'measure' or 'fixture', not both");
  const std::size_t n = prices.empty() ? 0 : prices.front().size();
  for (const auto& p : prices) {
    if (p.size() != n || n == 0) bad("'prices' rows must share a positive length");
    for (double v : p) {
      if (!(v >= 0.0) || !std::isfinite(v)) bad("'prices' entries must be finite and >= 0");
    }
  }
  switch (mode) {
    case Mode::Forward:
      if (measure.empty() && fixture.empty()) bad("forward needs 'measure' or 'fixture'");
      if (grid.empty() && prices.empty()) bad("forward needs 'grid' or 'prices'");
      if (out.empty()) bad("forward needs 'out'");
      break;
    case Mode::Invert:
      if (measure.empty() && fixture.empty() && input.empty()) bad("invert needs 'measure', 'fixture' or 'input'");
      if (out.empty()) bad("invert needs 'out'");
      break;
    case Mode::Characterize:
      if (measure.empty() && fixture.empty() && input.empty()) bad("characterize needs 'measure', 'fixture' or 'input'");
      break;
    case Mode::Kernel:
      if (kernel_u.empty()) bad("kernel needs 'kernel_u'");
      if (!radius) bad("kernel needs 'radius'");
      break;
    case Mode::Selftest:
      break;
  }
}

json config_to_json(const RunConfig& c) {
  json j;
  j["mode"] = std::string(to_string(c.mode));
  if (!c.measure.empty()) j["measure"] = c.measure;
  if (!c.fixture.empty()) j["fixture"] = c.fixture;
  if (!c.input.empty()) j["input"] = c.input;
  j["alpha"] = c.alpha;
  if (!c.grid.empty()) {
    json g = json::array();
    for (const GridAxis& a : c.grid) g.push_back({{"u_min", a.u_min}, {"u_max", a.u_max}, {"N", a.N}});
    j["grid"] = g;
  }
  if (!c.prices.empty()) j["prices"] = c.prices;
  j["p0"] = c.p0;
  j["quantity"] = c.quantity;
  if (!c.strip.empty()) j["strip"] = c.strip;
  if (c.radius) j["radius"] = *c.radius;
  j["taper"] = c.taper;
  if (!c.out.empty()) j["out"] = c.out;
  if (c.tol) j["tol"] = {{"abs", c.tol->abs}, {"rel", c.tol->rel}};
  if (!c.kernel_u.empty()) j["kernel_u"] = c.kernel_u;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  if (!c.filter.empty()) j["filter"] = c.filter;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  static const std::set<std::string> known = {"mode",  "measure", "fixture", "input",    "alpha", "grid",
                                              "prices", "p0",     "quantity", "strip",   "radius", "taper",
                                              "out",   "tol",     "kernel_u", "seed",    "threads", "filter"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) bad("unknown key '" + it.key() + "'");
  }
  RunConfig c;
  try {
    if (j.contains("mode")) c.mode = mode_from_string(get_str(j, "mode"));
    if (j.contains("measure")) c.measure = get_str(j, "measure");
    if (j.contains("fixture")) c.fixture = get_str(j, "fixture");
    if (j.contains("input")) c.input = get_str(j, "input");
    if (j.contains("alpha")) c.alpha = get_num(j, "alpha");
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_string()) {
        c.grid = parse_grid(g.get<std::string>());
      } else {
        if (!g.is_array()) bad("'grid' must be an array of axes or a 'a:b:N' string");
        for (const json& a : g) {
          if (!a.is_object()) bad("grid axis must be an object");
          GridAxis ax{get_num(a, "u_min"), get_num(a, "u_max"), 0};
          const double N = get_num(a, "N");
          if (N != std::floor(N) || N < 2) bad("grid N must be an integer >= 2");
          ax.N = static_cast<std::size_t>(N);
          c.grid.push_back(ax);
        }
      }
    }
    if (j.contains("prices")) {
      if (!j.at("prices").is_array()) bad("'prices' must be an array of arrays");
      for (const json& row : j.at("prices")) {
        json wrap = {{"row", row}};
        c.prices.push_back(get_vec(wrap, "row"));
      }
    }
    if (j.contains("p0")) c.p0 = get_num(j, "p0");
    if (j.contains("quantity")) c.quantity = get_str(j, "quantity");
    if (j.contains("strip")) c.strip = get_vec(j, "strip");
    if (j.contains("radius") && !j.at("radius").is_null()) c.radius = get_num(j, "radius");
    if (j.contains("taper")) c.taper = get_str(j, "taper");
    if (j.contains("out")) c.out = get_str(j, "out");
    if (j.contains("tol")) {
      const json& t = j.at("tol");
      if (!t.is_object()) bad("'tol' must be {abs, rel}");
      c.tol = Tolerance{get_num(t, "abs"), get_num(t, "rel")};
    }
    if (j.contains("kernel_u")) c.kernel_u = get_vec(j, "kernel_u");
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) bad("'seed' must be a nonnegative integer");
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("threads")) {
      if (!j.at("threads").is_number_unsigned()) bad("'threads' must be a nonnegative integer");
      c.threads = j.at("threads").get<unsigned>();
    }
    if (j.contains("filter")) c.filter = get_str(j, "filter");
  } catch (const json::exception& e) {
    bad(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    bad(std::string("parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace cesradon::cli
