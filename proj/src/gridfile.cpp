#include "cesradon/gridfile.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cesradon/error.hpp"

namespace cesradon {
namespace {

constexpr const char* kMagic = "# cesradon-grid v1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) fail(ErrorKind::ConfigError, std::string("grid file: bad number for ") + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::size_t GridFile::rows() const noexcept {
  if (axes.empty()) return points.size();
  std::size_t r = 1;
  for (const GridAxis& a : axes) r *= a.N;
  return r;
}

void GridFile::coords(std::size_t flat, std::vector<double>& u) const {
  if (axes.empty()) {
    u = points[flat];
    return;
  }
  u.resize(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    u[k] = axes[k].coord(flat % axes[k].N);
    flat /= axes[k].N;
  }
}

GridAxis parse_axis(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3) fail(ErrorKind::ConfigError, "axis must read u_min:u_max:N, got '" + text + "'");
  GridAxis a;
  a.u_min = to_double(parts[0], "u_min");
  a.u_max = to_double(parts[1], "u_max");
  const double N = to_double(parts[2], "N");
  if (!(N >= 2) || N != std::floor(N) || N > 1e8) fail(ErrorKind::ConfigError, "axis point count must be an integer >= 2");
  a.N = static_cast<std::size_t>(N);
  if (!(a.u_max > a.u_min)) fail(ErrorKind::ConfigError, "axis needs u_min < u_max");
  return a;
}

std::string format_axis(const GridAxis& a) { return fmt(a.u_min) + ":" + fmt(a.u_max) + ":" + std::to_string(a.N); }

void write_grid(std::ostream& os, const GridFile& g) {
  if (g.values.size() != g.rows()) fail(ErrorKind::DimensionMismatch, "grid file: value count differs from row count");
  os << kMagic << '\n';
  os << "# n=" << g.dim();
  if (g.scattered()) {
    os << " points=" << g.points.size();
  } else {
    os << " axes=";
    for (std::size_t k = 0; k < g.dim(); ++k) os << (k ? "," : "") << format_axis(g.axes[k]);
  }
  os << " quantity=" << g.quantity << " alpha=" << fmt(g.alpha) << " p0=" << fmt(g.p0) << '\n';
  for (std::size_t k = 0; k < g.dim(); ++k) os << 'u' << (k + 1) << ',';
  os << "value\n";
  std::vector<double> u;
  std::string line;
  for (std::size_t r = 0; r < g.values.size(); ++r) {
    g.coords(r, u);
    line.clear();
    for (double v : u) {
      line += fmt(v);
      line += ',';
    }
    line += fmt(g.values[r]);
    line += '\n';
    os << line;
  }
}

GridFile read_grid(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic) fail(ErrorKind::ConfigError, "grid file: missing '# cesradon-grid v1' header");
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) fail(ErrorKind::ConfigError, "grid file: missing metadata line");
  GridFile g;
  std::size_t n = 0;
  bool have_axes = false;
  std::size_t npoints = 0;
  bool have_points = false;
  std::istringstream meta(line.substr(2));
  std::string tok;
  while (meta >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, "grid file: bad metadata token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "n") {
      n = static_cast<std::size_t>(to_double(val, "n"));
    } else if (key == "axes") {
      for (const std::string& a : split(val, ',')) g.axes.push_back(parse_axis(a));
      have_axes = true;
    } else if (key == "points") {
      npoints = static_cast<std::size_t>(to_double(val, "points"));
      have_points = true;
    } else if (key == "quantity") {
      g.quantity = val;
    } else if (key == "alpha") {
      g.alpha = to_double(val, "alpha");
    } else if (key == "p0") {
      g.p0 = to_double(val, "p0");
    }
  }
  if (n == 0 || have_axes == have_points || (have_axes && g.axes.size() != n)) {
    fail(ErrorKind::ConfigError, "grid file: need exactly one of axes= (matching n) or points=");
  }
  if (!std::getline(is, line)) fail(ErrorKind::ConfigError, "grid file: missing column header");
  const std::size_t rows = have_points ? npoints : g.rows();
  g.values.reserve(rows);
  std::vector<double> expect;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != n + 1) fail(ErrorKind::ConfigError, "grid file: wrong column count in row " + std::to_string(g.values.size() + 1));
    if (g.values.size() >= rows) fail(ErrorKind::ConfigError, "grid file: more rows than the header allows");
    if (have_points) {
      std::vector<double> pt(n);
      for (std::size_t k = 0; k < n; ++k) pt[k] = to_double(cols[k], "coordinate");
      g.points.push_back(std::move(pt));
      g.values.push_back(to_double(cols[n], "value"));
      continue;
    }
    g.coords(g.values.size(), expect);
    for (std::size_t k = 0; k < n; ++k) {
      const double u = to_double(cols[k], "coordinate");
      if (std::abs(u - expect[k]) > 1e-9 * (1.0 + std::abs(expect[k]))) {
        fail(ErrorKind::ConfigError, "grid file: coordinates not in ascending row-major order at row " + std::to_string(g.values.size() + 1));
      }
    }
    g.values.push_back(to_double(cols[n], "value"));
  }
  if (g.values.size() != rows) fail(ErrorKind::ConfigError, "grid file: row count differs from the header");
  return g;
}

void save_grid(const std::string& path, const GridFile& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  write_grid(os, g);
  if (!os) fail(ErrorKind::IoError, "write to '" + path + "' failed");
}

GridFile load_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_grid(is);
}

}  // namespace cesradon
