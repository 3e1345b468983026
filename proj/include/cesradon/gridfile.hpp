#pragma once

// Plain-text grid files:
//   # cesradon-grid v1
//   # n=2 axes=-4:4:16,-4:4:16 quantity=profit alpha=1 p0=1
//   u1,u2,value
//   rows in row-major order, last axis fastest.
// Scattered files replace axes=... by points=K and list arbitrary coordinates.

#include <iosfwd>
#include <string>
#include <vector>

#include "cesradon/log_grid.hpp"

namespace cesradon {

struct GridFile {
  std::vector<GridAxis> axes;  // coordinates are logarithms of p (or x for densities)
  std::vector<std::vector<double>> points;  // scattered mode, used when axes is empty
  std::string quantity = "profit";
  double alpha = 1.0;
  double p0 = 1.0;
  std::vector<double> values;

  std::size_t dim() const noexcept { return axes.empty() ? (points.empty() ? 0 : points.front().size()) : axes.size(); }
  bool scattered() const noexcept { return axes.empty(); }
  std::size_t rows() const noexcept;
  void coords(std::size_t flat, std::vector<double>& u) const;
};

void write_grid(std::ostream& os, const GridFile& g);
/// ConfigError on malformed headers, row counts or coordinates.
GridFile read_grid(std::istream& is);

void save_grid(const std::string& path, const GridFile& g);
GridFile load_grid(const std::string& path);

/// Parses "u_min:u_max:N".
GridAxis parse_axis(const std::string& text);
std::string format_axis(const GridAxis& a);

}  // namespace cesradon
