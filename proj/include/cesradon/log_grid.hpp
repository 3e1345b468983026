#pragma once

// Uniform grid in logarithmic coordinates, endpoints included.

#include <cstddef>
#include <vector>

namespace cesradon {

struct GridAxis {
  double u_min = 0.0;
  double u_max = 0.0;
  std::size_t N = 0;

  double spacing() const noexcept { return (u_max - u_min) / static_cast<double>(N - 1); }
  double coord(std::size_t i) const noexcept {
    return i + 1 == N ? u_max : u_min + static_cast<double>(i) * spacing();
  }
  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

class LogGrid {
 public:
  LogGrid() = default;
  /// Throws InvalidArgument unless every axis has u_min < u_max and N >= 8 a
  /// power of two, and all axes share N.
  explicit LogGrid(std::vector<GridAxis> axes);
  static LogGrid uniform(std::size_t n, double u_min, double u_max, std::size_t N);

  std::size_t dim() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept;
  const GridAxis& axis(std::size_t k) const { return axes_[k]; }
  const std::vector<GridAxis>& axes() const noexcept { return axes_; }

  /// Row-major multi-index of a flat index (last axis fastest).
  void unflatten(std::size_t flat, std::vector<std::size_t>& idx) const;
  void coords(std::size_t flat, std::vector<double>& u) const;

  friend bool operator==(const LogGrid&, const LogGrid&) = default;

 private:
  std::vector<GridAxis> axes_;
};

}  // namespace cesradon
