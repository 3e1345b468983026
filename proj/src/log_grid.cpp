#include "cesradon/log_grid.hpp"

#include <string>

#include "cesradon/error.hpp"

namespace cesradon {

LogGrid::LogGrid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) fail(ErrorKind::InvalidArgument, "log grid needs at least one axis");
  for (const GridAxis& a : axes_) {
    if (!(a.u_min < a.u_max)) fail(ErrorKind::InvalidArgument, "log grid: u_min must be < u_max");
    if (a.N < 8 || (a.N & (a.N - 1)) != 0) {
      fail(ErrorKind::InvalidArgument,
           "log grid: N must be a power of two >= 8, got " + std::to_string(a.N));
    }
    if (a.N != axes_.front().N) fail(ErrorKind::InvalidArgument, "log grid: axes must share N");
  }
}

LogGrid LogGrid::uniform(std::size_t n, double u_min, double u_max, std::size_t N) {
  return LogGrid(std::vector<GridAxis>(n, GridAxis{u_min, u_max, N}));
}

std::size_t LogGrid::size() const noexcept {
  if (axes_.empty()) return 0;
  std::size_t s = 1;
  for (const GridAxis& a : axes_) s *= a.N;
  return s;
}

void LogGrid::unflatten(std::size_t flat, std::vector<std::size_t>& idx) const {
  idx.resize(axes_.size());
  for (std::size_t k = axes_.size(); k-- > 0;) {
    idx[k] = flat % axes_[k].N;
    flat /= axes_[k].N;
  }
}

void LogGrid::coords(std::size_t flat, std::vector<double>& u) const {
  u.resize(axes_.size());
  for (std::size_t k = axes_.size(); k-- > 0;) {
    u[k] = axes_[k].coord(flat % axes_[k].N);
    flat /= axes_[k].N;
  }
}

}  // namespace cesradon
