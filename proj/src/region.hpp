#pragma once

// Iterated adaptive quadrature over regions {lo_k(x_<k) <= x_k <= hi_k(x_<k)}.
// The innermost axis is integrated in batches.

#include <functional>
#include <span>
#include <vector>

#include "cesradon/quadrature.hpp"

namespace cesradon::detail {

struct RegionProblem {
  std::size_t n = 1;
  // Fills [lo, hi] and interior breakpoints for axis k given x_0..x_{k-1}.
  std::function<void(std::size_t k, std::span<const double> prefix, double& lo, double& hi,
                     std::vector<double>& breaks)>
      limits;
  std::function<void(std::span<const double> prefix, std::span<const double> xs,
                     std::span<double> out)>
      inner;
};

QuadResult<double> integrate_region(const RegionProblem& problem, const QuadOptions& opt);

}  // namespace cesradon::detail
