#include "region.hpp"

#include <algorithm>
#include <cmath>

namespace cesradon::detail {
namespace {

QuadResult<double> level(const RegionProblem& P, std::size_t k, std::vector<double>& prefix,
                         const QuadOptions& opt) {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breaks;
  P.limits(k, std::span<const double>(prefix.data(), k), lo, hi, breaks);
  if (!(hi > lo)) return {};
  if (k + 1 == P.n) {
    auto f = [&](std::span<const double> xs, std::span<double> ys) {
      P.inner(std::span<const double>(prefix.data(), k), xs, ys);
    };
    return integrate_batch<double>(f, lo, hi, opt, breaks);
  }
  QuadOptions inner_opt = opt;
  const double width = std::isinf(hi) ? 1.0 : std::max(1.0, hi - lo);
  inner_opt.abs_tol = 0.1 * opt.abs_tol / width;
  bool inner_ok = true;
  std::size_t inner_evals = 0;
  auto f = [&](std::span<const double> xs, std::span<double> ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      prefix[k] = xs[i];
      const QuadResult<double> r = level(P, k + 1, prefix, inner_opt);
      ys[i] = r.value;
      inner_ok = inner_ok && r.converged;
      inner_evals += r.evaluations;
    }
  };
  QuadResult<double> r = integrate_batch<double>(f, lo, hi, opt, breaks);
  r.converged = r.converged && inner_ok;
  r.evaluations += inner_evals;
  return r;
}

}  // namespace

QuadResult<double> integrate_region(const RegionProblem& problem, const QuadOptions& opt) {
  std::vector<double> prefix(problem.n, 0.0);
  return level(problem, 0, prefix, opt);
}

}  // namespace cesradon::detail
