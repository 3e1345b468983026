#pragma once

// Numerical checks that sampled R or Pi data come from a nonnegative measure:
// sign and monotonicity of R, scale laws, convexity and boundary behaviour of
// Pi, and complete monotonicity of the probe
//   F(p) = int_0^inf e^{-s} M(p^{1/a}, s^{1/a}) ds  (= int e^{-sum p_k x_k^a} m(dx)).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cesradon/ces.hpp"
#include "cesradon/forward.hpp"
#include "cesradon/measures.hpp"

namespace cesradon {

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v) noexcept;

/// violation <= tol: pass; <= 10 tol: inconclusive; otherwise fail.
Verdict classify(double violation, double tol) noexcept;

struct Witness {
  std::vector<double> point;
  std::vector<double> values;
  std::string note;
};

struct CheckReport {
  std::string condition;
  Verdict verdict = Verdict::Pass;
  std::optional<Witness> witness;  // always set when verdict is Fail
  double tolerance = 0.0;
  double violation = 0.0;
};

nlohmann::json report_to_json(const CheckReport& r);

/// (p, p0) -> sublevel mass, and (p, p0) -> Pi.
using MassProvider = std::function<double(std::span<const double> p, double p0)>;
using ProfitProvider = std::function<double(std::span<const double> p, double p0)>;

enum class Provenance { FromRadonData, FromMeasure, FromProfitData, Synthetic };

struct FProbe {
  std::function<double(std::span<const double> p)> eval;
  double alpha = 1.0;
  Provenance provenance = Provenance::Synthetic;

  double operator()(std::span<const double> p) const { return eval(p); }
};

CheckReport check_radon_nonneg(const RadonSlice& rs, double tol);
/// |M(lp, l p0) - M(p, p0)| <= tol at every probe, l log-uniform in [0.1, 10].
CheckReport check_radon_homogeneity(const MassProvider& mass, std::span<const PricePoint> probes, double tol,
                                    std::uint64_t seed = 1);

/// Stieltjes form via integration by parts; TailDivergence if the integral
/// against e^{-s} does not settle.
FProbe f_probe_from_radon(MassProvider mass, Alpha alpha, double tol);
/// Direct weighted Laplace transform; NonConvergent on quadrature failure.
FProbe f_probe_from_measure(const MeasureModel& m, Alpha alpha, double tol = 1e-11);
/// Same F from Pi directly: int_0^inf e^{-s} Pi(p^{1/a}, t) (a s/t + (1 - a)/t) ds, t = s^{1/a}.
FProbe f_probe_from_profit(ProfitProvider profit, Alpha alpha, double tol);

/// (-1)^{|k|} Delta_h^k F(q) >= -tol for |k| <= k_max (forward differences).
CheckReport check_completely_monotone(const FProbe& f, std::span<const std::vector<double>> grid, double h,
                                      int k_max, double tol, std::string condition = "f_completely_monotone");
/// F(l d) for l = 10^{-j} must settle as l -> 0.
CheckReport check_f_bounded(const FProbe& f, std::span<const double> direction, double tol,
                            std::string condition = "f_bounded");
/// F(l d) -> 0 as l -> inf, l = 10^j up to 1e8; a plateau fails, slow decay is inconclusive.
CheckReport check_f_decay(const FProbe& f, std::span<const double> direction, double tol,
                          std::string condition = "radon_f_decay");

struct CharacterizeOptions {
  double tol = 1e-6;
  std::size_t probes = 10;
  std::uint64_t seed = 1;
  int k_max = 3;
  std::vector<std::vector<double>> f_grid;  // empty: a default 5-point grid
  double h = 0.0;                            // 0: 0.1 * grid pitch
};

/// Default probe grid for F and its pitch.
std::vector<std::vector<double>> default_f_grid(std::size_t n, double* pitch = nullptr);
std::vector<PricePoint> random_probes(std::size_t n, std::size_t count, std::uint64_t seed);

/// Convexity, homogeneity, boundary limits, and the profit-side F checks.
std::vector<CheckReport> check_profit_conditions(const ProfitProvider& profit, Alpha alpha,
                                                 std::span<const PricePoint> probes,
                                                 const CharacterizeOptions& opt);

/// Full battery for a measure: R-side and Pi-side conditions.
std::vector<CheckReport> characterize_measure(const MeasureModel& m, Alpha alpha, const CharacterizeOptions& opt);

/// Only the F-side checks for an externally supplied probe.
std::vector<CheckReport> characterize_f(const FProbe& f, std::size_t n, const CharacterizeOptions& opt);

}  // namespace cesradon
