#pragma once

// Density recovery from Pi(., 1): log-grid sampling, Mellin transform by FFT,
// division by the Beta factors, truncated inverse transform, unwarp.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cesradon/ces.hpp"
#include "cesradon/forward.hpp"
#include "cesradon/log_grid.hpp"
#include "cesradon/measures.hpp"
#include "cesradon/special.hpp"

namespace cesradon {

/// Contour abscissae c_k < 1.
class MellinStrip {
 public:
  explicit MellinStrip(std::vector<double> c);
  static MellinStrip uniform(std::size_t n, double c) { return MellinStrip(std::vector<double>(n, c)); }

  std::size_t dim() const noexcept { return c_.size(); }
  const std::vector<double>& c() const noexcept { return c_; }
  double operator[](std::size_t k) const { return c_[k]; }
  friend bool operator==(const MellinStrip&, const MellinStrip&) = default;

 private:
  std::vector<double> c_;
};

enum class Taper { Hard, Gaussian };

struct Truncation {
  std::optional<double> radius;  // none: keep the full frequency lattice
  Taper taper = Taper::Hard;
  friend bool operator==(const Truncation&, const Truncation&) = default;
};

struct InversionConfig {
  LogGrid grid;
  MellinStrip strip{{0.5}};
  Truncation truncation;
  Alpha alpha = Alpha::one();
  Tolerance sample_tol{1e-12, 1e-11};
  double leak_threshold = 0.1;  // max boundary |g| / max |g| before BoundaryLeak

  /// n = 1: N = 4096 on [-12, 12], full lattice. n = 2: N = 256 on [-8, 8],
  /// Gaussian taper at R = 8. Strip c_k = 0.5.
  static InversionConfig defaults(std::size_t n, Alpha alpha = Alpha::one());
  void validate() const;
  /// Largest |tau| on the lattice (per-axis Nyquist pi / du, radial).
  double max_frequency() const;
};

/// Angular frequency of DFT bin k on an axis (negative for k >= N/2).
double dft_frequency(const GridAxis& axis, std::size_t k);

struct Spectrum {
  LogGrid grid;  // the sampling grid the lattice is dual to
  std::vector<Complex> values;
  double boundary_leak = 0.0;

  double tau(std::size_t axis, std::size_t k) const { return dft_frequency(grid.axis(axis), k); }
};

/// Pi(p0 * p, p0) / p0 at p_k = e^{u_k / alpha}, i.e. Pi(p, 1) reduced by homogeneity.
using ProfitEvaluator = std::function<double(std::span<const double> p, double p0)>;
std::vector<double> sample_profit_log(const ProfitEvaluator& profit, const InversionConfig& cfg,
                                      double p0 = 1.0);
/// Forward-module sampling; read-through disk cache when CESRADON_CACHE_DIR is set.
std::vector<double> sample_profit_log(const MeasureModel& m, const InversionConfig& cfg);

/// max over boundary faces of |g| / max |g|, g = e^{(1-c).u} Pi.
double boundary_leak(std::span<const double> samples, const InversionConfig& cfg);

/// M(c + i tau) on the DFT lattice. BoundaryLeak when the samples do not decay.
Spectrum mellin_of_profit(std::span<const double> samples, const InversionConfig& cfg);

/// alpha B(1 - z) B(2, alpha (n - sum z)) at z = c + i tau.
Complex spectral_divisor(std::span<const Complex> z, Alpha alpha);
Spectrum spectral_divide(const Spectrum& m, const InversionConfig& cfg);

/// Truncated inverse transform on the reflected grid s in [-u_max, -u_min]:
/// returns a_*(e^s) e^{c.s} before taking the real part.
std::vector<Complex> inverse_fourier(const Spectrum& s, const InversionConfig& cfg);
/// Grid (in log x) on which reconstruct_density returns samples.
LogGrid reconstruction_grid(const InversionConfig& cfg);
DensitySpec reconstruct_density(const Spectrum& s, const InversionConfig& cfg);

/// Convenience: sample, transform, divide, reconstruct.
DensitySpec invert_profit(const std::vector<double>& samples, const InversionConfig& cfg);

struct KernelValue {
  double re = 0.0;
  double im = 0.0;  // diagnostic; vanishes by conjugate symmetry
  bool truncation_warning = false;
  double tail_ratio = 0.0;  // |integrand| mass near |tau| = R relative to |K|
  bool converged = true;
};

/// K(u; c) truncated to |tau| <= R, n <= 2.
KernelValue kernel_eval(std::span<const double> u, const MellinStrip& strip, Alpha alpha, double R,
                        double tol = 1e-10);

/// a(x) = int K(p x; c) Pi(p, 1) dp with p_k = e^{v_k / alpha}, v_k in [v_min, v_max].
using UnitProfit = std::function<double(std::span<const double> p)>;
struct KernelQuadrature {
  double v_min = -12.0;
  double v_max = 12.0;
  double tol = 1e-9;
};
double reconstruct_via_kernel(const UnitProfit& profit, std::span<const double> x,
                              const MellinStrip& strip, Alpha alpha, double R,
                              const KernelQuadrature& q = {});

/// Slices over p0 in (0, 1] for a given p; Pi(p, 1) comes from profit_from_radon.
using RadonProvider = std::function<RadonSlice(std::span<const double> p)>;
DensitySpec invert_radon(const RadonProvider& provider, const InversionConfig& cfg);
std::vector<double> sample_profit_from_radon(const RadonProvider& provider, const InversionConfig& cfg);

}  // namespace cesradon
