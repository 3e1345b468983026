#pragma once

// Complex Gamma-family functions on the inversion contour z = c + i tau.

#include <complex>
#include <span>

namespace cesradon {

using Complex = std::complex<double>;

/// Principal branch of log Gamma(z), analytic off (-inf, 0]. Throws PoleError at
/// z = 0, -1, -2, ...
Complex log_gamma(Complex z);

/// log of Gamma(z_1)...Gamma(z_n) / Gamma(z_1 + ... + z_n). Same branch
/// conventions as log_gamma; n = 1 returns exactly 0.
Complex log_beta_multivariate(std::span<const Complex> z);

Complex beta_multivariate(std::span<const Complex> z);

/// B(2, w) = 1 / (w (w + 1)); PoleError at w in {0, -1}.
Complex beta2(Complex w);

}  // namespace cesradon
