#include "cesradon/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "cesradon/error.hpp"

namespace cesradon {
namespace {

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

[[noreturn]] void pole(const char* who, Complex z) {
  std::ostringstream os;
  os << who << ": pole at z = " << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag())
     << "i";
  fail(ErrorKind::PoleError, os.str());
}

// Valid for Re z >= 0.5.
Complex log_gamma_lanczos(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    fail(ErrorKind::InvalidArgument, "log_gamma: non-finite argument");
  }
  if (is_pole(z)) pole("log_gamma", z);
  if (z.real() >= 0.5) return log_gamma_lanczos(z);
  // Shift right with Gamma(z) = Gamma(z + m) / (z (z+1) ... (z+m-1)). Summing
  // principal logs keeps the branch continuous across the real axis, which
  // reflection would not.
  const int m = static_cast<int>(std::ceil(0.5 - z.real()));
  Complex shift = 0.0;
  for (int k = 0; k < m; ++k) shift += std::log(z + static_cast<double>(k));
  return log_gamma_lanczos(z + static_cast<double>(m)) - shift;
}

Complex log_beta_multivariate(std::span<const Complex> z) {
  if (z.empty()) fail(ErrorKind::InvalidArgument, "beta_multivariate: empty argument");
  Complex sum = 0.0;
  for (Complex zk : z) {
    if (is_pole(zk)) pole("beta_multivariate", zk);
    sum += zk;
  }
  if (is_pole(sum)) pole("beta_multivariate", sum);
  if (z.size() == 1) return 0.0;
  Complex acc = 0.0;
  for (Complex zk : z) acc += log_gamma(zk);
  return acc - log_gamma(sum);
}

Complex beta_multivariate(std::span<const Complex> z) {
  return std::exp(log_beta_multivariate(z));
}

Complex beta2(Complex w) {
  if (w == Complex(0.0) || w == Complex(-1.0)) pole("beta2", w);
  return 1.0 / (w * (w + 1.0));
}

}  // namespace cesradon
