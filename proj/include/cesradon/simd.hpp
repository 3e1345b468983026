#pragma once

// Data-parallel inner kernels. Every kernel has a scalar reference
// implementation; an AVX2+FMA variant is selected at runtime when the CPU
// supports it. Setting CESRADON_SIMD=scalar in the environment forces the
// reference path.

#include <complex>
#include <optional>
#include <span>
#include <string_view>

namespace cesradon::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// ISA used by the dispatching entry points below.
Isa active_isa() noexcept;

/// Whether the running CPU can execute the given variant.
bool isa_available(Isa isa) noexcept;

/// Test hook; std::nullopt restores automatic selection.
void set_isa_override(std::optional<Isa> isa) noexcept;

// out_i = (partial + (price * x_i)^alpha)^(1/alpha); the innermost CES step.
void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out);

// out_i = exp(scale * x_i)
void exp_scaled(std::span<const double> x, double scale, std::span<double> out);

// out_i = x_i^e for x_i >= 0 (0^e = 0 for e > 0)
void pow_batch(std::span<const double> x, double e, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);

// a_i *= b_i
void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b);

// Explicit variants, exposed for equivalence tests and benchmarks.
namespace scalar {
void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out);
void exp_scaled(std::span<const double> x, double scale, std::span<double> out);
void pow_batch(std::span<const double> x, double e, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b);
}  // namespace scalar

namespace avx2 {
void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out);
void exp_scaled(std::span<const double> x, double scale, std::span<double> out);
void pow_batch(std::span<const double> x, double e, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b);
}  // namespace avx2

}  // namespace cesradon::simd
