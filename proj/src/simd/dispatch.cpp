#include <atomic>
#include <cstdlib>
#include <cstring>

#include "cesradon/simd.hpp"

namespace cesradon::simd {
namespace {

// -1 = automatic, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

bool cpu_has_avx2() noexcept {
#if defined(CESRADON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa automatic_isa() noexcept {
  static const Isa isa = [] {
    const char* env = std::getenv("CESRADON_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) noexcept {
  return isa == Isa::Scalar || cpu_has_avx2();
}

Isa active_isa() noexcept {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Isa>(o);
  return automatic_isa();
}

void set_isa_override(std::optional<Isa> isa) noexcept {
  if (isa && !isa_available(*isa)) isa = Isa::Scalar;
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

#define CESRADON_DISPATCH(call)                  \
  do {                                           \
    if (active_isa() == Isa::Avx2) return avx2::call; \
    return scalar::call;                         \
  } while (0)

void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out) {
  CESRADON_DISPATCH(ces_extend(partial, price, alpha, x, out));
}

void exp_scaled(std::span<const double> x, double scale, std::span<double> out) {
  CESRADON_DISPATCH(exp_scaled(x, scale, out));
}

void pow_batch(std::span<const double> x, double e, std::span<double> out) {
  CESRADON_DISPATCH(pow_batch(x, e, out));
}

double dot(std::span<const double> a, std::span<const double> b) {
  CESRADON_DISPATCH(dot(a, b));
}

void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b) {
  CESRADON_DISPATCH(cmul_inplace(a, b));
}

#undef CESRADON_DISPATCH

#if !defined(CESRADON_HAVE_AVX2)
// Non-x86 builds: keep the symbols so equivalence tests link; never selected.
namespace avx2 {
void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out) {
  scalar::ces_extend(partial, price, alpha, x, out);
}
void exp_scaled(std::span<const double> x, double scale, std::span<double> out) {
  scalar::exp_scaled(x, scale, out);
}
void pow_batch(std::span<const double> x, double e, std::span<double> out) {
  scalar::pow_batch(x, e, out);
}
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b) {
  scalar::cmul_inplace(a, b);
}
}  // namespace avx2
#endif

}  // namespace cesradon::simd
