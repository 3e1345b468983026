// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <cmath>

#include "cesradon/simd.hpp"

namespace cesradon::simd::avx2 {
namespace {

constexpr double kExpHi = 709.782712893384;
constexpr double kExpLo = -745.1332191019412;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;

// 2^n for integral-valued n in [-1100, 1100], split in two factors so that
// neither leaves the normal range.
inline __m256d pow2_split(__m256d n, __m256d* second) {
  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m128i n1 = _mm_srai_epi32(ni, 1);
  const __m128i n2 = _mm_sub_epi32(ni, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i e1 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52);
  const __m256i e2 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52);
  *second = _mm256_castsi256_pd(e2);
  return _mm256_castsi256_pd(e1);
}

inline __m256d exp_pd(__m256d x) {
  const __m256d hi = _mm256_set1_pd(kExpHi);
  const __m256d lo = _mm256_set1_pd(kExpLo);
  const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

  // Taylor polynomial of degree 13 on |r| <= ln2/2.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  __m256d s2;
  const __m256d s1 = pow2_split(n, &s2);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);
  y = _mm256_blendv_pd(y, _mm256_set1_pd(HUGE_VAL), over);
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), under);
  // NaN inputs fall through both compares; keep them NaN.
  const __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  return _mm256_blendv_pd(y, x, nan);
}

// Natural log for x > 0 (fdlibm reduction and coefficients); x == 0 gives -inf.
inline __m256d log_pd(__m256d x) {
  const __m256d tiny = _mm256_set1_pd(2.2250738585072014e-308);
  const __m256d is_sub = _mm256_cmp_pd(x, tiny, _CMP_LT_OQ);
  const __m256d xs = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(4503599627370496.0)), is_sub);
  const __m256d eadj = _mm256_and_pd(is_sub, _mm256_set1_pd(-52.0));

  const __m256i bits = _mm256_castpd_si256(xs);
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  const __m256i mant_bits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                            _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);
  // int64 -> double through the 2^52 + 2^51 magic constant.
  const __m256i magic_i = _mm256_set1_epi64x(0x4338000000000000LL);
  const __m256d magic_d = _mm256_set1_pd(6755399441055744.0);
  __m256d k = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(exp_bits, magic_i)), magic_d);
  k = _mm256_add_pd(_mm256_sub_pd(k, _mm256_set1_pd(1023.0)), eadj);

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  k = _mm256_add_pd(k, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d R = _mm256_set1_pd(1.479819860511658591e-01);
  R = _mm256_fmadd_pd(R, z, _mm256_set1_pd(1.531383769920937332e-01));
  R = _mm256_fmadd_pd(R, z, _mm256_set1_pd(1.818357216161805012e-01));
  R = _mm256_fmadd_pd(R, z, _mm256_set1_pd(2.222219843214978396e-01));
  R = _mm256_fmadd_pd(R, z, _mm256_set1_pd(2.857142874366239149e-01));
  R = _mm256_fmadd_pd(R, z, _mm256_set1_pd(3.999999999940941908e-01));
  R = _mm256_fmadd_pd(R, z, _mm256_set1_pd(6.666666666666735130e-01));
  R = _mm256_mul_pd(R, z);
  const __m256d hfsq = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_mul_pd(f, f));
  // k*ln2_hi - ((hfsq - (s*(hfsq+R) + k*ln2_lo)) - f)
  const __m256d t = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, R), _mm256_mul_pd(k, _mm256_set1_pd(kLn2Lo)));
  const __m256d inner = _mm256_sub_pd(_mm256_sub_pd(hfsq, t), f);
  __m256d y = _mm256_fmsub_pd(k, _mm256_set1_pd(kLn2Hi), inner);

  const __m256d zero = _mm256_setzero_pd();
  y = _mm256_blendv_pd(y, _mm256_set1_pd(-HUGE_VAL), _mm256_cmp_pd(x, zero, _CMP_EQ_OQ));
  y = _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, _mm256_set1_pd(HUGE_VAL), _CMP_EQ_OQ));
  y = _mm256_blendv_pd(y, _mm256_set1_pd(std::nan("")), _mm256_cmp_pd(x, zero, _CMP_NGE_UQ));
  return y;
}

// x^e for x >= 0; zeros map to 0 (e > 0) or 1 (e == 0).
inline __m256d pow_pd(__m256d x, __m256d e, double e_scalar) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pos = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
  const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), x, pos);
  const __m256d y = exp_pd(_mm256_mul_pd(e, log_pd(safe)));
  return _mm256_blendv_pd(_mm256_set1_pd(e_scalar == 0.0 ? 1.0 : 0.0), y, pos);
}

}  // namespace

void ces_extend(double partial, double price, double alpha, std::span<const double> x,
                std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  const __m256d vp = _mm256_set1_pd(price);
  const __m256d vpart = _mm256_set1_pd(partial);
  if (alpha == 1.0) {
    for (; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(vp, _mm256_loadu_pd(x.data() + i), vpart));
    }
    for (; i < n; ++i) out[i] = partial + price * x[i];
    return;
  }
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vinv = _mm256_set1_pd(1.0 / alpha);
  for (; i + 4 <= n; i += 4) {
    const __m256d y = _mm256_mul_pd(vp, _mm256_loadu_pd(x.data() + i));
    const __m256d t = _mm256_add_pd(vpart, pow_pd(y, va, alpha));
    _mm256_storeu_pd(out.data() + i, pow_pd(t, vinv, 1.0 / alpha));
  }
  if (i < n) {
    alignas(32) double buf_in[4] = {0, 0, 0, 0};
    alignas(32) double buf_out[4];
    for (std::size_t j = i; j < n; ++j) buf_in[j - i] = x[j];
    const __m256d y = _mm256_mul_pd(vp, _mm256_load_pd(buf_in));
    const __m256d t = _mm256_add_pd(vpart, pow_pd(y, va, alpha));
    _mm256_store_pd(buf_out, pow_pd(t, vinv, 1.0 / alpha));
    for (std::size_t j = i; j < n; ++j) out[j] = buf_out[j - i];
  }
}

void exp_scaled(std::span<const double> x, double scale, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_mul_pd(vs, _mm256_loadu_pd(x.data() + i))));
  }
  if (i < n) {
    alignas(32) double buf_in[4] = {0, 0, 0, 0};
    alignas(32) double buf_out[4];
    for (std::size_t j = i; j < n; ++j) buf_in[j - i] = x[j];
    _mm256_store_pd(buf_out, exp_pd(_mm256_mul_pd(vs, _mm256_load_pd(buf_in))));
    for (std::size_t j = i; j < n; ++j) out[j] = buf_out[j - i];
  }
}

void pow_batch(std::span<const double> x, double e, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d ve = _mm256_set1_pd(e);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, pow_pd(_mm256_loadu_pd(x.data() + i), ve, e));
  }
  if (i < n) {
    alignas(32) double buf_in[4] = {1, 1, 1, 1};
    alignas(32) double buf_out[4];
    for (std::size_t j = i; j < n; ++j) buf_in[j - i] = x[j];
    _mm256_store_pd(buf_out, pow_pd(_mm256_load_pd(buf_in), ve, e));
    for (std::size_t j = i; j < n; ++j) out[j] = buf_out[j - i];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void cmul_inplace(std::span<std::complex<double>> a, std::span<const std::complex<double>> b) {
  const std::size_t n = a.size();
  double* pa = reinterpret_cast<double*>(a.data());
  const double* pb = reinterpret_cast<const double*>(b.data());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d a_sw = _mm256_permute_pd(va, 0x5);
    _mm256_storeu_pd(pa + 2 * i, _mm256_fmaddsub_pd(va, b_re, _mm256_mul_pd(a_sw, b_im)));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    a[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

}  // namespace cesradon::simd::avx2
