// Compiled with -mavx2 -mfma; only reached after the CPUID check in dispatch.

#include <immintrin.h>

#include <cmath>

#include "tlpss/kernels.hpp"

namespace tlpss::kernels::avx2 {
namespace {

// exp(x) for x in [-708, 0]; lanes below -708 return 0. Cody-Waite reduction
// to |r| <= ln2/2 followed by a degree-13 Taylor polynomial (< 2 ulp).
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,      1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,         0.5,
      1.0,                1.0};
  __m256d poly = _mm256_set1_pd(kInvFact[0]);
  for (int k = 1; k < 14; ++k) poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(kInvFact[k]));

  // 2^n via the exponent field; n >= -1022 after the clamp.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i bits = _mm256_cvtepi32_epi64(n32);
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  const __m256d result = _mm256_mul_pd(poly, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void asf_batch(const double* x, double* out, std::size_t n, double p, double a, double q) {
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vq = _mm256_set1_pd(q);
  const __m256d q1 = _mm256_set1_pd(q + 1.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d u = _mm256_sub_pd(_mm256_div_pd(_mm256_loadu_pd(x + k), vp), va);
    const __m256d neg_abs = _mm256_or_pd(u, sign_mask);
    const __m256d e = exp_nonpositive(neg_abs);
    const __m256d denom = _mm256_add_pd(one, e);
    const __m256d when_pos = _mm256_div_pd(e, denom);
    const __m256d when_neg = _mm256_div_pd(one, denom);
    const __m256d pos = _mm256_cmp_pd(u, zero, _CMP_GE_OQ);
    const __m256d sig = _mm256_blendv_pd(when_neg, when_pos, pos);
    _mm256_storeu_pd(out + k, _mm256_div_pd(_mm256_add_pd(sig, vq), q1));
  }
  scalar::asf_batch(x + k, out + k, n - k, p, a, q);
}

std::size_t intersect(const std::int32_t* a, std::size_t na, const std::int32_t* b,
                      std::size_t nb, std::uint32_t* pos_a, std::uint32_t* pos_b) {
  std::size_t i = 0, j = 0, count = 0;
  __m256i rot[8];
  for (int r = 0; r < 8; ++r) {
    rot[r] = _mm256_setr_epi32(r % 8, (1 + r) % 8, (2 + r) % 8, (3 + r) % 8, (4 + r) % 8,
                               (5 + r) % 8, (6 + r) % 8, (7 + r) % 8);
  }
  while (i + 8 <= na && j + 8 <= nb) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + j));
    unsigned masks[8];
    unsigned any = 0;
    for (int r = 0; r < 8; ++r) {
      const __m256i cmp = _mm256_cmpeq_epi32(va, _mm256_permutevar8x32_epi32(vb, rot[r]));
      masks[r] = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(cmp)));
      any |= masks[r];
    }
    while (any) {
      const int lane = __builtin_ctz(any);
      any &= any - 1;
      int r = 0;
      while (!(masks[r] & (1u << lane))) ++r;
      if (pos_a) pos_a[count] = static_cast<std::uint32_t>(i + lane);
      if (pos_b) pos_b[count] = static_cast<std::uint32_t>(j + (lane + r) % 8);
      ++count;
    }
    const std::int32_t a_max = a[i + 7];
    const std::int32_t b_max = b[j + 7];
    if (a_max <= b_max) i += 8;
    if (b_max <= a_max) j += 8;
  }
  while (i < na && j < nb) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      if (pos_a) pos_a[count] = static_cast<std::uint32_t>(i);
      if (pos_b) pos_b[count] = static_cast<std::uint32_t>(j);
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double gather_sum(const double* values, const std::uint32_t* idx, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    acc = _mm256_add_pd(acc, _mm256_i32gather_pd(values, vi, 8));
  }
  double sum = hsum(acc);
  for (; k < n; ++k) sum += values[idx[k]];
  return sum;
}

}  // namespace tlpss::kernels::avx2
