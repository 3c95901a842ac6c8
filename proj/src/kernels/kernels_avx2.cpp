// AVX2 kernel variants. This translation unit is compiled with -mavx2 on
// x86-64; everywhere else the stubs at the bottom keep the link satisfied.
// Dispatch guarantees these bodies only run after a cpuid check.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "kernels_impl.hpp"

#if defined(__AVX2__) && defined(__x86_64__)

#include <immintrin.h>

namespace cnsieve::kernels::detail {

bool avx2_compiled() { return true; }

namespace {

// Per-byte popcount via two nibble table lookups, summed with psadbw.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts =
      _mm256_add_epi8(_mm256_shuffle_epi8(table, lo), _mm256_shuffle_epi8(table, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline double reduce_mul(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_mul_pd(lo, hi);
  return _mm_cvtsd_f64(m) * _mm_cvtsd_f64(_mm_unpackhi_pd(m, m));
}

inline double reduce_add(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

inline __m256d pow_int(__m256d d, int r) {
  __m256d out = d;
  for (int k = 1; k < r; ++k) out = _mm256_mul_pd(out, d);
  return out;
}

}  // namespace

uint64_t popcount_words_avx2(const uint64_t* words, size_t n) {
  const size_t vec_n = n & ~size_t{3};
  __m256i acc = _mm256_setzero_si256();
  for (size_t i = 0; i < vec_n; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
    acc = _mm256_add_epi64(acc, popcount_bytes(v));
  }
  alignas(32) uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (size_t i = vec_n; i < n; ++i) total += static_cast<uint64_t>(__builtin_popcountll(words[i]));
  return total;
}

double product_one_minus_r_over_p_avx2(const double* primes, size_t n, int r) {
  const size_t vec_n = n & ~size_t{3};
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d rv = _mm256_set1_pd(static_cast<double>(r));
  __m256d acc = one;
  for (size_t i = 0; i < vec_n; i += 4) {
    const __m256d p = _mm256_loadu_pd(primes + i);
    acc = _mm256_mul_pd(acc, _mm256_sub_pd(one, _mm256_div_pd(rv, p)));
  }
  double prod = reduce_mul(acc);
  const double rd = static_cast<double>(r);
  for (size_t i = vec_n; i < n; ++i) prod *= 1.0 - rd / primes[i];
  return prod;
}

double euler_product_r_avx2(const double* primes, size_t n, int r) {
  const size_t vec_n = n & ~size_t{3};
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d rv = _mm256_set1_pd(static_cast<double>(r));
  __m256d acc = one;
  for (size_t i = 0; i < vec_n; i += 4) {
    const __m256d p = _mm256_loadu_pd(primes + i);
    const __m256d inv = _mm256_div_pd(one, p);
    const __m256d numer = _mm256_sub_pd(one, _mm256_mul_pd(rv, inv));
    const __m256d denom = pow_int(_mm256_sub_pd(one, inv), r);
    acc = _mm256_mul_pd(acc, _mm256_div_pd(numer, denom));
  }
  double prod = reduce_mul(acc);
  const double rd = static_cast<double>(r);
  for (size_t i = vec_n; i < n; ++i) {
    const double p = primes[i];
    const double d = 1.0 - 1.0 / p;
    double dr = d;
    for (int k = 1; k < r; ++k) dr *= d;
    prod *= (1.0 - rd / p) / dr;
  }
  return prod;
}

double mertens_log_sum_avx2(const double* primes, size_t n) {
  // log(1 - u) + u = -u^2 * (1/2 + u/3 + u^2/4 + ...); for u <= 1/64 the
  // truncation after the u^10 coefficient sits far below double rounding.
  size_t head = 0;
  double sum = 0.0;
  while (head < n && primes[head] < kMertensSeriesMin) {
    const double p = primes[head++];
    sum += std::log1p(-1.0 / p) + 1.0 / p;
  }
  const size_t tail_n = n - head;
  const size_t vec_n = tail_n & ~size_t{3};
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  for (size_t i = 0; i < vec_n; i += 4) {
    const __m256d p = _mm256_loadu_pd(primes + head + i);
    const __m256d u = _mm256_div_pd(one, p);
    __m256d poly = _mm256_set1_pd(1.0 / 12.0);
    for (int k = 11; k >= 2; --k)
      poly = _mm256_add_pd(_mm256_set1_pd(1.0 / k), _mm256_mul_pd(u, poly));
    const __m256d u2 = _mm256_mul_pd(u, u);
    acc = _mm256_sub_pd(acc, _mm256_mul_pd(u2, poly));
  }
  sum += reduce_add(acc);
  for (size_t i = head + vec_n; i < n; ++i) {
    const double p = primes[i];
    sum += std::log1p(-1.0 / p) + 1.0 / p;
  }
  return sum;
}

}  // namespace cnsieve::kernels::detail

#else  // !(__AVX2__ && __x86_64__)

namespace cnsieve::kernels::detail {

bool avx2_compiled() { return false; }

uint64_t popcount_words_avx2(const uint64_t* words, size_t n) {
  return popcount_words_scalar(words, n);
}
double product_one_minus_r_over_p_avx2(const double* primes, size_t n, int r) {
  return product_one_minus_r_over_p_scalar(primes, n, r);
}
double euler_product_r_avx2(const double* primes, size_t n, int r) {
  return euler_product_r_scalar(primes, n, r);
}
double mertens_log_sum_avx2(const double* primes, size_t n) {
  return mertens_log_sum_scalar(primes, n);
}

}  // namespace cnsieve::kernels::detail

#endif
