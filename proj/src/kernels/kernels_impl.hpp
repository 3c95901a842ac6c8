#pragma once

#include <cstddef>
#include <cstdint>

// Internal seams between the dispatcher and the per-level translation units.

namespace cnsieve::kernels::detail {

bool avx2_compiled();

uint64_t popcount_words_avx2(const uint64_t* words, size_t n);
double product_one_minus_r_over_p_avx2(const double* primes, size_t n, int r);
double euler_product_r_avx2(const double* primes, size_t n, int r);
double mertens_log_sum_avx2(const double* primes, size_t n);

uint64_t popcount_words_scalar(const uint64_t* words, size_t n);
double product_one_minus_r_over_p_scalar(const double* primes, size_t n, int r);
double euler_product_r_scalar(const double* primes, size_t n, int r);
double mertens_log_sum_scalar(const double* primes, size_t n);

// Smallest prime value the vectorized mertens series accepts; smaller inputs
// take the scalar log1p path inside both variants.
inline constexpr double kMertensSeriesMin = 64.0;

}  // namespace cnsieve::kernels::detail
