#include "cnsieve/kernels/kernels.hpp"

#include <atomic>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace cnsieve::kernels {

// ---------------------------------------------------------------------------
// scalar reference kernels
// ---------------------------------------------------------------------------

namespace detail {

uint64_t popcount_words_scalar(const uint64_t* words, size_t n) {
  uint64_t total = 0;
  for (size_t i = 0; i < n; ++i) total += static_cast<uint64_t>(std::popcount(words[i]));
  return total;
}

double product_one_minus_r_over_p_scalar(const double* primes, size_t n, int r) {
  const double rd = static_cast<double>(r);
  double prod = 1.0;
  for (size_t i = 0; i < n; ++i) prod *= 1.0 - rd / primes[i];
  return prod;
}

double euler_product_r_scalar(const double* primes, size_t n, int r) {
  const double rd = static_cast<double>(r);
  double prod = 1.0;
  for (size_t i = 0; i < n; ++i) {
    const double p = primes[i];
    const double d = 1.0 - 1.0 / p;
    double dr = d;
    for (int k = 1; k < r; ++k) dr *= d;
    prod *= (1.0 - rd / p) / dr;
  }
  return prod;
}

double mertens_log_sum_scalar(const double* primes, size_t n) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double p = primes[i];
    sum += std::log1p(-1.0 / p) + 1.0 / p;
  }
  return sum;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

const char* level_name(Level level) {
  switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
  }
  return "unknown";
}

Level best_supported_level() {
#if defined(__x86_64__) && defined(__GNUC__)
  if (detail::avx2_compiled() && __builtin_cpu_supports("avx2")) return Level::avx2;
#endif
  return Level::scalar;
}

namespace {

Level resolve_initial_level() {
  const Level best = best_supported_level();
  if (const char* env = std::getenv("CNSIEVE_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Level::scalar;
    if (std::strcmp(env, "avx2") == 0 && best == Level::avx2) return Level::avx2;
    // Unrecognized or unusable request: fall through to auto detection.
  }
  return best;
}

std::atomic<Level>& level_slot() {
  static std::atomic<Level> slot{resolve_initial_level()};
  return slot;
}

}  // namespace

Level active_level() { return level_slot().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (level == Level::avx2 && best_supported_level() != Level::avx2)
    throw std::invalid_argument("kernels: avx2 not supported on this CPU/build");
  level_slot().store(level, std::memory_order_relaxed);
}

uint64_t popcount_words(const uint64_t* words, size_t n) {
  if (active_level() == Level::avx2) return detail::popcount_words_avx2(words, n);
  return detail::popcount_words_scalar(words, n);
}

double product_one_minus_r_over_p(const double* primes, size_t n, int r) {
  if (active_level() == Level::avx2) return detail::product_one_minus_r_over_p_avx2(primes, n, r);
  return detail::product_one_minus_r_over_p_scalar(primes, n, r);
}

double euler_product_r(const double* primes, size_t n, int r) {
  if (r < 1 || r > 8) throw std::invalid_argument("euler_product_r: r out of [1, 8]");
  if (active_level() == Level::avx2) return detail::euler_product_r_avx2(primes, n, r);
  return detail::euler_product_r_scalar(primes, n, r);
}

double mertens_log_sum(const double* primes, size_t n) {
  if (active_level() == Level::avx2) return detail::mertens_log_sum_avx2(primes, n);
  return detail::mertens_log_sum_scalar(primes, n);
}

}  // namespace cnsieve::kernels
