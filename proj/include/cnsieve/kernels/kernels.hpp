#pragma once

#include <cstddef>
#include <cstdint>

// Runtime-dispatched compute kernels.
//
// Every kernel has a scalar reference implementation and, on x86-64 hardware
// that supports it, an AVX2 variant. The active variant is resolved once per
// process: the CNSIEVE_KERNELS environment variable ("scalar" or "avx2")
// wins if set to a usable level, otherwise the best level the CPU supports.
// set_level() overrides both, which is what the equivalence tests use.
//
// popcount_words is bit-exact across variants. The floating-point reductions
// may differ in the last few ulps between variants because the association
// order differs; callers must not depend on bit-identical sums across levels.

namespace cnsieve::kernels {

enum class Level {
  scalar = 0,
  avx2 = 1,
};

const char* level_name(Level level);

// Highest level this CPU can run (compile-time support included).
Level best_supported_level();

// Level used by the dispatching entry points below.
Level active_level();

// Force a level; throws std::invalid_argument if unsupported on this CPU.
void set_level(Level level);

// Total set bits in words[0..n).
uint64_t popcount_words(const uint64_t* words, size_t n);

// Product of (1 - r/p) over the given values (ascending primes as doubles).
double product_one_minus_r_over_p(const double* primes, size_t n, int r);

// Product of (1 - r/p) / (1 - 1/p)^r over the given values, r in [1, 8].
double euler_product_r(const double* primes, size_t n, int r);

// Sum of log(1 - 1/p) + 1/p over the given values.
double mertens_log_sum(const double* primes, size_t n);

}  // namespace cnsieve::kernels
