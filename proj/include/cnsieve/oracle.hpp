#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cnsieve/pattern.hpp"
#include "cnsieve/prime_table.hpp"

// Deliberately naive reference implementations. Nothing here shares sieve or
// counting logic with the engines it checks: primality is trial division,
// survivor generation walks the progression testing every rule per center,
// and the counting identities are evaluated straight from their definitions.

namespace cnsieve::oracle {

// 6k +/- 1 trial division.
bool trial_is_prime(uint64_t n);

// Every m in [pattern.start, bound] whose rules all hold, by trial division.
std::vector<uint64_t> bruteforce_survivors(const SievePattern& pattern, uint64_t bound);

// #{ n <= x : n not divisible by any modulus }, by inclusion-exclusion over
// subsets. Moduli must be pairwise coprime, each >= 2, at most 25 of them.
uint64_t coprime_count(uint64_t x, const std::vector<uint64_t>& moduli);

// pi(n) by the Legendre identity. With r = pi(sqrt(n)) base primes (taken
// from the table, which must cover sqrt(n)): for r <= 25 the alternating sum
// is evaluated directly by subset enumeration; beyond that the phi(x, a)
// recursion is used unless allow_recursion is false, which then throws
// std::length_error to keep the 2^r blowup explicit.
uint64_t legendre_pi(uint64_t n, const PrimeTable& table, bool allow_recursion = true);

// #{ p <= x : p prime, p == a (mod b) }; gcd(a, b) must be 1.
uint64_t primes_in_ap_count(uint64_t a, uint64_t b, uint64_t x, const PrimeTable& table);

struct Verdict {
  bool matched = false;
  std::optional<uint64_t> first_mismatch;  // smallest value present in only one list
  uint64_t lhs_count = 0;
  uint64_t rhs_count = 0;
};

// Compares two ascending value lists.
Verdict compare_survivors(const std::vector<uint64_t>& lhs, const std::vector<uint64_t>& rhs);

}  // namespace cnsieve::oracle
