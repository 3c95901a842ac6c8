#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cnsieve/prime_table.hpp"

// Witness-rule sieve over a progression of candidate centers.
//
// A pattern is a start value plus a set of rules. Each survivor m certifies a
// prime constellation through its witnesses:
//
//   additive w   m + w must be prime; removal marks m = n*p - w for n >= 2,
//                i.e. every m whose witness is a proper multiple of p.
//   scaled s     m must be a multiple of s with m/s prime; removal masks
//                m not divisible by s, then marks m = s*n*p for n >= 2.
//
// After sieving with p_1..p_k every remaining composite witness has least
// prime factor > p_k, so it is at least p_{k+1}^2. Survivors at or below
//
//   effective_limit = min over rules of  p_{k+1}^2 - 1 - w   (additive)
//                                        s * (p_{k+1}^2 - 1) (scaled)
//
// therefore satisfy their witness conditions exactly; anything above is
// provisional and only retrievable when explicitly asked for.

namespace cnsieve {

struct WitnessRule {
  enum class Kind { additive, scaled };

  Kind kind = Kind::additive;
  int64_t w = 0;   // additive offset, nonzero
  uint64_t s = 0;  // scale factor, >= 2

  static WitnessRule additive(int64_t w) { return {Kind::additive, w, 0}; }
  static WitnessRule scaled(uint64_t s) { return {Kind::scaled, 0, s}; }

  bool operator==(const WitnessRule&) const = default;
};

struct SievePattern {
  std::string name;
  std::vector<WitnessRule> rules;
  uint64_t start = 0;
  std::string description;
};

// Validates and assembles a pattern: rules nonempty and duplicate-free,
// additive offsets nonzero with start + w >= 2, scale factors >= 2,
// start >= 2. Violations throw std::invalid_argument.
SievePattern make_pattern(std::string name, std::vector<WitnessRule> rules, uint64_t start,
                          std::string description = "");

// Largest m whose witnesses are all certified once sieving used every prime
// below p_next (p_next = smallest prime not used).
uint64_t effective_limit(const SievePattern& pattern, uint64_t p_next);

struct SurvivorSet {
  SievePattern pattern;
  uint64_t bound = 0;             // survivors were collected over [start, bound]
  uint64_t effective_limit = 0;   // exactness horizon for this run
  uint64_t sieving_prime_max = 0; // largest prime actually used, 0 if none
  std::vector<uint64_t> survivors;  // ascending
};

// Sieves [pattern.start, bound]. Picks the fewest primes whose effective
// limit covers bound, so every survivor is exact. Requires table.limit >=
// bound + max additive |w| (witness range) — throws std::out_of_range.
SurvivorSet run_sieve(const SievePattern& pattern, uint64_t bound, const PrimeTable& table,
                      unsigned threads = 0);

// Instrumented run that stops after primes <= prime_cap; the effective limit
// may then fall below bound and survivors above it are provisional.
SurvivorSet run_sieve_capped(const SievePattern& pattern, uint64_t bound, const PrimeTable& table,
                             uint64_t prime_cap, unsigned threads = 0);

// Survivors <= x. x must lie in the certified range (x <= effective_limit)
// unless allow_provisional is set; x beyond the sieved bound always throws.
std::vector<uint64_t> survivors_below(const SurvivorSet& set, uint64_t x,
                                      bool allow_provisional = false);

struct ContaminationStats {
  uint64_t total = 0;            // every survivor counts, prime centers included
  uint64_t prime_survivors = 0;  // survivors that are themselves prime
};

// Requires table.limit >= set.bound.
ContaminationStats contamination_stats(const SurvivorSet& set, const PrimeTable& table);

}  // namespace cnsieve
