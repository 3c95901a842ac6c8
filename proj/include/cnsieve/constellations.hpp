#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cnsieve/pattern.hpp"
#include "cnsieve/prime_table.hpp"

// Catalog of prime-constellation kinds on top of the witness-rule engine.
//
// Counting conventions (count_constellations counts constellations with
// "position" <= x):
//   twin / gap(d)   centers m <= x with m - d and m + d prime; twin == gap(1)
//   sophie_germain  primes q <= x with 2q + 1 prime; the underlying survivors
//                   are m = 2q, so the sieve runs to 2x
//   triplet         centers of either form, A = (c-3, c+1, c+3) i.e.
//                   (p, p+4, p+6), B = (c-3, c-1, c+3) i.e. (p, p+2, p+6);
//                   the two forms are distinct constellations and a center is
//                   counted once per form it satisfies
//   quadruplet      centers m <= x with m +/- 2 and m +/- 4 prime
//   general(s, t)   primes p <= x with s*p + t prime (gcd(s,t) = 1, s*t even);
//                   survivors are m = s*p, for s = 1 the sieve leaves every m
//                   with m + t prime and the prime survivors are the pairs

namespace cnsieve {

struct ConstellationKind {
  enum class Tag { twin, gap, sophie_germain, triplet, quadruplet, general };

  Tag tag = Tag::twin;
  uint64_t gap_d = 1;   // gap kinds
  uint64_t gen_s = 0;   // general kinds
  int64_t gen_t = 0;

  static ConstellationKind twin();
  static ConstellationKind gap(uint64_t d);  // d >= 1; d == 1 normalizes to twin
  static ConstellationKind sophie_germain();
  static ConstellationKind triplet();
  static ConstellationKind quadruplet();
  static ConstellationKind general(uint64_t s, int64_t t);

  bool operator==(const ConstellationKind&) const = default;
};

// Accepts twin | gap:<d> | sg | triplet | quad | general:<s>:<t>.
ConstellationKind parse_kind(std::string_view text);
std::string kind_name(const ConstellationKind& kind);

// One pattern per kind, two for triplets.
std::vector<SievePattern> patterns_for(const ConstellationKind& kind);

// A finished sieve run sized so counts up to x_max are exact. count_values
// holds, per pattern, the sorted positions count_at compares against x
// (centers, or q = m/s for the scaled kinds, or prime survivors for
// general(1, t)).
struct ConstellationRun {
  ConstellationKind kind;
  uint64_t x_max = 0;
  std::vector<SurvivorSet> sets;
  std::vector<std::vector<uint64_t>> count_values;
};

// Requires table.limit >= sieve bound + max additive |w|, where the bound is
// x_max scaled per the conventions above (2x for sophie_germain, s*x for
// general).
ConstellationRun run_constellation(const ConstellationKind& kind, uint64_t x_max,
                                   const PrimeTable& table, unsigned threads = 0);

// Constellations at positions <= x; x must be <= run.x_max.
uint64_t count_at(const ConstellationRun& run, uint64_t x);

// One-shot convenience: run + count.
uint64_t count_constellations(const ConstellationKind& kind, uint64_t x, const PrimeTable& table,
                              unsigned threads = 0);

// Member primes certified by a surviving center; throws std::invalid_argument
// when center is not a survivor of the kind. For triplets the matching form
// is detected (form A preferred if both ever applied).
std::vector<uint64_t> members_of(const ConstellationKind& kind, uint64_t center,
                                 const PrimeTable& table);

}  // namespace cnsieve
