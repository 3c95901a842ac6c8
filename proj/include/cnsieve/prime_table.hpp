#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

// Segmented odd-only prime sieve with a persistent bitmap cache.
//
// The table stores one bit per odd number: bit i corresponds to 2*i + 3 and is
// set when that number is composite. 2 is special-cased in every query. The
// builder runs the classic two-phase scheme: a small simple sieve collects the
// base primes up to sqrt(limit), then fixed-size segments of the bitmap are
// marked independently, which keeps the working set cache-resident and lets
// segments go to worker threads. Marking only ever sets bits, and workers own
// disjoint word ranges, so the result is bit-identical for any segment size
// and any worker count.
//
// A capped build (prime_cap below sqrt(limit)) stops marking after the given
// prime. Such a table is an instrument, not a primality oracle: an unmarked
// bit then only means "no prime factor <= prime_cap", which is exactly the
// state the effective-limit law talks about, so tests can observe that every
// unmarked odd number below next_prime(prime_cap)^2 is in fact prime.

namespace cnsieve {

class PrimeTable {
 public:
  static constexpr uint64_t kDefaultSegmentSize = uint64_t{1} << 18;  // odd slots per segment
  static constexpr uint64_t kNoPrimeCap = ~uint64_t{0};

  uint64_t limit() const { return limit_; }
  uint64_t segment_size() const { return segment_size_; }
  uint64_t prime_cap() const { return prime_cap_; }
  bool complete() const { return prime_cap_ == kNoPrimeCap; }

  // Definite verdict for m in [2, limit]; anything outside that range throws
  // std::out_of_range. On a capped table this reports the partial-sieve state.
  bool is_prime(uint64_t m) const;

  // pi(x) for x <= limit.
  uint64_t prime_count(uint64_t x) const;

  // k-th prime, 1-based (nth_prime(1) == 2); throws std::out_of_range when
  // fewer than k primes are <= limit.
  uint64_t nth_prime(uint64_t k) const;

  std::vector<uint64_t> primes_up_to(uint64_t x) const;

  const std::vector<uint64_t>& words() const { return words_; }
  uint64_t odd_slots() const { return bit_count_; }

 private:
  friend PrimeTable build_prime_table_capped(uint64_t, uint64_t, uint64_t, unsigned);
  friend std::optional<PrimeTable> load_prime_cache(const std::filesystem::path&);

  bool bit(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  uint64_t limit_ = 0;
  uint64_t segment_size_ = 0;
  uint64_t prime_cap_ = kNoPrimeCap;
  uint64_t bit_count_ = 0;            // odd numbers in [3, limit]
  std::vector<uint64_t> words_;
};

// Builds the full table. segment_size is in odd slots and must be >= 64;
// threads == 0 picks the hardware concurrency.
PrimeTable build_prime_table(uint64_t limit,
                             uint64_t segment_size = PrimeTable::kDefaultSegmentSize,
                             unsigned threads = 0);

// Instrumented build that marks with primes <= prime_cap only.
PrimeTable build_prime_table_capped(uint64_t limit, uint64_t segment_size, uint64_t prime_cap,
                                    unsigned threads = 0);

// ---------------------------------------------------------------------------
// bitmap cache
//
// File layout (little-endian):
//   bytes 0..7    magic "CNSIEVE1"
//   bytes 8..11   format version, currently 1
//   bytes 12..19  limit
//   then ceil((limit - 1) / 16) bitmap bytes; bit j of byte i is the mark for
//   2*(8*i + j) + 3. Trailing pad bits are written as zero and ignored.
// ---------------------------------------------------------------------------

inline constexpr char kPrimeCacheMagic[8] = {'C', 'N', 'S', 'I', 'E', 'V', 'E', '1'};
inline constexpr uint32_t kPrimeCacheVersion = 1;

// Serializes a complete table; capped tables are refused (std::invalid_argument).
void save_prime_cache(const PrimeTable& table, const std::filesystem::path& file);

// Returns std::nullopt when the file is missing or fails magic/version/size
// validation; such a file is a rebuild candidate, never a data source.
std::optional<PrimeTable> load_prime_cache(const std::filesystem::path& file);

// Cache file used by build_prime_table_cached for a given limit.
std::filesystem::path prime_cache_file(const std::filesystem::path& cache_dir, uint64_t limit);

// Loads the cached bitmap when a valid one exists for exactly this limit,
// otherwise builds and (re)writes the cache file.
PrimeTable build_prime_table_cached(uint64_t limit, const std::filesystem::path& cache_dir,
                                    uint64_t segment_size = PrimeTable::kDefaultSegmentSize,
                                    unsigned threads = 0);

}  // namespace cnsieve
