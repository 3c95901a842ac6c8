#include "cnsieve/prime_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "cnsieve/kernels/kernels.hpp"

namespace cnsieve {

namespace {

constexpr uint64_t kMaxLimit = uint64_t{1} << 52;

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes up to root (inclusive), by a plain byte sieve.
std::vector<uint64_t> odd_base_primes(uint64_t root, uint64_t prime_cap) {
  std::vector<uint64_t> primes;
  if (root < 3) return primes;
  std::vector<uint8_t> comp(root + 1, 0);
  for (uint64_t i = 3; i * i <= root; i += 2) {
    if (comp[i]) continue;
    for (uint64_t j = i * i; j <= root; j += 2 * i) comp[j] = 1;
  }
  for (uint64_t p = 3; p <= root; p += 2)
    if (!comp[p] && p <= prime_cap) primes.push_back(p);
  return primes;
}

}  // namespace

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

PrimeTable build_prime_table_capped(uint64_t limit, uint64_t segment_size, uint64_t prime_cap,
                                    unsigned threads) {
  if (limit < 2 || limit > kMaxLimit) throw std::out_of_range("prime table limit out of range");
  if (segment_size < 64) throw std::invalid_argument("segment_size must be >= 64");

  PrimeTable table;
  table.limit_ = limit;
  table.segment_size_ = segment_size;
  table.prime_cap_ = prime_cap;
  table.bit_count_ = limit >= 3 ? (limit - 1) / 2 : 0;
  table.words_.assign((table.bit_count_ + 63) / 64, 0);

  const std::vector<uint64_t> base = odd_base_primes(isqrt_u64(limit), prime_cap);
  if (table.bit_count_ == 0) return table;

  // Segment boundaries in bit units, rounded up to whole words so concurrent
  // workers never share a word.
  const uint64_t seg_bits = (segment_size + 63) & ~uint64_t{63};
  const uint64_t seg_count = (table.bit_count_ + seg_bits - 1) / seg_bits;
  uint64_t* words = table.words_.data();
  const uint64_t bit_count = table.bit_count_;

  auto mark_segment = [&](uint64_t seg) {
    const uint64_t b0 = seg * seg_bits;
    const uint64_t b1 = std::min(b0 + seg_bits, bit_count);
    const uint64_t v_lo = 2 * b0 + 3;
    for (uint64_t p : base) {
      uint64_t start = p * p;
      if (start < v_lo) {
        uint64_t q = ((v_lo + p - 1) / p) * p;
        if ((q & 1) == 0) q += p;
        start = q;
      }
      for (uint64_t idx = (start - 3) / 2; idx < b1; idx += p)
        words[idx >> 6] |= uint64_t{1} << (idx & 63);
    }
  };

  unsigned worker_count = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  worker_count = static_cast<unsigned>(std::min<uint64_t>(worker_count, seg_count));
  if (worker_count <= 1) {
    for (uint64_t seg = 0; seg < seg_count; ++seg) mark_segment(seg);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) {
      workers.emplace_back([&, w] {
        for (uint64_t seg = w; seg < seg_count; seg += worker_count) mark_segment(seg);
      });
    }
    for (auto& t : workers) t.join();
  }
  return table;
}

PrimeTable build_prime_table(uint64_t limit, uint64_t segment_size, unsigned threads) {
  return build_prime_table_capped(limit, segment_size, PrimeTable::kNoPrimeCap, threads);
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

bool PrimeTable::is_prime(uint64_t m) const {
  if (m < 2 || m > limit_) throw std::out_of_range("is_prime: value outside [2, limit]");
  if (m == 2) return true;
  if ((m & 1) == 0) return false;
  return !bit((m - 3) / 2);
}

uint64_t PrimeTable::prime_count(uint64_t x) const {
  if (x > limit_) throw std::out_of_range("prime_count: x exceeds table limit");
  if (x < 2) return 0;
  if (x < 3) return 1;
  const uint64_t n_bits = (x - 1) / 2;  // odd numbers in [3, x]
  const uint64_t full_words = n_bits / 64;
  uint64_t marked = kernels::popcount_words(words_.data(), full_words);
  const uint64_t rem = n_bits & 63;
  if (rem) marked += std::popcount(words_[full_words] & ((uint64_t{1} << rem) - 1));
  return 1 + n_bits - marked;
}

uint64_t PrimeTable::nth_prime(uint64_t k) const {
  if (k == 0) throw std::invalid_argument("nth_prime: k is 1-based");
  if (k == 1) return 2;
  uint64_t remaining = k - 1;
  const uint64_t n_words = words_.size();
  for (uint64_t wi = 0; wi < n_words; ++wi) {
    const uint64_t base_idx = wi * 64;
    const uint64_t valid = std::min<uint64_t>(64, bit_count_ - base_idx);
    uint64_t zeros = ~words_[wi];
    if (valid < 64) zeros &= (uint64_t{1} << valid) - 1;
    const uint64_t zc = std::popcount(zeros);
    if (remaining > zc) {
      remaining -= zc;
      continue;
    }
    while (zeros) {
      const int b = std::countr_zero(zeros);
      if (--remaining == 0) return 2 * (base_idx + static_cast<uint64_t>(b)) + 3;
      zeros &= zeros - 1;
    }
  }
  throw std::out_of_range("nth_prime: fewer than k primes below limit");
}

std::vector<uint64_t> PrimeTable::primes_up_to(uint64_t x) const {
  if (x > limit_) throw std::out_of_range("primes_up_to: x exceeds table limit");
  std::vector<uint64_t> out;
  if (x < 2) return out;
  out.push_back(2);
  const uint64_t n_bits = x >= 3 ? (x - 1) / 2 : 0;
  const uint64_t n_words = (n_bits + 63) / 64;
  for (uint64_t wi = 0; wi < n_words; ++wi) {
    const uint64_t base_idx = wi * 64;
    const uint64_t valid = std::min<uint64_t>(64, n_bits - base_idx);
    uint64_t zeros = ~words_[wi];
    if (valid < 64) zeros &= (uint64_t{1} << valid) - 1;
    while (zeros) {
      const int b = std::countr_zero(zeros);
      out.push_back(2 * (base_idx + static_cast<uint64_t>(b)) + 3);
      zeros &= zeros - 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// cache
// ---------------------------------------------------------------------------

namespace {

uint64_t cache_bitmap_bytes(uint64_t limit) { return (limit - 1 + 15) / 16; }

void put_u32le(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64le(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

void save_prime_cache(const PrimeTable& table, const std::filesystem::path& file) {
  if (!table.complete())
    throw std::invalid_argument("save_prime_cache: refusing to persist a capped table");
  std::string buf;
  const uint64_t bitmap_bytes = cache_bitmap_bytes(table.limit());
  buf.reserve(20 + bitmap_bytes);
  buf.append(kPrimeCacheMagic, sizeof(kPrimeCacheMagic));
  put_u32le(buf, kPrimeCacheVersion);
  put_u64le(buf, table.limit());
  const auto& words = table.words();
  const uint64_t stored_bytes = words.size() * 8;
  for (uint64_t i = 0; i < bitmap_bytes; ++i) {
    const uint8_t byte =
        i < stored_bytes ? static_cast<uint8_t>(words[i / 8] >> (8 * (i % 8))) : uint8_t{0};
    buf.push_back(static_cast<char>(byte));
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_prime_cache: cannot open " + file.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("save_prime_cache: short write to " + file.string());
}

std::optional<PrimeTable> load_prime_cache(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 20) return std::nullopt;
  if (std::memcmp(buf.data(), kPrimeCacheMagic, sizeof(kPrimeCacheMagic)) != 0) return std::nullopt;
  uint32_t version = 0;
  for (int i = 0; i < 4; ++i) version |= static_cast<uint32_t>(static_cast<uint8_t>(buf[8 + i])) << (8 * i);
  if (version != kPrimeCacheVersion) return std::nullopt;
  uint64_t limit = 0;
  for (int i = 0; i < 8; ++i) limit |= static_cast<uint64_t>(static_cast<uint8_t>(buf[12 + i])) << (8 * i);
  if (limit < 2 || limit > (uint64_t{1} << 52)) return std::nullopt;
  if (buf.size() != 20 + cache_bitmap_bytes(limit)) return std::nullopt;

  PrimeTable table;
  table.limit_ = limit;
  table.segment_size_ = PrimeTable::kDefaultSegmentSize;
  table.prime_cap_ = PrimeTable::kNoPrimeCap;
  table.bit_count_ = limit >= 3 ? (limit - 1) / 2 : 0;
  table.words_.assign((table.bit_count_ + 63) / 64, 0);
  const uint64_t usable_bytes = std::min<uint64_t>(cache_bitmap_bytes(limit), (table.bit_count_ + 7) / 8);
  for (uint64_t i = 0; i < usable_bytes; ++i) {
    const auto byte = static_cast<uint64_t>(static_cast<uint8_t>(buf[20 + i]));
    table.words_[i / 8] |= byte << (8 * (i % 8));
  }
  // Mask stray pad bits so they can never read as composite marks.
  const uint64_t rem = table.bit_count_ & 63;
  if (rem && !table.words_.empty()) table.words_.back() &= (uint64_t{1} << rem) - 1;
  return table;
}

std::filesystem::path prime_cache_file(const std::filesystem::path& cache_dir, uint64_t limit) {
  return cache_dir / ("primes_" + std::to_string(limit) + ".cns");
}

PrimeTable build_prime_table_cached(uint64_t limit, const std::filesystem::path& cache_dir,
                                    uint64_t segment_size, unsigned threads) {
  const std::filesystem::path file = prime_cache_file(cache_dir, limit);
  if (auto cached = load_prime_cache(file); cached && cached->limit() == limit)
    return std::move(*cached);
  PrimeTable table = build_prime_table(limit, segment_size, threads);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  save_prime_cache(table, file);
  return table;
}

}  // namespace cnsieve
