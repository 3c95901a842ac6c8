#include "cnsieve/pattern.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cnsieve {

namespace {

constexpr uint64_t kMaxBound = uint64_t{1} << 50;

int64_t max_additive_abs(const SievePattern& pattern) {
  int64_t m = 0;
  for (const auto& rule : pattern.rules)
    if (rule.kind == WitnessRule::Kind::additive) m = std::max(m, std::abs(rule.w));
  return m;
}

}  // namespace

SievePattern make_pattern(std::string name, std::vector<WitnessRule> rules, uint64_t start,
                          std::string description) {
  if (rules.empty()) throw std::invalid_argument("pattern needs at least one rule");
  if (start < 2) throw std::invalid_argument("pattern start must be >= 2");
  for (size_t i = 0; i < rules.size(); ++i) {
    const auto& rule = rules[i];
    if (rule.kind == WitnessRule::Kind::additive) {
      if (rule.w == 0) throw std::invalid_argument("additive rule offset must be nonzero");
      if (static_cast<int64_t>(start) + rule.w < 2)
        throw std::invalid_argument("additive witness start + w must be >= 2");
      if (std::abs(rule.w) > (int64_t{1} << 40))
        throw std::invalid_argument("additive rule offset too large");
    } else {
      if (rule.s < 2) throw std::invalid_argument("scaled rule factor must be >= 2");
      if (rule.s > (uint64_t{1} << 40)) throw std::invalid_argument("scaled rule factor too large");
    }
    for (size_t j = i + 1; j < rules.size(); ++j)
      if (rules[j] == rule) throw std::invalid_argument("duplicate witness rule");
  }
  SievePattern pattern;
  pattern.name = std::move(name);
  pattern.rules = std::move(rules);
  pattern.start = start;
  pattern.description = std::move(description);
  return pattern;
}

uint64_t effective_limit(const SievePattern& pattern, uint64_t p_next) {
  const uint64_t sq = p_next * p_next;
  uint64_t lim = std::numeric_limits<uint64_t>::max();
  for (const auto& rule : pattern.rules) {
    uint64_t r;
    if (rule.kind == WitnessRule::Kind::additive) {
      const int64_t v = static_cast<int64_t>(sq) - 1 - rule.w;
      r = v < 0 ? 0 : static_cast<uint64_t>(v);
    } else {
      r = rule.s * (sq - 1);
    }
    lim = std::min(lim, r);
  }
  return lim;
}

namespace {

struct SievingPrimes {
  std::vector<uint64_t> primes;  // every prime used, ascending
  uint64_t p_next = 2;           // smallest prime not used
};

// Ascending primes until either the effective limit covers bound (further
// primes cannot touch [start, bound]) or the instrumentation cap cuts in.
SievingPrimes select_primes(const SievePattern& pattern, uint64_t bound, const PrimeTable& table,
                            uint64_t prime_cap) {
  SievingPrimes out;
  const uint64_t scan = std::min(table.limit(), std::max<uint64_t>(bound + 64, 256));
  const std::vector<uint64_t> primes = table.primes_up_to(scan);
  for (uint64_t p : primes) {
    if (effective_limit(pattern, p) >= bound || p > prime_cap) {
      out.p_next = p;
      return out;
    }
    out.primes.push_back(p);
  }
  throw std::out_of_range("run_sieve: prime table too small to select sieving primes");
}

}  // namespace

SurvivorSet run_sieve_capped(const SievePattern& pattern, uint64_t bound, const PrimeTable& table,
                             uint64_t prime_cap, unsigned threads) {
  if (pattern.rules.empty()) throw std::invalid_argument("run_sieve: empty pattern");
  if (bound > kMaxBound) throw std::out_of_range("run_sieve: bound too large");
  const auto maxw = static_cast<uint64_t>(max_additive_abs(pattern));
  if (table.limit() < bound + maxw)
    throw std::out_of_range("run_sieve: table must cover bound + max additive |w|");

  const SievingPrimes chosen = select_primes(pattern, bound, table, prime_cap);

  SurvivorSet set;
  set.pattern = pattern;
  set.bound = bound;
  set.effective_limit = effective_limit(pattern, chosen.p_next);
  set.sieving_prime_max = chosen.primes.empty() ? 0 : chosen.primes.back();
  if (bound < pattern.start) return set;

  const uint64_t start = pattern.start;
  const uint64_t n_bits = bound - start + 1;  // bit i <-> center start + i
  std::vector<uint64_t> words((n_bits + 63) / 64, 0);
  uint64_t* data = words.data();

  constexpr uint64_t kSpanBits = uint64_t{1} << 20;
  const uint64_t span_count = (n_bits + kSpanBits - 1) / kSpanBits;

  auto mark = [data](uint64_t idx) { data[idx >> 6] |= uint64_t{1} << (idx & 63); };

  auto sieve_span = [&](uint64_t span) {
    const uint64_t i0 = span * kSpanBits;
    const uint64_t i1 = std::min(i0 + kSpanBits, n_bits);
    const uint64_t m_lo = start + i0;
    const uint64_t m_hi = start + i1 - 1;
    for (const auto& rule : pattern.rules) {
      if (rule.kind == WitnessRule::Kind::scaled) {
        // Mask centers that are not multiples of s at all.
        for (uint64_t r = 1; r < rule.s; ++r) {
          uint64_t m = m_lo + (rule.s + r - m_lo % rule.s) % rule.s;
          for (; m <= m_hi; m += rule.s) mark(m - start);
        }
        // Then multiples with a composite cofactor: m = s * n * p, n >= 2.
        for (uint64_t p : chosen.primes) {
          const uint64_t step = rule.s * p;
          uint64_t n0 = (m_lo + step - 1) / step;
          if (n0 < 2) n0 = 2;
          for (uint64_t m = n0 * step; m <= m_hi; m += step) mark(m - start);
        }
      } else {
        // m = n * p - w, n >= 2: witness m + w = n * p is composite. The
        // start invariant keeps every witness >= 2, so the int64 range math
        // below never goes negative.
        const int64_t w = rule.w;
        const int64_t hi = static_cast<int64_t>(m_hi);
        const int64_t s0 = static_cast<int64_t>(start);
        for (uint64_t pu : chosen.primes) {
          const auto p = static_cast<int64_t>(pu);
          int64_t n0 = (static_cast<int64_t>(m_lo) + w + p - 1) / p;
          if (n0 < 2) n0 = 2;
          for (int64_t wit = n0 * p; wit - w <= hi; wit += p)
            mark(static_cast<uint64_t>(wit - w - s0));
        }
      }
    }
  };

  unsigned worker_count = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  worker_count = static_cast<unsigned>(std::min<uint64_t>(worker_count, span_count));
  if (worker_count <= 1) {
    for (uint64_t span = 0; span < span_count; ++span) sieve_span(span);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) {
      workers.emplace_back([&, w] {
        for (uint64_t span = w; span < span_count; span += worker_count) sieve_span(span);
      });
    }
    for (auto& t : workers) t.join();
  }

  for (uint64_t wi = 0; wi < words.size(); ++wi) {
    const uint64_t base_idx = wi * 64;
    const uint64_t valid = std::min<uint64_t>(64, n_bits - base_idx);
    uint64_t zeros = ~words[wi];
    if (valid < 64) zeros &= (uint64_t{1} << valid) - 1;
    while (zeros) {
      const int b = std::countr_zero(zeros);
      set.survivors.push_back(start + base_idx + static_cast<uint64_t>(b));
      zeros &= zeros - 1;
    }
  }
  return set;
}

SurvivorSet run_sieve(const SievePattern& pattern, uint64_t bound, const PrimeTable& table,
                      unsigned threads) {
  return run_sieve_capped(pattern, bound, table, PrimeTable::kNoPrimeCap, threads);
}

std::vector<uint64_t> survivors_below(const SurvivorSet& set, uint64_t x, bool allow_provisional) {
  if (x > set.bound) throw std::out_of_range("survivors_below: x beyond sieved bound");
  if (x > set.effective_limit && !allow_provisional)
    throw std::out_of_range("survivors_below: x beyond effective limit; survivors provisional");
  const auto end = std::upper_bound(set.survivors.begin(), set.survivors.end(), x);
  return {set.survivors.begin(), end};
}

ContaminationStats contamination_stats(const SurvivorSet& set, const PrimeTable& table) {
  if (table.limit() < set.bound)
    throw std::out_of_range("contamination_stats: table must cover the sieved bound");
  ContaminationStats stats;
  stats.total = set.survivors.size();
  for (uint64_t m : set.survivors)
    if (table.is_prime(m)) ++stats.prime_survivors;
  return stats;
}

}  // namespace cnsieve
