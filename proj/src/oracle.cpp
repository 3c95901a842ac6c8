#include "cnsieve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cnsieve::oracle {

bool trial_is_prime(uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (uint64_t f = 5; f * f <= n; f += 6) {
    if (n % f == 0 || n % (f + 2) == 0) return false;
  }
  return true;
}

std::vector<uint64_t> bruteforce_survivors(const SievePattern& pattern, uint64_t bound) {
  std::vector<uint64_t> out;
  for (uint64_t m = pattern.start; m <= bound; ++m) {
    bool ok = true;
    for (const auto& rule : pattern.rules) {
      if (rule.kind == WitnessRule::Kind::additive) {
        const int64_t witness = static_cast<int64_t>(m) + rule.w;
        if (witness < 2 || !trial_is_prime(static_cast<uint64_t>(witness))) ok = false;
      } else {
        if (m % rule.s != 0 || !trial_is_prime(m / rule.s)) ok = false;
      }
      if (!ok) break;
    }
    if (ok) out.push_back(m);
  }
  return out;
}

namespace {

// Signed inclusion-exclusion walk; subsets whose product exceeds x contribute
// nothing and none of their supersets can either, so the branch is cut.
int64_t coprime_count_rec(uint64_t x, const std::vector<uint64_t>& moduli, size_t idx,
                          uint64_t prod, int sign) {
  int64_t total = 0;
  for (size_t i = idx; i < moduli.size(); ++i) {
    if (prod > x / moduli[i]) continue;  // prod * moduli[i] > x
    const uint64_t next = prod * moduli[i];
    total += sign * static_cast<int64_t>(x / next);
    total += coprime_count_rec(x, moduli, i + 1, next, -sign);
  }
  return total;
}

}  // namespace

uint64_t coprime_count(uint64_t x, const std::vector<uint64_t>& moduli) {
  if (moduli.size() > 25) throw std::invalid_argument("coprime_count: more than 25 moduli");
  for (size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] < 2) throw std::invalid_argument("coprime_count: modulus must be >= 2");
    for (size_t j = i + 1; j < moduli.size(); ++j)
      if (std::gcd(moduli[i], moduli[j]) != 1)
        throw std::invalid_argument("coprime_count: moduli must be pairwise coprime");
  }
  const int64_t removed = coprime_count_rec(x, moduli, 0, 1, 1);
  return x - static_cast<uint64_t>(removed);
}

namespace {

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Direct alternating sum: n - sum([n/p_i]) + sum([n/(p_i p_j)]) - ...
int64_t legendre_subset_sum(uint64_t n, const std::vector<uint64_t>& primes, size_t idx,
                           uint64_t prod, int sign) {
  int64_t total = 0;
  for (size_t i = idx; i < primes.size(); ++i) {
    if (prod > n / primes[i]) break;  // primes ascend, every later subset is empty too
    const uint64_t next = prod * primes[i];
    total += sign * static_cast<int64_t>(n / next);
    total += legendre_subset_sum(n, primes, i + 1, next, -sign);
  }
  return total;
}

// phi(x, a) = #{ n <= x : n has no prime factor among the first a primes }.
uint64_t legendre_phi(uint64_t x, size_t a, const std::vector<uint64_t>& primes) {
  if (a == 0) return x;
  if (x < 2) return x;             // 0 -> 0, 1 -> 1
  if (primes[a - 1] >= x) return 1;  // only n = 1 survives
  return legendre_phi(x, a - 1, primes) - legendre_phi(x / primes[a - 1], a - 1, primes);
}

}  // namespace

uint64_t legendre_pi(uint64_t n, const PrimeTable& table, bool allow_recursion) {
  if (n < 2) return 0;
  const uint64_t root = isqrt_u64(n);
  if (table.limit() < root) throw std::out_of_range("legendre_pi: table must cover sqrt(n)");
  const std::vector<uint64_t> primes = table.primes_up_to(root);
  const auto r = static_cast<uint64_t>(primes.size());
  if (r <= 25) {
    const int64_t excluded = legendre_subset_sum(n, primes, 0, 1, 1);
    return n - static_cast<uint64_t>(excluded) + r - 1;
  }
  if (!allow_recursion)
    throw std::length_error("legendre_pi: direct alternating sum limited to 25 base primes");
  return legendre_phi(n, primes.size(), primes) + r - 1;
}

uint64_t primes_in_ap_count(uint64_t a, uint64_t b, uint64_t x, const PrimeTable& table) {
  if (b == 0) throw std::invalid_argument("primes_in_ap_count: modulus must be positive");
  if (std::gcd(a, b) != 1) throw std::invalid_argument("primes_in_ap_count: gcd(a, b) must be 1");
  if (table.limit() < x) throw std::out_of_range("primes_in_ap_count: table must cover x");
  uint64_t count = 0;
  for (uint64_t p : table.primes_up_to(x))
    if (p % b == a % b) ++count;
  return count;
}

Verdict compare_survivors(const std::vector<uint64_t>& lhs, const std::vector<uint64_t>& rhs) {
  Verdict v;
  v.lhs_count = lhs.size();
  v.rhs_count = rhs.size();
  size_t i = 0, j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    if (lhs[i] == rhs[j]) {
      ++i;
      ++j;
    } else {
      v.first_mismatch = std::min(lhs[i], rhs[j]);
      return v;
    }
  }
  if (i < lhs.size()) {
    v.first_mismatch = lhs[i];
    return v;
  }
  if (j < rhs.size()) {
    v.first_mismatch = rhs[j];
    return v;
  }
  v.matched = true;
  return v;
}

}  // namespace cnsieve::oracle
