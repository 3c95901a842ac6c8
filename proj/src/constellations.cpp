#include "cnsieve/constellations.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace cnsieve {

namespace {

constexpr uint64_t kMaxGeneralScale = 1000000;
constexpr int64_t kMaxGeneralOffset = 1000000;
constexpr uint64_t kMaxGapD = 1000000;

uint64_t parse_u64_field(std::string_view text) {
  uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("bad numeric field");
  return value;
}

int64_t parse_i64_field(std::string_view text) {
  int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("bad numeric field");
  return value;
}

}  // namespace

ConstellationKind ConstellationKind::twin() { return {Tag::twin, 1, 0, 0}; }

ConstellationKind ConstellationKind::gap(uint64_t d) {
  if (d < 1 || d > kMaxGapD) throw std::invalid_argument("gap distance out of range");
  if (d == 1) return twin();
  return {Tag::gap, d, 0, 0};
}

ConstellationKind ConstellationKind::sophie_germain() { return {Tag::sophie_germain, 0, 0, 0}; }
ConstellationKind ConstellationKind::triplet() { return {Tag::triplet, 0, 0, 0}; }
ConstellationKind ConstellationKind::quadruplet() { return {Tag::quadruplet, 0, 0, 0}; }

ConstellationKind ConstellationKind::general(uint64_t s, int64_t t) {
  if (s < 1 || s > kMaxGeneralScale) throw std::invalid_argument("general scale out of range");
  if (t == 0 || t < -kMaxGeneralOffset || t > kMaxGeneralOffset)
    throw std::invalid_argument("general offset out of range");
  const uint64_t abs_t = static_cast<uint64_t>(t < 0 ? -t : t);
  if (std::gcd(s, abs_t) != 1) throw std::invalid_argument("general(s, t) needs gcd(s, t) = 1");
  if ((s * abs_t) % 2 != 0) throw std::invalid_argument("general(s, t) needs s*t even");
  return {Tag::general, 0, s, t};
}

ConstellationKind parse_kind(std::string_view text) {
  if (text == "twin") return ConstellationKind::twin();
  if (text == "sg") return ConstellationKind::sophie_germain();
  if (text == "triplet") return ConstellationKind::triplet();
  if (text == "quad") return ConstellationKind::quadruplet();
  if (text.starts_with("gap:")) return ConstellationKind::gap(parse_u64_field(text.substr(4)));
  if (text.starts_with("general:")) {
    const std::string_view rest = text.substr(8);
    const size_t colon = rest.find(':');
    if (colon == std::string_view::npos)
      throw std::invalid_argument("general pattern is general:<s>:<t>");
    return ConstellationKind::general(parse_u64_field(rest.substr(0, colon)),
                                      parse_i64_field(rest.substr(colon + 1)));
  }
  throw std::invalid_argument("unknown pattern: " + std::string(text));
}

std::string kind_name(const ConstellationKind& kind) {
  switch (kind.tag) {
    case ConstellationKind::Tag::twin: return "twin";
    case ConstellationKind::Tag::gap: return "gap:" + std::to_string(kind.gap_d);
    case ConstellationKind::Tag::sophie_germain: return "sg";
    case ConstellationKind::Tag::triplet: return "triplet";
    case ConstellationKind::Tag::quadruplet: return "quad";
    case ConstellationKind::Tag::general:
      return "general:" + std::to_string(kind.gen_s) + ":" + std::to_string(kind.gen_t);
  }
  throw std::invalid_argument("unknown constellation tag");
}

std::vector<SievePattern> patterns_for(const ConstellationKind& kind) {
  using K = ConstellationKind::Tag;
  switch (kind.tag) {
    case K::twin:
    case K::gap: {
      const auto d = static_cast<int64_t>(kind.gap_d);
      return {make_pattern(kind_name(kind),
                           {WitnessRule::additive(d), WitnessRule::additive(-d)}, 2 + kind.gap_d,
                           "centers m with m-d and m+d prime")};
    }
    case K::sophie_germain:
      return {make_pattern("sg", {WitnessRule::scaled(2), WitnessRule::additive(1)}, 4,
                           "m = 2q with q and 2q+1 prime")};
    case K::triplet:
      return {make_pattern("triplet_a",
                           {WitnessRule::additive(1), WitnessRule::additive(3),
                            WitnessRule::additive(-3)},
                           5, "centers of (p, p+4, p+6)"),
              make_pattern("triplet_b",
                           {WitnessRule::additive(-1), WitnessRule::additive(3),
                            WitnessRule::additive(-3)},
                           5, "centers of (p, p+2, p+6)")};
    case K::quadruplet:
      return {make_pattern("quad",
                           {WitnessRule::additive(2), WitnessRule::additive(-2),
                            WitnessRule::additive(4), WitnessRule::additive(-4)},
                           6, "centers of (p, p+2, p+6, p+8)")};
    case K::general: {
      const int64_t t = kind.gen_t;
      const uint64_t start_wit = t < 0 ? static_cast<uint64_t>(2 - t) : 2;
      if (kind.gen_s == 1)
        return {make_pattern(kind_name(kind), {WitnessRule::additive(t)}, std::max<uint64_t>(2, start_wit),
                             "m with m+t prime; pairs are the prime survivors")};
      return {make_pattern(kind_name(kind),
                           {WitnessRule::scaled(kind.gen_s), WitnessRule::additive(t)},
                           std::max(2 * kind.gen_s, start_wit), "m = s*q with q and s*q+t prime")};
    }
  }
  throw std::invalid_argument("unknown constellation tag");
}

namespace {

uint64_t sieve_bound_for(const ConstellationKind& kind, uint64_t x) {
  using K = ConstellationKind::Tag;
  switch (kind.tag) {
    case K::sophie_germain:
      if (x > (uint64_t{1} << 49)) throw std::out_of_range("x too large");
      return 2 * x;
    case K::general:
      if (x > (uint64_t{1} << 49) / kind.gen_s) throw std::out_of_range("x too large");
      return kind.gen_s * x;
    default:
      return x;
  }
}

}  // namespace

ConstellationRun run_constellation(const ConstellationKind& kind, uint64_t x_max,
                                   const PrimeTable& table, unsigned threads) {
  ConstellationRun run;
  run.kind = kind;
  run.x_max = x_max;
  const uint64_t bound = sieve_bound_for(kind, x_max);
  for (const auto& pattern : patterns_for(kind)) {
    SurvivorSet set = run_sieve(pattern, bound, table, threads);
    std::vector<uint64_t> values;
    using K = ConstellationKind::Tag;
    if (kind.tag == K::sophie_germain) {
      values.reserve(set.survivors.size());
      for (uint64_t m : set.survivors) values.push_back(m / 2);
    } else if (kind.tag == K::general && kind.gen_s >= 2) {
      values.reserve(set.survivors.size());
      for (uint64_t m : set.survivors) values.push_back(m / kind.gen_s);
    } else if (kind.tag == K::general) {  // s == 1: keep the prime survivors
      for (uint64_t m : set.survivors)
        if (table.is_prime(m)) values.push_back(m);
    } else {
      values = set.survivors;
    }
    run.sets.push_back(std::move(set));
    run.count_values.push_back(std::move(values));
  }
  return run;
}

uint64_t count_at(const ConstellationRun& run, uint64_t x) {
  if (x > run.x_max) throw std::out_of_range("count_at: x beyond the sieved range");
  uint64_t total = 0;
  for (const auto& values : run.count_values) {
    total += static_cast<uint64_t>(
        std::upper_bound(values.begin(), values.end(), x) - values.begin());
  }
  return total;
}

uint64_t count_constellations(const ConstellationKind& kind, uint64_t x, const PrimeTable& table,
                              unsigned threads) {
  return count_at(run_constellation(kind, x, table, threads), x);
}

namespace {

std::vector<uint64_t> checked_members(const std::vector<int64_t>& offsets, uint64_t center,
                                      const PrimeTable& table) {
  std::vector<uint64_t> members;
  for (int64_t off : offsets) {
    const int64_t v = static_cast<int64_t>(center) + off;
    if (v < 2 || !table.is_prime(static_cast<uint64_t>(v))) return {};
    members.push_back(static_cast<uint64_t>(v));
  }
  return members;
}

}  // namespace

std::vector<uint64_t> members_of(const ConstellationKind& kind, uint64_t center,
                                 const PrimeTable& table) {
  using K = ConstellationKind::Tag;
  std::vector<uint64_t> members;
  switch (kind.tag) {
    case K::twin:
    case K::gap: {
      const auto d = static_cast<int64_t>(kind.gap_d);
      members = checked_members({-d, d}, center, table);
      break;
    }
    case K::sophie_germain:
      if (center % 2 == 0 && center >= 4 && table.is_prime(center / 2) &&
          table.is_prime(center + 1))
        members = {center / 2, center + 1};
      break;
    case K::triplet:
      members = checked_members({-3, 1, 3}, center, table);      // form A
      if (members.empty()) members = checked_members({-3, -1, 3}, center, table);  // form B
      break;
    case K::quadruplet:
      members = checked_members({-4, -2, 2, 4}, center, table);
      break;
    case K::general:
      if (center % kind.gen_s == 0 && center / kind.gen_s >= 2 &&
          table.is_prime(center / kind.gen_s)) {
        const int64_t wit = static_cast<int64_t>(center) + kind.gen_t;
        if (wit >= 2 && table.is_prime(static_cast<uint64_t>(wit)))
          members = {center / kind.gen_s, static_cast<uint64_t>(wit)};
      }
      break;
  }
  if (members.empty())
    throw std::invalid_argument("members_of: " + std::to_string(center) + " is not a " +
                                kind_name(kind) + " center");
  return members;
}

}  // namespace cnsieve
