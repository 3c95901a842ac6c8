#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cnsieve/constellations.hpp"
#include "cnsieve/prime_table.hpp"

using cnsieve::ConstellationKind;
using cnsieve::ConstellationRun;
using cnsieve::PrimeTable;

namespace {

PrimeTable& shared_table() {
  static PrimeTable table = cnsieve::build_prime_table(300010);
  return table;
}

}  // namespace

TEST_CASE("parse_kind accepts the catalog grammar") {
  CHECK(cnsieve::parse_kind("twin") == ConstellationKind::twin());
  CHECK(cnsieve::parse_kind("sg") == ConstellationKind::sophie_germain());
  CHECK(cnsieve::parse_kind("triplet") == ConstellationKind::triplet());
  CHECK(cnsieve::parse_kind("quad") == ConstellationKind::quadruplet());
  CHECK(cnsieve::parse_kind("gap:3") == ConstellationKind::gap(3));
  CHECK(cnsieve::parse_kind("general:3:2") == ConstellationKind::general(3, 2));
  CHECK(cnsieve::parse_kind("general:1:-4") == ConstellationKind::general(1, -4));
  // a gap of one point is the twin pattern
  CHECK(cnsieve::parse_kind("gap:1") == ConstellationKind::twin());
}

TEST_CASE("parse_kind rejects malformed or inconsistent descriptors") {
  for (const char* text : {"", "bogus", "gap", "gap:", "gap:0", "gap:x", "twin:2", "general",
                           "general:3", "general:3:", "general:0:2", "general:3:0",
                           "general:2:2", "general:3:3", "general:1:1", "general:1:3"}) {
    INFO("text = ", text);
    CHECK_THROWS_AS(cnsieve::parse_kind(text), std::invalid_argument);
  }
}

TEST_CASE("kind_name round trips canonical spellings") {
  for (const char* text : {"twin", "sg", "triplet", "quad", "gap:3", "gap:7", "general:3:2",
                           "general:1:-4", "general:2:5"}) {
    CHECK(cnsieve::kind_name(cnsieve::parse_kind(text)) == text);
  }
  CHECK(cnsieve::kind_name(ConstellationKind::gap(1)) == "twin");
}

TEST_CASE("counts match pinned empirical values") {
  // all cross-checked against an independent implementation before pinning
  CHECK(cnsieve::count_constellations(ConstellationKind::twin(), 1000, shared_table()) == 35);
  CHECK(cnsieve::count_constellations(ConstellationKind::twin(), 10000, shared_table()) == 205);
  CHECK(cnsieve::count_constellations(ConstellationKind::twin(), 100000, shared_table()) ==
        1224);
  CHECK(cnsieve::count_constellations(ConstellationKind::gap(2), 100000, shared_table()) ==
        1216);
  CHECK(cnsieve::count_constellations(ConstellationKind::gap(3), 100000, shared_table()) ==
        2447);
  CHECK(cnsieve::count_constellations(ConstellationKind::sophie_germain(), 10000,
                                      shared_table()) == 190);
  CHECK(cnsieve::count_constellations(ConstellationKind::sophie_germain(), 100000,
                                      shared_table()) == 1171);
  CHECK(cnsieve::count_constellations(ConstellationKind::triplet(), 100000, shared_table()) ==
        507);
  CHECK(cnsieve::count_constellations(ConstellationKind::quadruplet(), 100000,
                                      shared_table()) == 38);
  CHECK(cnsieve::count_constellations(ConstellationKind::general(3, 2), 100, shared_table()) ==
        15);
  CHECK(cnsieve::count_constellations(ConstellationKind::general(1, 2), 100, shared_table()) ==
        8);
}

TEST_CASE("triplet runs keep the two forms separate but count their union of positions") {
  const ConstellationRun run =
      cnsieve::run_constellation(ConstellationKind::triplet(), 100000, shared_table());
  REQUIRE(run.sets.size() == 2);
  REQUIRE(run.count_values.size() == 2);
  // form A = (p, p+4, p+6), form B = (p, p+2, p+6)
  CHECK(run.count_values[0].size() == 248);
  CHECK(run.count_values[1].size() == 259);
  CHECK(cnsieve::count_at(run, 100000) == 507);
}

TEST_CASE("count_at is a prefix count over the run") {
  const ConstellationRun run =
      cnsieve::run_constellation(ConstellationKind::twin(), 100000, shared_table());
  CHECK(cnsieve::count_at(run, 1000) == 35);
  CHECK(cnsieve::count_at(run, 10000) == 205);
  CHECK(cnsieve::count_at(run, 100000) == 1224);
  CHECK(cnsieve::count_at(run, 3) == 0);
  CHECK_THROWS_AS(cnsieve::count_at(run, 100001), std::out_of_range);
}

TEST_CASE("sophie germain counting is in q-space") {
  // The sieve runs to 2x so that every Germain prime q <= x is covered; the
  // positions reported are the q = m / 2 values themselves.
  const ConstellationRun run =
      cnsieve::run_constellation(ConstellationKind::sophie_germain(), 50, shared_table());
  REQUIRE(run.count_values.size() == 1);
  CHECK(run.count_values[0] == std::vector<uint64_t>{2, 3, 5, 11, 23, 29, 41});
  CHECK(cnsieve::count_at(run, 50) == 7);
}

TEST_CASE("general s=1 counts only prime survivors") {
  const ConstellationRun run =
      cnsieve::run_constellation(ConstellationKind::general(1, 2), 100, shared_table());
  REQUIRE(run.count_values.size() == 1);
  CHECK(run.count_values[0] == std::vector<uint64_t>{3, 5, 11, 17, 29, 41, 59, 71});
}

TEST_CASE("members_of certifies the advertised primes") {
  auto& table = shared_table();
  CHECK(cnsieve::members_of(ConstellationKind::twin(), 6, table) ==
        std::vector<uint64_t>{5, 7});
  CHECK(cnsieve::members_of(ConstellationKind::gap(3), 8, table) ==
        std::vector<uint64_t>{5, 11});
  CHECK(cnsieve::members_of(ConstellationKind::sophie_germain(), 4, table) ==
        std::vector<uint64_t>{2, 5});
  CHECK(cnsieve::members_of(ConstellationKind::sophie_germain(), 46, table) ==
        std::vector<uint64_t>{23, 47});
  // center 10 realizes form A, center 8 realizes form B
  CHECK(cnsieve::members_of(ConstellationKind::triplet(), 10, table) ==
        std::vector<uint64_t>{7, 11, 13});
  CHECK(cnsieve::members_of(ConstellationKind::triplet(), 8, table) ==
        std::vector<uint64_t>{5, 7, 11});
  CHECK(cnsieve::members_of(ConstellationKind::quadruplet(), 9, table) ==
        std::vector<uint64_t>{5, 7, 11, 13});
  CHECK(cnsieve::members_of(ConstellationKind::general(3, 2), 9, table) ==
        std::vector<uint64_t>{3, 11});

  CHECK_THROWS_AS(cnsieve::members_of(ConstellationKind::twin(), 8, table),
                  std::invalid_argument);
  CHECK_THROWS_AS(cnsieve::members_of(ConstellationKind::triplet(), 12, table),
                  std::invalid_argument);
}

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(ConstellationKind::gap(0), std::invalid_argument);
  CHECK_THROWS_AS(ConstellationKind::gap(2000000), std::invalid_argument);
  CHECK_THROWS_AS(ConstellationKind::general(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(ConstellationKind::general(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(ConstellationKind::general(2, 4), std::invalid_argument);  // gcd 2
  CHECK_THROWS_AS(ConstellationKind::general(3, 5), std::invalid_argument);  // odd product
}
