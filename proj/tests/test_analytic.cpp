#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "cnsieve/analytic.hpp"
#include "cnsieve/constellations.hpp"
#include "cnsieve/kernels/kernels.hpp"
#include "cnsieve/prime_table.hpp"

using cnsieve::ConstantBundle;
using cnsieve::ConstellationKind;
using cnsieve::PredictionMode;
using cnsieve::PrimeTable;
using cnsieve::Rational;
using cnsieve::TailBounded;

namespace {

// Shared across cases; large enough for every cutoff used here.
PrimeTable& shared_table() {
  static PrimeTable table = cnsieve::build_prime_table(2000010);
  return table;
}

}  // namespace

TEST_CASE("euler gamma constant agrees with the harmonic-sum limit") {
  // H(n) - log(n) -> gamma. Kahan summation keeps the 1e8-term sum accurate
  // enough to resolve the constant to ~5e-9.
  const uint64_t n = 100000000;
  double sum = 0.0;
  double carry = 0.0;
  for (uint64_t i = 1; i <= n; ++i) {
    const double term = 1.0 / static_cast<double>(i) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  const double estimate = sum - std::log(static_cast<double>(n));
  // remaining bias of H(n) - log n is 1/(2n) + O(1/n^2)
  const double debiased = estimate - 1.0 / (2.0 * static_cast<double>(n));
  CHECK(std::fabs(debiased - cnsieve::kEulerGamma) < 1e-8);
}

TEST_CASE("euler_totient") {
  CHECK(cnsieve::euler_totient(1) == 1);
  CHECK(cnsieve::euler_totient(2) == 1);
  CHECK(cnsieve::euler_totient(4) == 2);
  CHECK(cnsieve::euler_totient(12) == 4);
  CHECK(cnsieve::euler_totient(360) == 96);
  CHECK(cnsieve::euler_totient(9973) == 9972);
  CHECK_THROWS_AS(cnsieve::euler_totient(0), std::invalid_argument);
}

TEST_CASE("log_power_integral reproduces high-precision reference values") {
  // reference values computed with an independent arbitrary-precision library
  CHECK(cnsieve::log_power_integral(1000000.0, 1) ==
        doctest::Approx(78626.5039957).epsilon(1e-8));
  CHECK(cnsieve::log_power_integral(10000.0, 2) ==
        doctest::Approx(162.241237443).epsilon(1e-8));
  CHECK(cnsieve::log_power_integral(10000000.0, 2) ==
        doctest::Approx(44499.5568417).epsilon(1e-8));
  CHECK(cnsieve::log_power_integral(10000000.0, 3) ==
        doctest::Approx(3005.76825801).epsilon(1e-8));
  CHECK(cnsieve::log_power_integral(10000000.0, 4) ==
        doctest::Approx(207.879715955).epsilon(1e-8));
  CHECK(cnsieve::log_power_integral(2.0, 1) == 0.0);
  CHECK_THROWS_AS(cnsieve::log_power_integral(1.5, 1), std::domain_error);
  CHECK_THROWS_AS(cnsieve::log_power_integral(100.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(cnsieve::log_power_integral(100.0, 17), std::invalid_argument);
}

TEST_CASE("dirichlet_estimate tracks the real residue-class count") {
  // pi_{1 mod 4}(10^6) = 39175
  const double estimate = cnsieve::dirichlet_estimate(1, 4, 1000000.0);
  CHECK(39175.0 / estimate == doctest::Approx(0.99962).epsilon(1e-4));
  // phi(b) splits the estimate evenly: b = 3 and b = 4 agree (phi = 2 each)
  CHECK(cnsieve::dirichlet_estimate(2, 3, 1000000.0) == estimate);
  CHECK_THROWS_AS(cnsieve::dirichlet_estimate(2, 4, 1000000.0), std::invalid_argument);
  CHECK_THROWS_AS(cnsieve::dirichlet_estimate(1, 0, 1000000.0), std::invalid_argument);
  CHECK_THROWS_AS(cnsieve::dirichlet_estimate(1, 4, 3.0), std::domain_error);
}

TEST_CASE("mertens cutoff and product") {
  CHECK(cnsieve::mertens_cutoff(4.0) == doctest::Approx(2.1778717011864).epsilon(1e-10));
  CHECK(cnsieve::mertens_cutoff(100000000.0) == doctest::Approx(31022.434).epsilon(1e-6));
  CHECK_THROWS_AS(cnsieve::mertens_cutoff(3.9), std::domain_error);

  CHECK(cnsieve::mertens_product(10000.0, shared_table()) ==
        doctest::Approx(0.107242301175).epsilon(1e-9));
  // the cutoff X(x) = x^(e^-gamma) makes the bare product mimic 1/log x
  CHECK(cnsieve::mertens_product(10000.0, shared_table()) * std::log(10000.0) ==
        doctest::Approx(0.987738).epsilon(1e-5));

  const PrimeTable tiny = cnsieve::build_prime_table(100);
  CHECK_THROWS_AS(cnsieve::mertens_product(100000000.0, tiny), std::out_of_range);
}

TEST_CASE("calibration constant") {
  // N = 100: (25 - 4 + 1) / (100 * (1/2)(2/3)(4/5)(6/7)) = 0.9625 exactly
  CHECK(cnsieve::calibration_constant(100, shared_table()) ==
        doctest::Approx(0.9625).epsilon(1e-12));
  CHECK(cnsieve::calibration_constant(10000, shared_table()) ==
        doctest::Approx(1.001519).epsilon(1e-5));
  CHECK(cnsieve::calibration_constant(1000000, shared_table()) ==
        doctest::Approx(0.967464).epsilon(1e-5));
  CHECK_THROWS_AS(cnsieve::calibration_constant(15, shared_table()), std::invalid_argument);
}

TEST_CASE("meissel-mertens partial sums with rigorous tails") {
  const TailBounded at100 = cnsieve::meissel_mertens(100, shared_table());
  const TailBounded at1000 = cnsieve::meissel_mertens(1000, shared_table());
  const TailBounded at1e6 = cnsieve::meissel_mertens(1000000, shared_table());
  CHECK(at100.value == doctest::Approx(0.262409928).epsilon(1e-8));
  CHECK(at1000.value == doctest::Approx(0.261560730).epsilon(1e-8));
  CHECK(at1e6.value == doctest::Approx(0.261497247).epsilon(1e-8));
  // a deeper partial sum must sit inside the shallower sum's tail bound
  CHECK(std::fabs(at1000.value - at100.value) <= at100.tail_bound);
  CHECK(std::fabs(at1e6.value - at1000.value) <= at1000.tail_bound);
  CHECK(at100.tail_bound == doctest::Approx(1.0 / 198.0));
  CHECK_THROWS_AS(cnsieve::meissel_mertens(99, shared_table()), std::invalid_argument);
}

TEST_CASE("twin-pair product constant at increasing cutoffs") {
  const TailBounded at1e5 = cnsieve::hl_pair_constant(100000, shared_table());
  const TailBounded at2e5 = cnsieve::hl_pair_constant(200000, shared_table());
  const TailBounded at1e6 = cnsieve::hl_pair_constant(1000000, shared_table());
  CHECK(at1e5.value == doctest::Approx(1.320324690933).epsilon(1e-9));
  CHECK(at2e5.value == doctest::Approx(1.320324133643).epsilon(1e-9));
  CHECK(at1e6.value == doctest::Approx(1.320323721180).epsilon(1e-9));
  // convergence respects the claimed tail bound
  CHECK(std::fabs(at2e5.value - at1e5.value) <= at1e5.tail_bound);
  CHECK(std::fabs(at1e6.value - at2e5.value) <= at2e5.tail_bound);
  CHECK(at2e5.tail_bound < at1e5.tail_bound);
  CHECK_THROWS_AS(cnsieve::hl_pair_constant(99999, shared_table()), std::invalid_argument);
}

TEST_CASE("polignac factors are exact rationals") {
  CHECK(cnsieve::polignac_factor(1) == Rational{1, 1});
  CHECK(cnsieve::polignac_factor(2) == Rational{1, 1});
  CHECK(cnsieve::polignac_factor(3) == Rational{2, 1});
  CHECK(cnsieve::polignac_factor(6) == Rational{2, 1});
  CHECK(cnsieve::polignac_factor(5) == Rational{4, 3});
  CHECK(cnsieve::polignac_factor(15) == Rational{8, 3});
  CHECK(cnsieve::polignac_factor(105) == Rational{16, 5});
  // only the set of odd prime divisors matters
  for (uint64_t d : {uint64_t{3}, uint64_t{5}, uint64_t{9}, uint64_t{21}}) {
    CHECK(cnsieve::polignac_factor(d) == cnsieve::polignac_factor(2 * d));
  }
  CHECK_THROWS_AS(cnsieve::polignac_factor(0), std::invalid_argument);
}

TEST_CASE("constellation constants") {
  const TailBounded triplet =
      cnsieve::constellation_constant(ConstellationKind::triplet(), 1000000, shared_table());
  const TailBounded quad = cnsieve::constellation_constant(ConstellationKind::quadruplet(),
                                                           1000000, shared_table());
  // limits 5.71649719... and 4.15118086...; at P = 1e6 the products are
  // within ~6e-6 of them
  CHECK(triplet.value == doctest::Approx(5.716497).epsilon(2e-6));
  CHECK(quad.value == doctest::Approx(4.151181).epsilon(3e-6));

  // gap constants are the twin constant times the exact polignac factor
  const TailBounded twin =
      cnsieve::constellation_constant(ConstellationKind::twin(), 100000, shared_table());
  const TailBounded gap3 =
      cnsieve::constellation_constant(ConstellationKind::gap(3), 100000, shared_table());
  CHECK(gap3.value == doctest::Approx(2.0 * twin.value).epsilon(1e-15));

  CHECK_THROWS_AS(cnsieve::constellation_constant(ConstellationKind::sophie_germain(), 1000000,
                                                  shared_table()),
                  std::invalid_argument);
  CHECK_THROWS_AS(cnsieve::constellation_constant(ConstellationKind::general(3, 2), 1000000,
                                                  shared_table()),
                  std::invalid_argument);
}

TEST_CASE("single-prime identity behind the pair product") {
  // (1 - 2/p) / (1 - 1/p)^2 at p = 3 is (1/3) / (4/9) = 3/4
  const double p = 3.0;
  CHECK(cnsieve::kernels::euler_product_r(&p, 1, 2) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("sieve densities through the first k primes") {
  CHECK(cnsieve::constellation_density(ConstellationKind::twin(), 4, shared_table()) ==
        doctest::Approx(1.0 / 14.0).epsilon(1e-15));
  CHECK(cnsieve::constellation_density(ConstellationKind::gap(3), 4, shared_table()) ==
        doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(cnsieve::constellation_density(ConstellationKind::triplet(), 3, shared_table()) ==
        doctest::Approx(2.0 / 15.0).epsilon(1e-15));
  CHECK(cnsieve::constellation_density(ConstellationKind::quadruplet(), 3, shared_table()) ==
        doctest::Approx(1.0 / 30.0).epsilon(1e-15));
  CHECK_THROWS_AS(cnsieve::constellation_density(ConstellationKind::triplet(), 2,
                                                 shared_table()),
                  std::invalid_argument);
  CHECK_THROWS_AS(cnsieve::constellation_density(ConstellationKind::sophie_germain(), 4,
                                                 shared_table()),
                  std::invalid_argument);
}

TEST_CASE("sophie germain density factorizes into two mertens products") {
  for (double x : {10000.0, 1000000.0}) {
    const double expected = cnsieve::mertens_product(x, shared_table()) *
                            cnsieve::mertens_product(2.0 * x, shared_table());
    CHECK(cnsieve::sophie_germain_density(x, shared_table()) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cnsieve::sophie_germain_density(3.0, shared_table()), std::domain_error);
}

TEST_CASE("constant bundle and predictions") {
  const ConstantBundle bundle = ConstantBundle::compute(1000000, shared_table());
  CHECK(bundle.cutoff_P == 1000000);
  CHECK(bundle.euler_gamma == cnsieve::kEulerGamma);
  CHECK(bundle.twin_product.value == doctest::Approx(1.320323721180).epsilon(1e-9));
  CHECK(bundle.meissel_mertens.value == doctest::Approx(0.261497247).epsilon(1e-8));

  // the twin expansion at 10^7, pinned against an independent evaluation
  const double twin_paper = cnsieve::predict(ConstellationKind::twin(), 10000000.0,
                                             PredictionMode::paper_expansion, bundle);
  CHECK(twin_paper == doctest::Approx(57128.36).epsilon(1e-6));

  // gap predictions scale by the polignac factor exactly
  const double gap3_paper = cnsieve::predict(ConstellationKind::gap(3), 10000000.0,
                                             PredictionMode::paper_expansion, bundle);
  CHECK(gap3_paper == doctest::Approx(2.0 * twin_paper).epsilon(1e-15));

  // the germain correction is log x / log 2x on top of the pair prediction
  const double sg_paper = cnsieve::predict(ConstellationKind::sophie_germain(), 10000000.0,
                                           PredictionMode::paper_expansion, bundle);
  const double L = std::log(10000000.0);
  CHECK(sg_paper == doctest::Approx(twin_paper * L / std::log(20000000.0)).epsilon(1e-14));

  // integral mode = same constant against the integral
  const double twin_integral = cnsieve::predict(ConstellationKind::twin(), 10000000.0,
                                                PredictionMode::integral, bundle);
  CHECK(twin_integral == doctest::Approx(bundle.twin_product.value *
                                         cnsieve::log_power_integral(10000000.0, 2))
                             .epsilon(1e-12));
  // the two-term expansion undershoots the integral at this range
  CHECK(twin_paper < twin_integral);

  CHECK_THROWS_AS(cnsieve::predict(ConstellationKind::general(3, 2), 10000000.0,
                                   PredictionMode::paper_expansion, bundle),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cnsieve::predict(ConstellationKind::twin(), 3.0, PredictionMode::paper_expansion, bundle),
      std::domain_error);
}

TEST_CASE("delta-twin estimate") {
  const ConstantBundle bundle = ConstantBundle::compute(100000, shared_table());
  const double c2 = 0.5 * bundle.twin_product.value;
  const double at100 = cnsieve::delta_twin_estimate(100, bundle);
  CHECK(at100 == doctest::Approx(c2 * 201.0 / (2.0 * std::log(100.0) * std::log(100.0)))
                     .epsilon(1e-15));
  // grows roughly linearly: doubling n roughly doubles the interval width
  CHECK(cnsieve::delta_twin_estimate(200, bundle) > 1.5 * at100);
  CHECK_THROWS_AS(cnsieve::delta_twin_estimate(1, bundle), std::invalid_argument);
}

TEST_CASE("brun partial sums") {
  CHECK(cnsieve::brun_partial_sum(4, shared_table()) == 0.0);
  CHECK(cnsieve::brun_partial_sum(5, shared_table()) ==
        doctest::Approx(1.0 / 3.0 + 1.0 / 5.0).epsilon(1e-15));
  CHECK(cnsieve::brun_partial_sum(7, shared_table()) ==
        doctest::Approx(0.8761904762).epsilon(1e-9));
  CHECK(cnsieve::brun_partial_sum(10000, shared_table()) ==
        doctest::Approx(1.6168935574).epsilon(1e-9));
  // monotone nondecreasing in x
  CHECK(cnsieve::brun_partial_sum(100000, shared_table()) >
        cnsieve::brun_partial_sum(10000, shared_table()));
}
