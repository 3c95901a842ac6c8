#pragma once

#include <cstdint>

#include "cnsieve/constellations.hpp"
#include "cnsieve/prime_table.hpp"

// Prediction-side machinery: truncated Euler products with rigorous tail
// bounds, the Mertens cutoff X(x) = x^(e^-gamma), constellation constants,
// and the expansion / integral prediction formulas the comparison reports
// evaluate.
//
// Tail bounds. For f_r(p) = (1 - r/p) / (1 - 1/p)^r,
//   log f_r(p) = -sum_{k>=2} (r^k - r) / (k p^k),  |log f_r(p)| <= r^2 / p^2
// once p >= 2r, so the log of the neglected tail past P is at most
// sum_{n>P} r^2/n^2 <= r^2/P, giving |limit - partial| <= partial*(e^(r^2/P)-1).
// For the Meissel-Mertens sum the neglected terms are sum_{k>=2} 1/(k p^k)
// <= 1/(2p(p-1)), which telescopes over n > P to the reported 1/(2(P-1)).

namespace cnsieve {

inline constexpr double kEulerGamma = 0.57721566490153286;

struct TailBounded {
  double value = 0.0;
  double tail_bound = 0.0;  // |true limit - value| is at most this
};

struct Rational {
  uint64_t num = 1;
  uint64_t den = 1;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

uint64_t euler_totient(uint64_t b);

// Integral of dt / log(t)^k over [2, x], adaptive Simpson, relative error
// target 1e-9. x >= 2, 1 <= k <= 16.
double log_power_integral(double x, unsigned k);

// Three-term expansion x/log x + x/log^2 x + 2x/log^3 x, split evenly across
// the phi(b) coprime residue classes. gcd(a, b) must be 1; x >= 4.
double dirichlet_estimate(uint64_t a, uint64_t b, double x);

// X(x) = x^(e^-gamma); x >= 4 so that X(x) >= 2.
double mertens_cutoff(double x);

// Product of (1 - 1/p) over p <= X(x); the table must cover X(x).
double mertens_product(double x, const PrimeTable& table);

// (pi(N) - pi(sqrt N) + 1) / (N * prod_{p <= sqrt N} (1 - 1/p)); N >= 16.
double calibration_constant(uint64_t N, const PrimeTable& table);

// gamma + sum_{p <= P} (log(1 - 1/p) + 1/p); P >= 100.
TailBounded meissel_mertens(uint64_t P, const PrimeTable& table);

// 2 * prod_{3 <= p <= P} (1 - 2/p) / (1 - 1/p)^2, the twin prefactor 2*C2;
// P >= 1e5.
TailBounded hl_pair_constant(uint64_t P, const PrimeTable& table);

// prod over odd primes p | d of (p - 1) / (p - 2), exact.
Rational polignac_factor(uint64_t d);

// Leading constant for a kind at cutoff P:
//   twin/gap(d)  hl_pair_constant(P) * polignac_factor(d)
//   triplet      9    * prod_{5 <= p <= P} (1 - 3/p) / (1 - 1/p)^3
//   quadruplet   27/2 * prod_{5 <= p <= P} (1 - 4/p) / (1 - 1/p)^4
TailBounded constellation_constant(const ConstellationKind& kind, uint64_t P,
                                   const PrimeTable& table);

// Printed sieve density through the first k primes:
//   twin/gap(d)  1/2 * prod_{r=2..k} (1 - 2/p_r), with (1 - 1/p_r) at p_r | d
//   triplet      2 * (1/2)(1/3) * prod_{r=3..k} (1 - 3/p_r), k >= 3
//   quadruplet   (1/2)(1/3) * prod_{r=3..k} (1 - 4/p_r), k >= 3
double constellation_density(const ConstellationKind& kind, uint64_t k, const PrimeTable& table);

// (1/4) * prod_{3 <= p <= X(x)} (1 - 1/p) * prod_{3 <= p <= X(2x)} (1 - 1/p).
double sophie_germain_density(double x, const PrimeTable& table);

enum class PredictionMode { paper_expansion, integral };

struct ConstantBundle {
  double euler_gamma = kEulerGamma;
  TailBounded twin_product;        // 2*C2
  TailBounded triplet_constant;
  TailBounded quadruplet_constant;
  TailBounded meissel_mertens;
  uint64_t cutoff_P = 0;

  static ConstantBundle compute(uint64_t P, const PrimeTable& table);
};

// Predicted count at x for twin/gap/sg/triplet/quadruplet kinds; x >= 4.
//   paper_expansion: pairs    C * (x/log^2 x + 2x/log^3 x)
//                    triplet  C3 * x/log^3 x,  quadruplet C4 * x/log^4 x
//                    sg       twin prediction * log x / log 2x
//   integral:        the same constants against integral of dt/log^k t.
double predict(const ConstellationKind& kind, double x, PredictionMode mode,
               const ConstantBundle& constants);

// Expected twins between n^2 and (n+1)^2: C2 * (2n + 1) / (2 log^2 n); n >= 2.
double delta_twin_estimate(uint64_t n, const ConstantBundle& constants);

// Sum of 1/p + 1/(p+2) over twin pairs with p + 2 <= x.
double brun_partial_sum(uint64_t x, const PrimeTable& table);

}  // namespace cnsieve
