#include "cnsieve/analytic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cnsieve/kernels/kernels.hpp"

namespace cnsieve {
namespace {

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

double pow_int(double base, unsigned k) {
  double out = 1.0;
  for (unsigned i = 0; i < k; ++i) out *= base;
  return out;
}

// Primes in [min_p, x] as doubles, ready for the reduction kernels.
std::vector<double> prime_doubles(const PrimeTable& table, uint64_t x, uint64_t min_p) {
  if (table.limit() < x) {
    throw std::out_of_range("prime table too small for requested cutoff");
  }
  std::vector<uint64_t> primes = table.primes_up_to(x);
  std::vector<double> out;
  out.reserve(primes.size());
  for (uint64_t p : primes) {
    if (p >= min_p) out.push_back(static_cast<double>(p));
  }
  return out;
}

struct LogPowIntegrand {
  unsigned k;
  double operator()(double t) const { return 1.0 / pow_int(std::log(t), k); }
};

// One level of adaptive Simpson with Richardson correction. eps is an
// absolute budget for this subinterval and halves on each split, so the
// total error over the whole call stays near the initial eps.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double rel_tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double s0 = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // The single-panel estimate can be off by orders of magnitude for integrands
  // peaked at the left edge, so it is only used to price a rough first pass;
  // the result of that pass sets the real absolute budget.
  const double rough_eps = 1e-6 * std::max(std::fabs(s0), 1.0);
  const double rough = adaptive_simpson(f, a, b, fa, fm, fb, s0, rough_eps, 30);
  const double eps = rel_tol * std::max(std::fabs(rough), 1e-12);
  return adaptive_simpson(f, a, b, fa, fm, fb, s0, eps, 48);
}

double pair_leading_constant(const ConstellationKind& kind, const ConstantBundle& constants) {
  const uint64_t d = kind.tag == ConstellationKind::Tag::gap ? kind.gap_d : 1;
  return constants.twin_product.value * polignac_factor(d).to_double();
}

}  // namespace

uint64_t euler_totient(uint64_t b) {
  if (b == 0) throw std::invalid_argument("euler_totient: b must be positive");
  uint64_t phi = 1;
  uint64_t m = b;
  for (uint64_t q = 2; q * q <= m; q += (q == 2 ? 1 : 2)) {
    if (m % q != 0) continue;
    m /= q;
    uint64_t contrib = q - 1;
    while (m % q == 0) {
      m /= q;
      contrib *= q;
    }
    phi *= contrib;
  }
  if (m > 1) phi *= m - 1;
  return phi;
}

double log_power_integral(double x, unsigned k) {
  if (k < 1 || k > 16) throw std::invalid_argument("log_power_integral: k must be in [1, 16]");
  if (!(x >= 2.0)) throw std::domain_error("log_power_integral: x must be >= 2");
  if (x == 2.0) return 0.0;
  return integrate(LogPowIntegrand{k}, 2.0, x, 1e-9);
}

double dirichlet_estimate(uint64_t a, uint64_t b, double x) {
  if (b == 0 || std::gcd(a, b) != 1) {
    throw std::invalid_argument("dirichlet_estimate: residue and modulus must be coprime");
  }
  if (!(x >= 4.0)) throw std::domain_error("dirichlet_estimate: x must be >= 4");
  const double L = std::log(x);
  const double all_classes = x / L + x / (L * L) + 2.0 * x / (L * L * L);
  return all_classes / static_cast<double>(euler_totient(b));
}

double mertens_cutoff(double x) {
  if (!(x >= 4.0)) throw std::domain_error("mertens_cutoff: x must be >= 4");
  return std::pow(x, std::exp(-kEulerGamma));
}

double mertens_product(double x, const PrimeTable& table) {
  const auto cutoff = static_cast<uint64_t>(mertens_cutoff(x));
  std::vector<double> primes = prime_doubles(table, cutoff, 2);
  return kernels::product_one_minus_r_over_p(primes.data(), primes.size(), 1);
}

double calibration_constant(uint64_t N, const PrimeTable& table) {
  if (N < 16) throw std::invalid_argument("calibration_constant: N must be >= 16");
  if (table.limit() < N) throw std::out_of_range("calibration_constant: table smaller than N");
  const uint64_t root = isqrt_u64(N);
  std::vector<double> primes = prime_doubles(table, root, 2);
  const double sieve_density =
      kernels::product_one_minus_r_over_p(primes.data(), primes.size(), 1);
  const double survivors =
      static_cast<double>(table.prime_count(N) - table.prime_count(root) + 1);
  return survivors / (static_cast<double>(N) * sieve_density);
}

TailBounded meissel_mertens(uint64_t P, const PrimeTable& table) {
  if (P < 100) throw std::invalid_argument("meissel_mertens: cutoff must be >= 100");
  std::vector<double> primes = prime_doubles(table, P, 2);
  TailBounded out;
  out.value = kEulerGamma + kernels::mertens_log_sum(primes.data(), primes.size());
  // sum_{p > P} sum_{k >= 2} 1/(k p^k) <= sum_{n > P} 1/(2 n (n - 1)), which
  // telescopes to 1/(2 P); 1/(2 (P - 1)) also covers the sign convention.
  out.tail_bound = 1.0 / (2.0 * static_cast<double>(P - 1));
  return out;
}

TailBounded hl_pair_constant(uint64_t P, const PrimeTable& table) {
  if (P < 100000) throw std::invalid_argument("hl_pair_constant: cutoff must be >= 1e5");
  std::vector<double> primes = prime_doubles(table, P, 3);
  TailBounded out;
  out.value = 2.0 * kernels::euler_product_r(primes.data(), primes.size(), 2);
  out.tail_bound = out.value * std::expm1(4.0 / static_cast<double>(P));
  return out;
}

Rational polignac_factor(uint64_t d) {
  if (d == 0) throw std::invalid_argument("polignac_factor: d must be >= 1");
  uint64_t m = d;
  while (m % 2 == 0) m /= 2;
  Rational out;
  for (uint64_t q = 3; q * q <= m; q += 2) {
    if (m % q != 0) continue;
    while (m % q == 0) m /= q;
    out.num *= q - 1;
    out.den *= q - 2;
  }
  if (m > 1) {
    out.num *= m - 1;
    out.den *= m - 2;
  }
  const uint64_t g = std::gcd(out.num, out.den);
  out.num /= g;
  out.den /= g;
  return out;
}

TailBounded constellation_constant(const ConstellationKind& kind, uint64_t P,
                                   const PrimeTable& table) {
  switch (kind.tag) {
    case ConstellationKind::Tag::twin:
    case ConstellationKind::Tag::gap: {
      TailBounded out = hl_pair_constant(P, table);
      const double factor = polignac_factor(kind.gap_d).to_double();
      out.value *= factor;
      out.tail_bound *= factor;
      return out;
    }
    case ConstellationKind::Tag::triplet: {
      if (P < 100000) throw std::invalid_argument("constellation_constant: cutoff must be >= 1e5");
      std::vector<double> primes = prime_doubles(table, P, 5);
      TailBounded out;
      out.value = 9.0 * kernels::euler_product_r(primes.data(), primes.size(), 3);
      out.tail_bound = out.value * std::expm1(9.0 / static_cast<double>(P));
      return out;
    }
    case ConstellationKind::Tag::quadruplet: {
      if (P < 100000) throw std::invalid_argument("constellation_constant: cutoff must be >= 1e5");
      std::vector<double> primes = prime_doubles(table, P, 5);
      TailBounded out;
      out.value = 13.5 * kernels::euler_product_r(primes.data(), primes.size(), 4);
      out.tail_bound = out.value * std::expm1(16.0 / static_cast<double>(P));
      return out;
    }
    default:
      throw std::invalid_argument("constellation_constant: no product constant for this kind");
  }
}

double constellation_density(const ConstellationKind& kind, uint64_t k, const PrimeTable& table) {
  switch (kind.tag) {
    case ConstellationKind::Tag::twin:
    case ConstellationKind::Tag::gap: {
      if (k < 1) throw std::invalid_argument("constellation_density: k must be >= 1");
      double density = 0.5;
      for (uint64_t r = 2; r <= k; ++r) {
        const uint64_t p = table.nth_prime(r);
        // A prime dividing d cannot separate the two pattern residues, so it
        // removes one residue class instead of two.
        const double cut = kind.gap_d % p == 0 ? 1.0 : 2.0;
        density *= 1.0 - cut / static_cast<double>(p);
      }
      return density;
    }
    case ConstellationKind::Tag::triplet:
    case ConstellationKind::Tag::quadruplet: {
      if (k < 3) throw std::invalid_argument("constellation_density: k must be >= 3");
      const double forms = kind.tag == ConstellationKind::Tag::triplet ? 2.0 : 1.0;
      const double removed = kind.tag == ConstellationKind::Tag::triplet ? 3.0 : 4.0;
      double density = forms * 0.5 * (1.0 / 3.0);
      for (uint64_t r = 3; r <= k; ++r) {
        density *= 1.0 - removed / static_cast<double>(table.nth_prime(r));
      }
      return density;
    }
    default:
      throw std::invalid_argument("constellation_density: no closed density for this kind");
  }
}

double sophie_germain_density(double x, const PrimeTable& table) {
  if (!(x >= 4.0)) throw std::domain_error("sophie_germain_density: x must be >= 4");
  const auto cutoff_x = static_cast<uint64_t>(mertens_cutoff(x));
  const auto cutoff_2x = static_cast<uint64_t>(mertens_cutoff(2.0 * x));
  std::vector<double> first = prime_doubles(table, cutoff_x, 3);
  std::vector<double> second = prime_doubles(table, cutoff_2x, 3);
  return 0.25 * kernels::product_one_minus_r_over_p(first.data(), first.size(), 1) *
         kernels::product_one_minus_r_over_p(second.data(), second.size(), 1);
}

ConstantBundle ConstantBundle::compute(uint64_t P, const PrimeTable& table) {
  ConstantBundle bundle;
  bundle.twin_product = hl_pair_constant(P, table);
  bundle.triplet_constant = constellation_constant(ConstellationKind::triplet(), P, table);
  bundle.quadruplet_constant = constellation_constant(ConstellationKind::quadruplet(), P, table);
  bundle.meissel_mertens = cnsieve::meissel_mertens(P, table);
  bundle.cutoff_P = P;
  return bundle;
}

double predict(const ConstellationKind& kind, double x, PredictionMode mode,
               const ConstantBundle& constants) {
  if (!(x >= 4.0)) throw std::domain_error("predict: x must be >= 4");
  const double L = std::log(x);
  switch (kind.tag) {
    case ConstellationKind::Tag::twin:
    case ConstellationKind::Tag::gap: {
      const double c = pair_leading_constant(kind, constants);
      if (mode == PredictionMode::integral) return c * log_power_integral(x, 2);
      return c * (x / (L * L) + 2.0 * x / (L * L * L));
    }
    case ConstellationKind::Tag::sophie_germain: {
      const double c = constants.twin_product.value;
      const double pairs = mode == PredictionMode::integral
                               ? c * log_power_integral(x, 2)
                               : c * (x / (L * L) + 2.0 * x / (L * L * L));
      // A Germain pair (q, 2q + 1) is a twin-like pair whose second member
      // lives on the doubled scale, hence the log x / log 2x correction.
      return pairs * L / std::log(2.0 * x);
    }
    case ConstellationKind::Tag::triplet: {
      const double c = constants.triplet_constant.value;
      if (mode == PredictionMode::integral) return c * log_power_integral(x, 3);
      return c * x / (L * L * L);
    }
    case ConstellationKind::Tag::quadruplet: {
      const double c = constants.quadruplet_constant.value;
      if (mode == PredictionMode::integral) return c * log_power_integral(x, 4);
      return c * x / (L * L * L * L);
    }
    default:
      throw std::invalid_argument("predict: no prediction formula for this kind");
  }
}

double delta_twin_estimate(uint64_t n, const ConstantBundle& constants) {
  if (n < 2) throw std::invalid_argument("delta_twin_estimate: n must be >= 2");
  const double c2 = 0.5 * constants.twin_product.value;
  const double log_n = std::log(static_cast<double>(n));
  return c2 * static_cast<double>(2 * n + 1) / (2.0 * log_n * log_n);
}

double brun_partial_sum(uint64_t x, const PrimeTable& table) {
  if (table.limit() < x) throw std::out_of_range("brun_partial_sum: table smaller than x");
  if (x < 5) return 0.0;
  double sum = 0.0;
  for (uint64_t p : table.primes_up_to(x - 2)) {
    if (p < 3) continue;
    if (table.is_prime(p + 2)) {
      sum += 1.0 / static_cast<double>(p) + 1.0 / static_cast<double>(p + 2);
    }
  }
  return sum;
}

}  // namespace cnsieve
