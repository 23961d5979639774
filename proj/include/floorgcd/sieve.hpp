#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "floorgcd/polynomial.hpp"
#include "floorgcd/scan.hpp"

namespace floorgcd {

// 6/pi^2, the coprimality density target.
inline constexpr double kZeta2Inverse = 0.60792710185402662866;

struct CountOptions {
  unsigned threads = 0;
  ScanOptions scan;
};

// Primes p < z (strictly below). z is capped at 1e8.
std::vector<std::int64_t> primes_below(double z);

// Product of primes strictly below z; 1 when there are none.
mpz_class primorial(double z);

struct ExactReal {
  mpq_class exact;
  double approx;
};

// prod_{p<z} (1 - 1/p), exactly.
ExactReal mertens_product(double z);

// prod_{p<z} (1 - 1/p^2), exactly; decreases to 6/pi^2.
ExactReal zeta2_partial(double z);

// Sieve level selection z = X^(c / log log X), c = 1/(2(A+1)), natural logs.
// The asymptotic formula degenerates at desk scale (z ~ 2.4 at X = 1e6), so an
// explicit override is carried alongside and z is floored at 2.
struct SieveConfig {
  double A = 0;
  double c = 0;
  double z = 2;  // formula value (or the override when X <= e^e)
  double epsilon = 0.5;
  std::optional<double> explicit_z_override;

  double z_used() const { return explicit_z_override.value_or(z); }
};

SieveConfig choose_z(std::int64_t X, double A, std::optional<double> override_z = std::nullopt,
                     double epsilon = 0.5);

struct Checkpoint {
  std::int64_t X;
  std::int64_t count;
  double ratio;
};

// S(X) = #{x <= X : gcd(x, |floor(P(x))|) = 1}, with gcd(x, 0) = x (so only
// x = 1 survives a zero floor).
struct DensityReport {
  std::int64_t X = 0;
  std::int64_t count = 0;
  double ratio = 0;
  double target = kZeta2Inverse;
  double abs_error = 0;
  std::vector<Checkpoint> checkpoints;
};

// Exact count with geometrically spaced checkpoints (ratio 2, at most
// `checkpoints` of them, X always included).
DensityReport coprime_count(const RealPolynomial& P, std::int64_t X, int checkpoints = 1,
                            const CountOptions& opt = {});

// Exact count at an explicit ascending checkpoint list (single pass).
DensityReport coprime_count_at(const RealPolynomial& P, const std::vector<std::int64_t>& xs,
                               const CountOptions& opt = {});

// A_d(X) = #{x <= X : d | x and d | floor(P(x))}.
struct DivisorCount {
  std::int64_t d = 1;
  std::int64_t X = 0;
  std::int64_t count = 0;
  double expected = 0;  // X/d^2
  double deviation = 0; // |count - expected|
};

DivisorCount divisor_count(const RealPolynomial& P, std::int64_t d, std::int64_t X,
                           const CountOptions& opt = {});

// S(X, z) = #{x <= X : gcd(gcd(x, floor(P(x))), P_z) = 1}.
std::int64_t sifted_count(const RealPolynomial& P, std::int64_t X, double z,
                          const CountOptions& opt = {});

// Moebius expansion over the squarefree divisors of the primorial:
// S(X, z) = sum_{d | P_z, d <= X} mu(d) |A_d(X)|, evaluated term by term.
struct LegendreTerm {
  std::int64_t d;
  int mu;
  std::int64_t count;
};

struct LegendreExpansion {
  std::int64_t value = 0;
  std::vector<LegendreTerm> terms;  // ascending d, divisors <= X only
};

LegendreExpansion legendre_expansion(const RealPolynomial& P, std::int64_t X, double z,
                                     const CountOptions& opt = {}, std::size_t divisor_cap = 1u << 20);

// Number of distinct prime factors, exact, for 0 <= n <= X (omega(0) = 0).
// Linear smallest-prime-factor sieve for X <= 1e7, segmented marking above.
std::vector<std::uint8_t> omega_table(std::int64_t X);

// #{n_min <= n <= X : |omega(n) - log log n| > (log log n)^(2/3)}, natural logs.
struct OmegaDeviationReport {
  std::int64_t X = 0;
  std::int64_t n_min = 3;
  std::int64_t count = 0;
  double fraction = 0;
};

OmegaDeviationReport omega_deviation_count(std::int64_t X, std::int64_t n_min);

}  // namespace floorgcd
