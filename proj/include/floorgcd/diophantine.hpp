#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "floorgcd/computable_real.hpp"
#include "floorgcd/interval.hpp"

namespace floorgcd {

struct Convergent {
  mpz_class p;
  mpz_class q;  // > 0, strictly increasing along the expansion
};

// Simple continued fraction [a0; a1, a2, ...] with its convergents. For
// rational inputs the expansion is the exact finite Euclidean one and
// `terminated` is set.
struct CFExpansion {
  mpz_class a0;
  std::vector<mpz_class> partial_quotients;  // a1..a(N-1), all >= 1
  std::vector<Convergent> convergents;       // starting at a0/1
  bool terminated = false;
};

// Expansion with `terms` total coefficients (a0 included). Floors inside the
// recursion are certified by interval comparison, escalating the working
// precision and restarting until every step separates.
CFExpansion continued_fraction(const ComputableReal& alpha, int terms);

struct LiouvilleWitness {
  unsigned n;      // exponent the witness certifies
  mpz_class p;
  mpz_class q;     // > 1
  Dyadic err;      // certified upper bound on |alpha - p/q|, err <= q^-n
};

// Searches for (p, q), q in [2, q_max], with |alpha - p/q| <= q^-n. CF
// convergents are tried first, then their mediant neighbours
// (p_{j+1} +- p_j) / (q_{j+1} +- q_j), then a direct scan of small q with p
// the nearest integer to q*alpha. Any reduced fraction within q^-2 of alpha
// lies in the first two groups, and q <= 2 cases are covered by the scan, so
// an empty result certifies that no witness with q <= q_max exists. Each
// returned witness is re-verified at doubled precision.
std::optional<LiouvilleWitness> liouville_witness(const ComputableReal& alpha, unsigned n,
                                                  const mpz_class& q_max);

struct ExponentEstimate {
  mpz_class q;
  double estimate;  // -log|alpha - p/q| / log q at the convergent p/q
};

struct ExponentEstimateSequence {
  std::vector<ExponentEstimate> estimates;  // q-increasing, q >= 2 only
  bool terminated = false;                  // rational alpha: expansion ended
};

// Empirical irrationality-exponent estimates along the convergents of alpha.
ExponentEstimateSequence irrationality_exponent_estimate(const ComputableReal& alpha, int terms);

// Parameter bundle for polynomial Weyl-sum decay: given an irrationality
// exponent bound omega and degree k >= 2,
//   delta = 1/(2(omega+1)),  rho = (1-(omega+1)delta)/(2 omega),
//   tau = delta/(2k(k-1)).
// These satisfy tau^-1 >= 4k(k-1) and delta > k tau. Exact rationals are kept
// alongside double views.
struct WeylParams {
  double omega;
  int k;
  double delta;
  double rho;
  double tau;
  double x0 = 1.0;
  mpq_class delta_exact;
  mpq_class rho_exact;
  mpq_class tau_exact;
};

WeylParams weyl_exponent_params(double omega, int k);

struct SimultaneousApproximation {
  std::int64_t q;
  std::vector<mpz_class> a;  // a_j = nearest integer to q alpha_j
};

// Scans q = 1..floor(X^delta) for |q alpha_j - a_j| <= X^(delta-j) for all j,
// a_j the nearest integer; returns the smallest qualifying q. Comparisons are
// certified (exact for rational alpha, interval-separated otherwise).
std::optional<SimultaneousApproximation> simultaneous_approx_search(
    const std::vector<ComputableReal>& alphas, double X, double delta);

}  // namespace floorgcd
