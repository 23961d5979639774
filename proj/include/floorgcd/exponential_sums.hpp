#pragma once

#include <cstdint>
#include <vector>

#include "floorgcd/polynomial.hpp"
#include "floorgcd/scan.hpp"

namespace floorgcd {

struct SumOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  ScanOptions scan;
};

// Value of an exponential sum sum_{x<=X} e(phase_x), e(t) = exp(2 pi i t).
// Phases are certified to >= 64 bits each; accumulation is compensated, in
// ascending x over fixed-size blocks, so results are independent of the
// thread count. The constant term of the phase polynomial is dropped: it
// rotates the sum by a unit and cannot change the magnitude.
struct WeylSumValue {
  std::int64_t m = 1;
  std::int64_t d = 1;
  std::int64_t X = 0;
  double re = 0;
  double im = 0;
  double magnitude = 0;
  double exponent = 0;  // log(magnitude)/log(X); see sum_exponent()
};

// s_m(X) = sum_{x<=X} e(m P(dx)/d).
WeylSumValue weyl_sum(const RealPolynomial& P, std::int64_t d, std::int64_t m, std::int64_t X,
                      const SumOptions& opt = {});

// f_k(alpha; X) = sum_{x<=X} e(alpha_1 x + ... + alpha_k x^k).
WeylSumValue weyl_sum_general(const std::vector<ComputableReal>& alphas, std::int64_t X,
                              const SumOptions& opt = {});

// log(magnitude)/log(X); -inf when the magnitude is zero.
double sum_exponent(const WeylSumValue& s);

// Exact star discrepancy of points in [0,1) by the sorted-sample formula
//   D*_N = max_i max(i/N - u_(i), u_(i) - (i-1)/N).
double star_discrepancy(std::vector<double> points);

// Empirical discrepancy of the phase sequence {P(dx)/d mod 1 : x <= N},
// N = floor(X/d), against the explicit transform-side bound
//   D*_N <= 1/(T+1) + (3/N) sum_{m<=T} |s_m(N)|/m.
struct DiscrepancyReport {
  std::int64_t N = 0;
  std::int64_t T = 0;
  double d_star = 0;
  double et_bound = 0;                // right-hand side above (D* scale)
  std::vector<double> weyl_terms;     // |s_m(N)|/m for m = 1..T
  double weyl_term_sum = 0;           // sum of weyl_terms
};

DiscrepancyReport erdos_turan_bound(const RealPolynomial& P, std::int64_t d, std::int64_t X,
                                    std::int64_t T, const SumOptions& opt = {});

}  // namespace floorgcd
