#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <functional>
#include <vector>

#include "floorgcd/interval.hpp"
#include "floorgcd/polynomial.hpp"

namespace floorgcd {

struct ScanOptions {
  int guard_bits = 64;            // certified width of each value/phase: 2^-guard
  long floor_ceiling_bits = 4096; // escalation ceiling for undecided floors
};

// Bulk certified evaluation of floor(P(x)) and frac(P(x)) over integer ranges
// 1 <= x <= x_max. Rational-coefficient polynomials evaluate exactly (integer
// Horner over a common denominator); otherwise coefficients are enclosed once
// in dyadic intervals and each value is obtained by directed-rounding interval
// Horner, falling back to full tree refinement for the rare straddles.
//
// Instances are immutable after construction; the per-range methods allocate
// their own scratch and may run concurrently on disjoint ranges.
class FloorScan {
 public:
  FloorScan(const RealPolynomial& p, std::int64_t x_max, ScanOptions opt = {});

  // All floors over [1, x_max] fit in int64 (with margin).
  bool int64_safe() const { return int64_safe_; }

  // fn(x, floor(P(x))) for x = first, first+stride, ... <= last.
  // Requires int64_safe(). Throws FloorUndecidedError carrying x.
  void floors(std::int64_t first, std::int64_t last, std::int64_t stride,
              const std::function<void(std::int64_t, std::int64_t)>& fn) const;

  // As floors(), without the int64 restriction.
  void floors_big(std::int64_t first, std::int64_t last, std::int64_t stride,
                  const std::function<void(std::int64_t, const mpz_class&)>& fn) const;

  // fn(x, frac) with frac = P(x) - floor(P(x)) in [0, 1), certified to
  // 2^-guard_bits and re-extracted at higher precision within 2^-50 of a wrap.
  void phases(std::int64_t first, std::int64_t last,
              const std::function<void(std::int64_t, double)>& fn) const;

 private:
  enum class Mode { kExactInt64, kExactBig, kInterval };

  std::int64_t slow_floor(std::int64_t x, mpz_class* out) const;  // tree fallback
  double slow_phase(std::int64_t x) const;

  RealPolynomial poly_;
  ScanOptions opt_;
  std::int64_t x_max_;
  Mode mode_;
  bool int64_safe_ = false;

  // Exact modes: P(x) = M(x) / denom_ with integer M.
  std::vector<mpz_class> int_coeffs_;
  mpz_class denom_;
  std::vector<std::int64_t> int_coeffs64_;
  std::int64_t denom64_ = 1;

  // Interval mode: coefficient enclosures at working precision.
  mpfr_prec_t prec_ = 0;
  std::vector<Dyadic> coeff_lo_, coeff_hi_;
};

}  // namespace floorgcd
