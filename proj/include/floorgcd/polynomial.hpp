#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "floorgcd/computable_real.hpp"

namespace floorgcd {

// Real polynomial with exact (ComputableReal) coefficients, constant term
// first. Trailing coefficients that collapse to rational zero are trimmed; a
// nonzero leading coefficient is certified at construction (symbolically for
// rationals, by interval refinement otherwise). Degree is capped at 16.
// Immutable and safe to share across threads.
class RealPolynomial {
 public:
  static constexpr int kMaxDegree = 16;

  explicit RealPolynomial(std::vector<ComputableReal> coeffs);

  // Parses monomials joined by '+'/'-', each "coeff", "coeff*x^j", "x^j" or
  // "x", with coeff in the constant grammar, e.g. "sqrt(2)*x^3 + (1/3)*x + pi".
  static RealPolynomial parse(const std::string& text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  // Coefficient of x^j; exact zero beyond the degree.
  const ComputableReal& coefficient(int j) const;

  // Exact expression tree for sum_j c_j n^j (Horner form).
  ComputableReal eval(const mpz_class& n) const;

  // Exactly floor(P(n)), toward -inf. Propagates FloorUndecidedError.
  mpz_class floor_eval(const mpz_class& n, const FloorOptions& opt = {}) const;

  // Q(x) = m P(d x) / d, i.e. coefficient j of Q is m d^(j-1) c_j.
  RealPolynomial dilate(std::int64_t d, std::int64_t m) const;

  // Coefficient of x; requires degree >= 1 (absent coefficient would be the
  // leading one, which is nonzero).
  const ComputableReal& linear_coefficient() const;

  bool all_rational() const;

  std::string str() const;

 private:
  struct Unchecked {};
  RealPolynomial(std::vector<ComputableReal> coeffs, Unchecked) : coeffs_(std::move(coeffs)) {}

  std::vector<ComputableReal> coeffs_;
};

}  // namespace floorgcd
