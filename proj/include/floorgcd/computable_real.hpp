#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>

#include "floorgcd/interval.hpp"

namespace floorgcd {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct FloorOptions {
  long start_bits = 64;
  long ceiling_bits = 4096;
};

struct FloorResult {
  mpz_class value;      // floor toward -inf
  bool exact_integer;   // the value is provably equal to `value`
  long precision_used;  // bits at which the floor was certified; 0 = symbolic
};

// An exact real constant as a refinable expression tree. Leaves: rationals,
// sqrt(k), pi, e, liouville(b) = sum_{j>=1} b^(-j!). Nodes: sum, difference,
// product, negation, quotient by a nonzero rational.
//
// Purely rational subtrees are constant-folded at construction (sqrt of a
// perfect square folds to its exact root), so rational-valued expressions
// built from rational leaves and field operations stay exact and decidable.
//
// Values are immutable after construction and safe to share across threads.
class ComputableReal {
 public:
  static ComputableReal rational(const mpq_class& q);
  static ComputableReal integer(const mpz_class& n);
  static ComputableReal integer(long n) { return integer(mpz_class(n)); }
  static ComputableReal sqrt_of(unsigned long k);   // k >= 1
  static ComputableReal pi();
  static ComputableReal e();
  static ComputableReal liouville(unsigned long base);  // base >= 2

  friend ComputableReal operator+(const ComputableReal& a, const ComputableReal& b);
  friend ComputableReal operator-(const ComputableReal& a, const ComputableReal& b);
  friend ComputableReal operator*(const ComputableReal& a, const ComputableReal& b);
  ComputableReal operator-() const;
  // Quotient by a nonzero rational; throws std::invalid_argument on q == 0.
  ComputableReal divided_by(const mpq_class& q) const;

  // Non-null iff the tree collapsed symbolically to a rational (lowest terms,
  // positive denominator).
  const mpq_class* as_rational() const;

  // Interval of width <= 2^-bits containing the exact value. Precision
  // escalation is internal; always succeeds for well-formed trees.
  Interval refine(long bits) const;

  // Exact floor. Rational-collapsed values resolve symbolically; otherwise the
  // interval is refined at doubling precision until it separates from every
  // integer. Throws FloorUndecidedError at the ceiling.
  FloorResult certified_floor(const FloorOptions& opt = {}) const;

  // x - floor(x) as an interval of width <= 2^-bits, clamped into [0, 1].
  Interval fractional_part(long bits, const FloorOptions& opt = {}) const;

  std::string str() const;

  const Node& node() const { return *node_; }

 private:
  explicit ComputableReal(NodePtr n) : node_(std::move(n)) {}
  NodePtr node_;
};

// Parses the constant grammar:
//   const    := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := 'sqrt(' uint ')' | 'pi' | 'e' | 'liouville(' uint ')'
//             | rational | '(' const ')'
//   rational := ['-'] uint ['/' uint]
// Division only by rational-valued factors. A unary '-' before any factor is
// accepted as a convenience superset. Throws ParseError with the offending
// position.
ComputableReal parse_constant(const std::string& text);

}  // namespace floorgcd
