#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace floorgcd {

// Input text does not conform to the expression grammar. Positions are
// 0-based byte offsets into the original string; what() renders them 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position + 1)),
        message_(message),
        position_(position) {}

  const std::string& message() const { return message_; }
  std::size_t position() const { return position_; }

 private:
  std::string message_;
  std::size_t position_;
};

// Raised when a floor cannot be certified below the precision ceiling and the
// symbolic layer could not collapse the value to a rational. Signals a value
// indistinguishable from an integer at the configured precision.
class FloorUndecidedError : public std::runtime_error {
 public:
  explicit FloorUndecidedError(long ceiling_bits)
      : std::runtime_error("floor-undecided: value not separated from an integer at " +
                           std::to_string(ceiling_bits) + " bits"),
        ceiling_bits_(ceiling_bits) {}

  FloorUndecidedError(long ceiling_bits, std::int64_t at_x)
      : std::runtime_error("floor-undecided at x = " + std::to_string(at_x) +
                           " (precision ceiling " + std::to_string(ceiling_bits) + " bits)"),
        ceiling_bits_(ceiling_bits),
        at_x_(at_x) {}

  long ceiling_bits() const { return ceiling_bits_; }
  std::optional<std::int64_t> at_x() const { return at_x_; }

 private:
  long ceiling_bits_;
  std::optional<std::int64_t> at_x_;
};

// A configured resource guard tripped: squarefree-divisor explosion in the
// Legendre expansion, the polynomial degree bound, or an escalation ceiling in
// a certified comparison.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace floorgcd
