#include "floorgcd/polynomial.hpp"

#include <stdexcept>

#include "floorgcd/errors.hpp"

namespace floorgcd {

namespace {

bool is_rational_zero(const ComputableReal& c) {
  const mpq_class* q = c.as_rational();
  return q && *q == 0;
}

// Certifies that c != 0, symbolically for rationals, else by refining until
// the interval excludes zero.
void require_nonzero(const ComputableReal& c) {
  if (const mpq_class* q = c.as_rational()) {
    if (*q == 0) throw std::invalid_argument("leading coefficient is zero");
    return;
  }
  for (long t = 64; t <= 4096; t *= 2) {
    if (c.refine(t).excludes_zero()) return;
  }
  throw GuardError("leading coefficient cannot be certified nonzero");
}

}  // namespace

RealPolynomial::RealPolynomial(std::vector<ComputableReal> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(ComputableReal::integer(0));
  while (coeffs_.size() > 1 && is_rational_zero(coeffs_.back())) coeffs_.pop_back();
  if (degree() > kMaxDegree) throw GuardError("polynomial degree exceeds 16");
  if (degree() >= 1) require_nonzero(coeffs_.back());
}

const ComputableReal& RealPolynomial::coefficient(int j) const {
  static const ComputableReal zero = ComputableReal::integer(0);
  if (j < 0 || j >= static_cast<int>(coeffs_.size())) return zero;
  return coeffs_[static_cast<std::size_t>(j)];
}

ComputableReal RealPolynomial::eval(const mpz_class& n) const {
  ComputableReal x = ComputableReal::integer(n);
  ComputableReal acc = coeffs_.back();
  for (int j = degree() - 1; j >= 0; --j) acc = acc * x + coeffs_[static_cast<std::size_t>(j)];
  return acc;
}

mpz_class RealPolynomial::floor_eval(const mpz_class& n, const FloorOptions& opt) const {
  return eval(n).certified_floor(opt).value;
}

RealPolynomial RealPolynomial::dilate(std::int64_t d, std::int64_t m) const {
  if (d < 1 || m < 1) throw std::invalid_argument("dilate requires positive d and m");
  std::vector<ComputableReal> out;
  out.reserve(coeffs_.size());
  // coefficient j picks up the factor m d^(j-1); j = 0 gets m/d.
  mpq_class factor(m, d);
  factor.canonicalize();
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    out.push_back(ComputableReal::rational(factor) * coeffs_[j]);
    factor *= d;
    factor.canonicalize();
  }
  // Scaling by a positive rational preserves the leading coefficient's sign.
  return RealPolynomial(std::move(out), Unchecked{});
}

const ComputableReal& RealPolynomial::linear_coefficient() const {
  if (degree() < 1) throw std::invalid_argument("degree-0 polynomial has no linear coefficient");
  return coeffs_[1];
}

bool RealPolynomial::all_rational() const {
  for (const auto& c : coeffs_)
    if (!c.as_rational()) return false;
  return true;
}

std::string RealPolynomial::str() const {
  std::string out;
  for (int j = degree(); j >= 0; --j) {
    if (!out.empty()) out += " + ";
    out += "(" + coeffs_[static_cast<std::size_t>(j)].str() + ")";
    if (j == 1) out += "*x";
    if (j > 1) out += "*x^" + std::to_string(j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial text form.

namespace {

std::string normalize_minus_poly(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      out += '-';
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

struct Monomial {
  std::string text;    // full monomial text, sign excluded
  std::size_t offset;  // byte offset in the original string
  bool negative;
};

// Splits on '+'/'-' at parenthesis depth 0.
std::vector<Monomial> split_monomials(const std::string& text) {
  std::vector<Monomial> out;
  int depth = 0;
  bool negative = false;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    out.push_back({text.substr(start, end - start), start, negative});
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '+' || c == '-')) {
      // A leading sign or a sign right after an operator binds to the next
      // monomial's coefficient instead of splitting.
      std::size_t j = start;
      while (j < i && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) {
        if (c == '-') negative = !negative;
        start = i + 1;
        continue;
      }
      flush(i);
      negative = (c == '-');
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

// Locates a standalone 'x' at depth 0 (not part of an identifier).
std::size_t find_var(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth != 0 || c != 'x') continue;
    bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]));
    bool right_ok = i + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1]));
    if (left_ok && right_ok) return i;
  }
  return std::string::npos;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

RealPolynomial RealPolynomial::parse(const std::string& input) {
  const std::string text = normalize_minus_poly(input);
  if (trim(text).empty()) throw ParseError("empty polynomial", 0);
  std::vector<ComputableReal> coeffs;
  auto add_term = [&](int power, const ComputableReal& c) {
    while (static_cast<int>(coeffs.size()) <= power) coeffs.push_back(ComputableReal::integer(0));
    coeffs[static_cast<std::size_t>(power)] = coeffs[static_cast<std::size_t>(power)] + c;
  };

  for (const Monomial& mono : split_monomials(text)) {
    if (trim(mono.text).empty()) throw ParseError("empty monomial", mono.offset);
    std::size_t xpos = find_var(mono.text);
    std::string coeff_text;
    int power = 0;
    if (xpos == std::string::npos) {
      coeff_text = mono.text;
    } else {
      // Trailing part: nothing (power 1) or "^j".
      std::string rest = trim(mono.text.substr(xpos + 1));
      if (rest.empty()) {
        power = 1;
      } else if (rest[0] == '^') {
        std::string exp = trim(rest.substr(1));
        if (exp.empty() || exp.size() > 4 ||
            exp.find_first_not_of("0123456789") != std::string::npos)
          throw ParseError("invalid exponent '" + exp + "'", mono.offset + xpos);
        power = std::stoi(exp);
        if (power > kMaxDegree) throw GuardError("polynomial degree exceeds 16");
      } else {
        throw ParseError("unexpected text after 'x'", mono.offset + xpos + 1);
      }
      std::string before = trim(mono.text.substr(0, xpos));
      if (!before.empty()) {
        if (before.back() != '*')
          throw ParseError("expected '*' between coefficient and 'x'", mono.offset + xpos);
        coeff_text = before.substr(0, before.size() - 1);
        if (trim(coeff_text).empty())
          throw ParseError("missing coefficient before '*'", mono.offset);
      }
    }
    ComputableReal c = ComputableReal::integer(1);
    if (!trim(coeff_text).empty()) {
      try {
        c = parse_constant(coeff_text);
      } catch (const ParseError& e) {
        throw ParseError(e.message(), mono.offset + e.position());
      }
    }
    if (mono.negative) c = -c;
    add_term(power, c);
  }
  return RealPolynomial(std::move(coeffs));
}

}  // namespace floorgcd
