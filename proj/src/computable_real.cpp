#include "floorgcd/computable_real.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

#include "floorgcd/errors.hpp"

namespace floorgcd {

struct Node {
  enum class Kind { kRational, kSqrt, kPi, kE, kLiouville, kSum, kDiff, kProd, kNeg, kQuotRat };
  Kind kind;
  mpq_class rat;          // kRational: value; kQuotRat: divisor (nonzero)
  unsigned long arg = 0;  // kSqrt: radicand; kLiouville: base
  NodePtr left, right;
};

namespace {

NodePtr make_rational_node(mpq_class q) {
  q.canonicalize();
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kRational;
  n->rat = std::move(q);
  return n;
}

const mpq_class* node_rational(const NodePtr& n) {
  return n->kind == Node::Kind::kRational ? &n->rat : nullptr;
}

NodePtr make_binary(Node::Kind k, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

// ---------------------------------------------------------------------------
// Interval evaluation with outward rounding.

struct Scratch {
  mpfr_t v;
  explicit Scratch(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

// Truncation index J for liouville(b): smallest J >= 1 such that the tail
// sum_{j>J} b^(-j!) <= 2 * b^(-(J+1)!) fits below 2^-(tail_bits+1).
int liouville_truncation_index(unsigned long b, long tail_bits) {
  mpz_class pw;
  unsigned long fact = 1;
  for (int j = 1; j < 12; ++j) {
    fact *= static_cast<unsigned long>(j + 1);  // (J+1)! for J = j
    mpz_ui_pow_ui(pw.get_mpz_t(), b, fact);
    // b^((J+1)!) >= 2^(tail_bits+2)  =>  2*b^(-(J+1)!) <= 2^-(tail_bits+1)
    if (mpz_sizeinbase(pw.get_mpz_t(), 2) >= static_cast<std::size_t>(tail_bits) + 3) return j;
  }
  throw GuardError("liouville truncation index out of range");
}

// Exact partial sum S_J = sum_{j=1..J} b^(-j!) and tail bound 2*b^(-(J+1)!).
void liouville_enclosure(unsigned long b, long tail_bits, mpfr_ptr lo, mpfr_ptr hi) {
  const int J = liouville_truncation_index(b, tail_bits);
  unsigned long factJ = 1;
  for (int j = 2; j <= J; ++j) factJ *= static_cast<unsigned long>(j);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), b, factJ);  // b^(J!)
  mpz_class num = 0;
  unsigned long fact = 1;
  for (int j = 1; j <= J; ++j) {
    fact *= static_cast<unsigned long>(j);
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), b, factJ - fact);  // b^(J! - j!)
    num += t;
  }
  mpq_class partial(num, den);
  partial.canonicalize();
  mpz_class tail_den;
  mpz_ui_pow_ui(tail_den.get_mpz_t(), b, factJ * static_cast<unsigned long>(J + 1));
  mpq_class upper = partial + mpq_class(mpz_class(2), tail_den);
  upper.canonicalize();
  mpfr_set_q(lo, partial.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi, upper.get_mpq_t(), MPFR_RNDU);
}

void eval_node(const Node& n, mpfr_prec_t prec, long tail_bits, mpfr_ptr lo, mpfr_ptr hi);

void eval_children(const Node& n, mpfr_prec_t prec, long tail_bits, Scratch& llo, Scratch& lhi,
                   Scratch& rlo, Scratch& rhi) {
  eval_node(*n.left, prec, tail_bits, llo.v, lhi.v);
  eval_node(*n.right, prec, tail_bits, rlo.v, rhi.v);
}

void eval_node(const Node& n, mpfr_prec_t prec, long tail_bits, mpfr_ptr lo, mpfr_ptr hi) {
  switch (n.kind) {
    case Node::Kind::kRational:
      mpfr_set_q(lo, n.rat.get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(hi, n.rat.get_mpq_t(), MPFR_RNDU);
      return;
    case Node::Kind::kSqrt:
      mpfr_sqrt_ui(lo, n.arg, MPFR_RNDD);
      mpfr_sqrt_ui(hi, n.arg, MPFR_RNDU);
      return;
    case Node::Kind::kPi:
      mpfr_const_pi(lo, MPFR_RNDD);
      mpfr_const_pi(hi, MPFR_RNDU);
      return;
    case Node::Kind::kE: {
      Scratch one(8);
      mpfr_set_ui(one.v, 1, MPFR_RNDN);
      mpfr_exp(lo, one.v, MPFR_RNDD);
      mpfr_exp(hi, one.v, MPFR_RNDU);
      return;
    }
    case Node::Kind::kLiouville:
      liouville_enclosure(n.arg, tail_bits, lo, hi);
      return;
    case Node::Kind::kSum: {
      Scratch llo(prec), lhi(prec), rlo(prec), rhi(prec);
      eval_children(n, prec, tail_bits, llo, lhi, rlo, rhi);
      mpfr_add(lo, llo.v, rlo.v, MPFR_RNDD);
      mpfr_add(hi, lhi.v, rhi.v, MPFR_RNDU);
      return;
    }
    case Node::Kind::kDiff: {
      Scratch llo(prec), lhi(prec), rlo(prec), rhi(prec);
      eval_children(n, prec, tail_bits, llo, lhi, rlo, rhi);
      mpfr_sub(lo, llo.v, rhi.v, MPFR_RNDD);
      mpfr_sub(hi, lhi.v, rlo.v, MPFR_RNDU);
      return;
    }
    case Node::Kind::kProd: {
      Scratch llo(prec), lhi(prec), rlo(prec), rhi(prec);
      eval_children(n, prec, tail_bits, llo, lhi, rlo, rhi);
      Scratch t(prec);
      // lo = min of the four endpoint products rounded down
      mpfr_mul(lo, llo.v, rlo.v, MPFR_RNDD);
      mpfr_mul(t.v, llo.v, rhi.v, MPFR_RNDD);
      if (mpfr_cmp(t.v, lo) < 0) mpfr_set(lo, t.v, MPFR_RNDD);
      mpfr_mul(t.v, lhi.v, rlo.v, MPFR_RNDD);
      if (mpfr_cmp(t.v, lo) < 0) mpfr_set(lo, t.v, MPFR_RNDD);
      mpfr_mul(t.v, lhi.v, rhi.v, MPFR_RNDD);
      if (mpfr_cmp(t.v, lo) < 0) mpfr_set(lo, t.v, MPFR_RNDD);
      // hi = max rounded up
      mpfr_mul(hi, llo.v, rlo.v, MPFR_RNDU);
      mpfr_mul(t.v, llo.v, rhi.v, MPFR_RNDU);
      if (mpfr_cmp(t.v, hi) > 0) mpfr_set(hi, t.v, MPFR_RNDU);
      mpfr_mul(t.v, lhi.v, rlo.v, MPFR_RNDU);
      if (mpfr_cmp(t.v, hi) > 0) mpfr_set(hi, t.v, MPFR_RNDU);
      mpfr_mul(t.v, lhi.v, rhi.v, MPFR_RNDU);
      if (mpfr_cmp(t.v, hi) > 0) mpfr_set(hi, t.v, MPFR_RNDU);
      return;
    }
    case Node::Kind::kNeg: {
      Scratch clo(prec), chi(prec);
      eval_node(*n.left, prec, tail_bits, clo.v, chi.v);
      mpfr_neg(lo, chi.v, MPFR_RNDD);
      mpfr_neg(hi, clo.v, MPFR_RNDU);
      return;
    }
    case Node::Kind::kQuotRat: {
      Scratch clo(prec), chi(prec);
      eval_node(*n.left, prec, tail_bits, clo.v, chi.v);
      if (sgn(n.rat) > 0) {
        mpfr_div_q(lo, clo.v, n.rat.get_mpq_t(), MPFR_RNDD);
        mpfr_div_q(hi, chi.v, n.rat.get_mpq_t(), MPFR_RNDU);
      } else {
        mpfr_div_q(lo, chi.v, n.rat.get_mpq_t(), MPFR_RNDD);
        mpfr_div_q(hi, clo.v, n.rat.get_mpq_t(), MPFR_RNDU);
      }
      return;
    }
  }
  throw std::logic_error("unreachable node kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// Builders with symbolic rational collapse.

ComputableReal ComputableReal::rational(const mpq_class& q) {
  return ComputableReal(make_rational_node(q));
}

ComputableReal ComputableReal::integer(const mpz_class& n) {
  return rational(mpq_class(n));
}

ComputableReal ComputableReal::sqrt_of(unsigned long k) {
  if (k == 0) throw std::invalid_argument("sqrt argument must be a positive integer");
  mpz_class z(static_cast<unsigned long>(k));
  if (mpz_perfect_square_p(z.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
    return integer(r);
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kSqrt;
  n->arg = k;
  return ComputableReal(n);
}

ComputableReal ComputableReal::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kPi;
  return ComputableReal(n);
}

ComputableReal ComputableReal::e() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kE;
  return ComputableReal(n);
}

ComputableReal ComputableReal::liouville(unsigned long base) {
  if (base < 2) throw std::invalid_argument("liouville base must be >= 2");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kLiouville;
  n->arg = base;
  return ComputableReal(n);
}

ComputableReal operator+(const ComputableReal& a, const ComputableReal& b) {
  const mpq_class* ra = a.as_rational();
  const mpq_class* rb = b.as_rational();
  if (ra && rb) return ComputableReal::rational(*ra + *rb);
  return ComputableReal(make_binary(Node::Kind::kSum, a.node_, b.node_));
}

ComputableReal operator-(const ComputableReal& a, const ComputableReal& b) {
  const mpq_class* ra = a.as_rational();
  const mpq_class* rb = b.as_rational();
  if (ra && rb) return ComputableReal::rational(*ra - *rb);
  return ComputableReal(make_binary(Node::Kind::kDiff, a.node_, b.node_));
}

ComputableReal operator*(const ComputableReal& a, const ComputableReal& b) {
  const mpq_class* ra = a.as_rational();
  const mpq_class* rb = b.as_rational();
  if (ra && rb) return ComputableReal::rational(*ra * *rb);
  return ComputableReal(make_binary(Node::Kind::kProd, a.node_, b.node_));
}

ComputableReal ComputableReal::operator-() const {
  if (const mpq_class* r = as_rational()) return rational(-*r);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kNeg;
  n->left = node_;
  return ComputableReal(n);
}

ComputableReal ComputableReal::divided_by(const mpq_class& q) const {
  if (q == 0) throw std::invalid_argument("division by zero rational");
  if (const mpq_class* r = as_rational()) return rational(*r / q);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kQuotRat;
  n->left = node_;
  n->rat = q;
  n->rat.canonicalize();
  return ComputableReal(n);
}

const mpq_class* ComputableReal::as_rational() const { return node_rational(node_); }

// ---------------------------------------------------------------------------
// Refinement and certified floor.

Interval ComputableReal::refine(long bits) const {
  if (bits < 1) bits = 1;
  mpfr_prec_t prec = std::max<long>(64, bits + 32);
  for (;;) {
    Scratch lo(prec), hi(prec);
    eval_node(*node_, prec, prec, lo.v, hi.v);
    Interval out{Dyadic::copy_of(lo.v), Dyadic::copy_of(hi.v)};
    if (out.width_at_most_pow2(bits)) return out;
    prec *= 2;
    if (prec > (1L << 24)) throw GuardError("interval refinement escalation ceiling");
  }
}

FloorResult ComputableReal::certified_floor(const FloorOptions& opt) const {
  if (const mpq_class* q = as_rational()) {
    mpz_class v;
    mpz_fdiv_q(v.get_mpz_t(), q->get_num_mpz_t(), q->get_den_mpz_t());
    return FloorResult{v, q->get_den() == 1, 0};
  }
  for (long t = opt.start_bits; t <= opt.ceiling_bits; t *= 2) {
    Interval iv = refine(t);
    mpz_class flo = iv.lo.floor();
    mpz_class fhi = iv.hi.floor();
    // floor(lo) == floor(hi) puts [lo, hi] inside [n, n+1), certifying the floor.
    if (flo == fhi) return FloorResult{flo, false, t};
  }
  throw FloorUndecidedError(opt.ceiling_bits);
}

Interval ComputableReal::fractional_part(long bits, const FloorOptions& opt) const {
  FloorResult f = certified_floor(opt);
  ComputableReal diff = *this - integer(f.value);
  Interval iv = diff.refine(bits);
  // The true value lies in [0, 1); endpoints outside that are rounding slack.
  if (iv.lo.sign() < 0) iv.lo = Dyadic();
  if (mpfr_cmp_ui(iv.hi.raw(), 1) > 0) {
    mpfr_set_ui(iv.hi.raw(), 1, MPFR_RNDN);
  }
  return iv;
}

// ---------------------------------------------------------------------------
// Rendering.

namespace {
void render(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::kRational:
      out += n.rat.get_str();
      return;
    case Node::Kind::kSqrt:
      out += "sqrt(" + std::to_string(n.arg) + ")";
      return;
    case Node::Kind::kPi:
      out += "pi";
      return;
    case Node::Kind::kE:
      out += "e";
      return;
    case Node::Kind::kLiouville:
      out += "liouville(" + std::to_string(n.arg) + ")";
      return;
    case Node::Kind::kSum:
      out += '(';
      render(*n.left, out);
      out += " + ";
      render(*n.right, out);
      out += ')';
      return;
    case Node::Kind::kDiff:
      out += '(';
      render(*n.left, out);
      out += " - ";
      render(*n.right, out);
      out += ')';
      return;
    case Node::Kind::kProd:
      out += '(';
      render(*n.left, out);
      out += " * ";
      render(*n.right, out);
      out += ')';
      return;
    case Node::Kind::kNeg:
      out += "-(";
      render(*n.left, out);
      out += ')';
      return;
    case Node::Kind::kQuotRat:
      out += '(';
      render(*n.left, out);
      out += " / " + n.rat.get_str() + ')';
      return;
  }
}
}  // namespace

std::string ComputableReal::str() const {
  std::string out;
  render(*node_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser.

namespace {

struct Token {
  enum class Kind { kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kLParen, kRParen, kEnd };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::string normalize_minus(const std::string& text) {
  // Accept U+2212 as '-'.
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

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      toks.push_back({Token::Kind::kNumber, text.substr(start, i - start), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
      toks.push_back({Token::Kind::kIdent, text.substr(start, i - start), start});
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '+': k = Token::Kind::kPlus; break;
      case '-': k = Token::Kind::kMinus; break;
      case '*': k = Token::Kind::kStar; break;
      case '/': k = Token::Kind::kSlash; break;
      case '(': k = Token::Kind::kLParen; break;
      case ')': k = Token::Kind::kRParen; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    toks.push_back({k, std::string(1, c), i});
    ++i;
  }
  toks.push_back({Token::Kind::kEnd, "", text.size()});
  return toks;
}

class ConstParser {
 public:
  explicit ConstParser(const std::string& text) : toks_(lex(text)) {}

  ComputableReal parse() {
    ComputableReal v = parse_const();
    expect(Token::Kind::kEnd, "end of input");
    return v;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& advance() { return toks_[i_++]; }

  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what + ", got '" + peek().text + "'", peek().pos);
    advance();
  }

  mpz_class parse_uint(const char* what) {
    if (peek().kind != Token::Kind::kNumber)
      throw ParseError(std::string("expected ") + what + ", got '" + peek().text + "'", peek().pos);
    return mpz_class(advance().text);
  }

  unsigned long parse_small_uint(const char* what) {
    const Token& t = peek();
    mpz_class z = parse_uint(what);
    if (!z.fits_ulong_p()) throw ParseError(std::string(what) + " too large", t.pos);
    return z.get_ui();
  }

  ComputableReal parse_const() {
    ComputableReal v = parse_term();
    while (peek().kind == Token::Kind::kPlus || peek().kind == Token::Kind::kMinus) {
      bool plus = advance().kind == Token::Kind::kPlus;
      ComputableReal r = parse_term();
      v = plus ? v + r : v - r;
    }
    return v;
  }

  ComputableReal parse_term() {
    ComputableReal v = parse_factor();
    while (peek().kind == Token::Kind::kStar || peek().kind == Token::Kind::kSlash) {
      const Token& op = advance();
      ComputableReal r = parse_factor();
      if (op.kind == Token::Kind::kStar) {
        v = v * r;
      } else {
        const mpq_class* q = r.as_rational();
        if (!q) throw ParseError("division by non-rational factor", op.pos);
        if (*q == 0) throw ParseError("division by zero", op.pos);
        v = v.divided_by(*q);
      }
    }
    return v;
  }

  ComputableReal parse_factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::kMinus:
        advance();
        return -parse_factor();
      case Token::Kind::kLParen: {
        advance();
        ComputableReal v = parse_const();
        expect(Token::Kind::kRParen, "')'");
        return v;
      }
      case Token::Kind::kNumber: {
        mpz_class num = parse_uint("integer");
        // A '/' directly followed by an integer forms a rational literal.
        if (peek().kind == Token::Kind::kSlash && toks_[i_ + 1].kind == Token::Kind::kNumber) {
          std::size_t slash_pos = peek().pos;
          advance();
          mpz_class den = parse_uint("denominator");
          if (den == 0) throw ParseError("zero denominator", slash_pos);
          return ComputableReal::rational(mpq_class(num, den));
        }
        return ComputableReal::integer(num);
      }
      case Token::Kind::kIdent: {
        advance();
        if (t.text == "pi") return ComputableReal::pi();
        if (t.text == "e") return ComputableReal::e();
        if (t.text == "sqrt") {
          expect(Token::Kind::kLParen, "'('");
          const Token& arg = peek();
          unsigned long k = parse_small_uint("sqrt argument");
          if (k == 0) throw ParseError("sqrt argument must be a positive integer", arg.pos);
          expect(Token::Kind::kRParen, "')'");
          return ComputableReal::sqrt_of(k);
        }
        if (t.text == "liouville") {
          expect(Token::Kind::kLParen, "'('");
          const Token& arg = peek();
          unsigned long b = parse_small_uint("liouville base");
          if (b < 2) throw ParseError("liouville base must be >= 2", arg.pos);
          expect(Token::Kind::kRParen, "')'");
          return ComputableReal::liouville(b);
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.pos);
      }
      default:
        throw ParseError("expected a factor, got '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

ComputableReal parse_constant(const std::string& text) {
  return ConstParser(normalize_minus(text)).parse();
}

}  // namespace floorgcd
