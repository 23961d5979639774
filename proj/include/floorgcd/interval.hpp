#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace floorgcd {

// Arbitrary-precision binary floating-point value (a dyadic rational),
// value-semantic wrapper over mpfr_t. Copies preserve the exact bit pattern.
class Dyadic {
 public:
  Dyadic() {
    mpfr_init2(v_, 64);
    mpfr_set_zero(v_, 1);
  }

  explicit Dyadic(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }

  // Exact copy of an existing mpfr value.
  static Dyadic copy_of(mpfr_srcptr v) {
    Dyadic d(mpfr_get_prec(v));
    mpfr_set(d.v_, v, MPFR_RNDN);  // same precision: exact
    return d;
  }

  static Dyadic from_double(double x) {
    Dyadic d(64);
    mpfr_set_d(d.v_, x, MPFR_RNDN);  // doubles are dyadic: exact
    return d;
  }

  // 2^e
  static Dyadic pow2(long e) {
    Dyadic d(8);
    mpfr_set_ui_2exp(d.v_, 1, e, MPFR_RNDN);
    return d;
  }

  Dyadic(const Dyadic& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Dyadic(Dyadic&& o) noexcept {
    mpfr_init2(v_, 8);
    mpfr_swap(v_, o.v_);
  }

  Dyadic& operator=(const Dyadic& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  Dyadic& operator=(Dyadic&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }

  ~Dyadic() { mpfr_clear(v_); }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  int sign() const { return mpfr_sgn(v_); }

  mpz_class floor() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
  }

  friend int cmp(const Dyadic& a, const Dyadic& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }

  int cmp_q(const mpq_class& q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }

  std::string str(int digits = 17) const {
    char* s = nullptr;
    if (mpfr_asprintf(&s, "%.*Rg", digits, v_) < 0) return "?";
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  mpfr_t v_;
};

// Closed interval [lo, hi] with dyadic endpoints, lo <= hi. Produced by
// interval refinement; guaranteed to contain the exact value it encloses.
struct Interval {
  Dyadic lo;
  Dyadic hi;

  // Upper bound on hi - lo (rounded up at 64 bits).
  Dyadic width_bound() const {
    Dyadic w(64);
    mpfr_sub(w.raw(), hi.raw(), lo.raw(), MPFR_RNDU);
    return w;
  }

  bool width_at_most_pow2(long neg_bits) const {
    Dyadic bound = Dyadic::pow2(-neg_bits);
    return cmp(width_bound(), bound) <= 0;
  }

  double mid() const { return (lo.to_double() + hi.to_double()) / 2.0; }

  // True when [lo, hi] provably excludes zero.
  bool excludes_zero() const { return lo.sign() > 0 || hi.sign() < 0; }

  bool contains_q(const mpq_class& q) const {
    return lo.cmp_q(q) <= 0 && hi.cmp_q(q) >= 0;
  }
};

}  // namespace floorgcd
