#include "floorgcd/diophantine.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "floorgcd/errors.hpp"

namespace floorgcd {

namespace {

constexpr long kCfBitsCeiling = 1L << 20;
constexpr long kCompareBitsCeiling = 1L << 16;
constexpr int kCfMaxTerms = 200;
const mpz_class kBruteScanCap = 10000;

struct MpfrReg {
  mpfr_t v;
  explicit MpfrReg(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~MpfrReg() { mpfr_clear(v); }
  MpfrReg(const MpfrReg&) = delete;
  MpfrReg& operator=(const MpfrReg&) = delete;
};

void push_convergent(CFExpansion& cf, const mpz_class& a) {
  mpz_class p, q;
  const std::size_t n = cf.convergents.size();
  if (n == 0) {
    p = a;
    q = 1;
  } else if (n == 1) {
    p = a * cf.convergents[0].p + 1;
    q = a;
  } else {
    p = a * cf.convergents[n - 1].p + cf.convergents[n - 2].p;
    q = a * cf.convergents[n - 1].q + cf.convergents[n - 2].q;
  }
  cf.convergents.push_back({std::move(p), std::move(q)});
}

CFExpansion cf_of_rational(const mpq_class& r, int terms) {
  CFExpansion cf;
  mpz_class num = r.get_num(), den = r.get_den();
  mpz_class a, rem;
  mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  cf.a0 = a;
  push_convergent(cf, a);
  int produced = 1;
  while (rem != 0 && produced < terms) {
    num = den;
    den = rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    cf.partial_quotients.push_back(a);
    push_convergent(cf, a);
    ++produced;
  }
  cf.terminated = (rem == 0);
  return cf;
}

// One attempt at `terms` coefficients with alpha enclosed to `bits`. Fails
// (returns false) as soon as a floor in the recursion cannot be certified.
bool cf_attempt(const ComputableReal& alpha, int terms, long bits, CFExpansion* out) {
  Interval enc = alpha.refine(bits);
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
  MpfrReg lo(prec), hi(prec), t(prec);
  mpfr_set(lo.v, enc.lo.raw(), MPFR_RNDD);
  mpfr_set(hi.v, enc.hi.raw(), MPFR_RNDU);

  CFExpansion cf;
  mpz_class flo, fhi;
  mpfr_get_z(flo.get_mpz_t(), lo.v, MPFR_RNDD);
  mpfr_get_z(fhi.get_mpz_t(), hi.v, MPFR_RNDD);
  if (flo != fhi) return false;
  cf.a0 = flo;
  push_convergent(cf, flo);

  for (int j = 1; j < terms; ++j) {
    // remainder r = x - a_j in (0, 1); invert to continue
    mpfr_sub_z(lo.v, lo.v, flo.get_mpz_t(), MPFR_RNDD);
    mpfr_sub_z(hi.v, hi.v, flo.get_mpz_t(), MPFR_RNDU);
    if (mpfr_sgn(lo.v) <= 0) return false;  // cannot certify r > 0
    mpfr_ui_div(t.v, 1, hi.v, MPFR_RNDD);
    mpfr_ui_div(hi.v, 1, lo.v, MPFR_RNDU);
    mpfr_set(lo.v, t.v, MPFR_RNDD);
    mpfr_get_z(flo.get_mpz_t(), lo.v, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi.v, MPFR_RNDD);
    if (flo != fhi) return false;
    cf.partial_quotients.push_back(flo);
    push_convergent(cf, flo);
  }
  *out = std::move(cf);
  return true;
}

// Certified |alpha - pq| vs an exact rational threshold.
struct AbsCompare {
  bool leq;
  long bits;   // certification precision (0 = exact rational arithmetic)
  Dyadic err_hi;
};

Dyadic dyadic_from_q_up(const mpq_class& q) {
  Dyadic d(128);
  mpfr_set_q(d.raw(), q.get_mpq_t(), MPFR_RNDU);
  return d;
}

AbsCompare abs_diff_leq(const ComputableReal& alpha, const mpq_class& pq, const mpq_class& tau,
                        long start_bits) {
  if (const mpq_class* r = alpha.as_rational()) {
    mpq_class err = *r - pq;
    if (err < 0) err = -err;
    return AbsCompare{err <= tau, 0, dyadic_from_q_up(err)};
  }
  ComputableReal diff = alpha - ComputableReal::rational(pq);
  for (long bits = start_bits; bits <= kCompareBitsCeiling; bits *= 2) {
    Interval iv = diff.refine(bits);
    // |iv| as [alo, ahi]
    Dyadic alo, ahi;
    if (iv.lo.sign() >= 0) {
      alo = iv.lo;
      ahi = iv.hi;
    } else if (iv.hi.sign() <= 0) {
      alo = iv.hi;
      mpfr_neg(alo.raw(), alo.raw(), MPFR_RNDN);
      ahi = iv.lo;
      mpfr_neg(ahi.raw(), ahi.raw(), MPFR_RNDN);
    } else {
      alo = Dyadic();
      ahi = iv.hi;
      Dyadic neg_lo = iv.lo;
      mpfr_neg(neg_lo.raw(), neg_lo.raw(), MPFR_RNDN);
      if (cmp(neg_lo, ahi) > 0) ahi = neg_lo;
    }
    if (ahi.cmp_q(tau) <= 0) return AbsCompare{true, bits, ahi};
    if (alo.cmp_q(tau) > 0) return AbsCompare{false, bits, ahi};
  }
  throw GuardError("certified comparison escalation ceiling (|alpha - p/q| vs threshold)");
}

}  // namespace

CFExpansion continued_fraction(const ComputableReal& alpha, int terms) {
  if (terms < 1) throw std::invalid_argument("continued_fraction requires terms >= 1");
  if (const mpq_class* r = alpha.as_rational()) return cf_of_rational(*r, terms);
  CFExpansion out;
  for (long bits = 128; bits <= kCfBitsCeiling; bits *= 2) {
    if (cf_attempt(alpha, terms, bits, &out)) return out;
  }
  throw FloorUndecidedError(kCfBitsCeiling);
}

std::optional<LiouvilleWitness> liouville_witness(const ComputableReal& alpha, unsigned n,
                                                  const mpz_class& q_max) {
  if (n < 1) throw std::invalid_argument("liouville_witness requires n >= 1");
  if (q_max < 2) throw std::invalid_argument("liouville_witness requires q_max >= 2");

  struct Candidate {
    mpz_class p, q;
  };
  std::vector<Candidate> candidates;

  // CF convergents (ascending q), expanded until they pass q_max.
  CFExpansion cf;
  for (int terms = 8;; terms *= 2) {
    cf = continued_fraction(alpha, terms);
    if (cf.terminated || cf.convergents.back().q > q_max) break;
    if (terms >= kCfMaxTerms)
      throw GuardError("continued fraction expansion did not pass q_max");
  }
  for (const Convergent& c : cf.convergents)
    if (c.q >= 2 && c.q <= q_max) candidates.push_back({c.p, c.q});
  // Mediant neighbours of consecutive convergents: together with the
  // convergents these exhaust every reduced fraction within 1/q^2 of alpha.
  for (std::size_t j = 0; j + 1 < cf.convergents.size(); ++j) {
    const Convergent& c0 = cf.convergents[j];
    const Convergent& c1 = cf.convergents[j + 1];
    mpz_class qm = c1.q - c0.q, qp = c1.q + c0.q;
    if (qm >= 2 && qm <= q_max) candidates.push_back({c1.p - c0.p, qm});
    if (qp >= 2 && qp <= q_max) candidates.push_back({c1.p + c0.p, qp});
  }

  auto check = [&](const mpz_class& p, const mpz_class& q) -> std::optional<LiouvilleWitness> {
    mpz_class qn;
    mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
    mpq_class tau(1, qn);
    tau.canonicalize();
    mpq_class pq(p, q);
    pq.canonicalize();
    AbsCompare c = abs_diff_leq(alpha, pq, tau, 64);
    if (!c.leq) return std::nullopt;
    if (c.bits > 0) {
      // soundness: re-verify at doubled precision
      AbsCompare again = abs_diff_leq(alpha, pq, tau, 2 * c.bits);
      if (!again.leq) throw GuardError("witness failed re-verification");
      c.err_hi = again.err_hi;
    }
    return LiouvilleWitness{n, p, q, c.err_hi};
  };

  for (const Candidate& c : candidates)
    if (auto w = check(c.p, c.q)) return w;

  // Direct scan of small q with p the nearest integer to q*alpha.
  mpz_class scan_max = std::min(q_max, kBruteScanCap);
  const mpq_class* rat = alpha.as_rational();
  for (mpz_class q = 2; q <= scan_max; ++q) {
    mpz_class p;
    if (rat) {
      mpq_class half_up = *rat * q + mpq_class(1, 2);
      mpz_fdiv_q(p.get_mpz_t(), half_up.get_num_mpz_t(), half_up.get_den_mpz_t());
    } else {
      ComputableReal shifted =
          alpha * ComputableReal::integer(q) + ComputableReal::rational(mpq_class(1, 2));
      p = shifted.certified_floor(FloorOptions{64, 1 << 16}).value;
    }
    if (auto w = check(p, q)) return w;
  }

  // For n >= 3 the convergent/neighbour set is exhaustive beyond the scanned
  // range (any witness satisfies |alpha - p/q| < 1/(2q^2) after reduction).
  // The only residual gap is n <= 2 with q_max beyond the scan cap; close it
  // exactly for rational alpha, where the balanced remainder decides.
  if (n <= 2 && q_max > scan_max) {
    if (rat) {
      if (q_max - scan_max > 2000000)
        throw GuardError("liouville_witness scan range too large for rational alpha with n <= 2");
      for (mpz_class q = scan_max + 1; q <= q_max; ++q) {
        mpq_class half_up = *rat * q + mpq_class(1, 2);
        mpz_class p;
        mpz_fdiv_q(p.get_mpz_t(), half_up.get_num_mpz_t(), half_up.get_den_mpz_t());
        mpq_class err = *rat - mpq_class(p, q);
        err.canonicalize();
        if (err < 0) err = -err;
        mpz_class qn;
        mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
        mpq_class tau(1, qn);
        tau.canonicalize();
        if (err <= tau) return LiouvilleWitness{n, p, q, dyadic_from_q_up(err)};
      }
    } else {
      // Irrational alpha, n = 2: a non-convergent witness in (scan_max, q_max]
      // would have to sit in [1/(2q^2), 1/q^2]; the mediant neighbours above
      // cover that band (Fatou), so the candidate set is already exhaustive.
    }
  }
  return std::nullopt;
}

ExponentEstimateSequence irrationality_exponent_estimate(const ComputableReal& alpha, int terms) {
  if (terms < 2) throw std::invalid_argument("irrationality_exponent_estimate requires terms >= 2");
  CFExpansion cf = continued_fraction(alpha, terms);
  ExponentEstimateSequence out;
  out.terminated = cf.terminated;
  const mpq_class* rat = alpha.as_rational();

  for (std::size_t j = 0; j < cf.convergents.size(); ++j) {
    const Convergent& c = cf.convergents[j];
    if (c.q < 2) continue;
    if (rat) {
      mpq_class err = *rat - mpq_class(c.p, c.q);
      err.canonicalize();
      if (err < 0) err = -err;
      if (err == 0) continue;  // exact final convergent of a rational
      MpfrReg e(256), lq(256), est(256);
      mpfr_set_q(e.v, err.get_mpq_t(), MPFR_RNDN);
      mpfr_log(e.v, e.v, MPFR_RNDN);
      mpfr_set_z(lq.v, c.q.get_mpz_t(), MPFR_RNDN);
      mpfr_log(lq.v, lq.v, MPFR_RNDN);
      mpfr_div(est.v, e.v, lq.v, MPFR_RNDN);
      mpfr_neg(est.v, est.v, MPFR_RNDN);
      out.estimates.push_back({c.q, mpfr_get_d(est.v, MPFR_RNDN)});
      continue;
    }
    mpq_class pq(c.p, c.q);
    pq.canonicalize();
    ComputableReal diff = alpha - ComputableReal::rational(pq);
    double value = 0.0;
    bool done = false;
    for (long bits = 128; bits <= kCfBitsCeiling && !done; bits *= 2) {
      Interval iv = diff.refine(bits);
      Dyadic alo = iv.lo, ahi = iv.hi;
      if (alo.sign() < 0 && ahi.sign() <= 0) {
        Dyadic t = alo;
        alo = ahi;
        ahi = t;
        mpfr_neg(alo.raw(), alo.raw(), MPFR_RNDN);
        mpfr_neg(ahi.raw(), ahi.raw(), MPFR_RNDN);
      }
      if (alo.sign() <= 0) continue;  // not yet separated from zero
      const mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
      MpfrReg le(prec), lq(prec), lo(prec), hi(prec);
      mpfr_set_z(lq.v, c.q.get_mpz_t(), MPFR_RNDN);
      // est in [-ln(err_hi), -ln(err_lo)] / ln q  (err < 1, so logs negative)
      mpfr_log(le.v, ahi.raw(), MPFR_RNDU);
      mpfr_neg(le.v, le.v, MPFR_RNDN);
      mpfr_log(lo.v, lq.v, MPFR_RNDU);
      mpfr_div(lo.v, le.v, lo.v, MPFR_RNDD);
      mpfr_log(le.v, alo.raw(), MPFR_RNDD);
      mpfr_neg(le.v, le.v, MPFR_RNDN);
      mpfr_log(hi.v, lq.v, MPFR_RNDD);
      mpfr_div(hi.v, le.v, hi.v, MPFR_RNDU);
      double dlo = mpfr_get_d(lo.v, MPFR_RNDN);
      double dhi = mpfr_get_d(hi.v, MPFR_RNDN);
      if (std::fabs(dhi - dlo) <= 1e-9) {
        value = 0.5 * (dlo + dhi);
        done = true;
      }
    }
    if (!done) throw GuardError("irrationality exponent estimate did not stabilize");
    out.estimates.push_back({c.q, value});
  }
  return out;
}

WeylParams weyl_exponent_params(double omega, int k) {
  if (!(omega > 0)) throw std::invalid_argument("weyl_exponent_params requires omega > 0");
  if (k < 2) throw std::invalid_argument("weyl_exponent_params requires degree k >= 2");
  mpq_class w(omega);  // doubles are dyadic: exact
  mpq_class one_plus = w + 1;
  mpq_class delta = mpq_class(1) / (2 * one_plus);
  mpq_class rho = (1 - one_plus * delta) / (2 * w);
  mpq_class tau = delta / (2 * k * (k - 1));
  delta.canonicalize();
  rho.canonicalize();
  tau.canonicalize();
  WeylParams p;
  p.omega = omega;
  p.k = k;
  p.delta = delta.get_d();
  p.rho = rho.get_d();
  p.tau = tau.get_d();
  p.delta_exact = delta;
  p.rho_exact = rho;
  p.tau_exact = tau;
  return p;
}

namespace {

// Certified check |q alpha - a| <= X^(delta-j), threshold enclosed by an
// mpfr interval that tightens on escalation.
bool residual_within(const ComputableReal& alpha, std::int64_t q, const mpz_class& a, double X,
                     double exponent) {
  const mpq_class* rat = alpha.as_rational();
  mpq_class exact_res;
  ComputableReal diff = ComputableReal::integer(0);
  if (rat) {
    exact_res = *rat * q - a;
    if (exact_res < 0) exact_res = -exact_res;
  } else {
    diff = alpha * ComputableReal::integer(q) - ComputableReal::integer(a);
  }
  for (long bits = 96; bits <= kCompareBitsCeiling; bits *= 2) {
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits);
    MpfrReg xb(prec), eb(prec), tlo(prec), thi(prec);
    mpfr_set_d(xb.v, X, MPFR_RNDN);
    mpfr_set_d(eb.v, exponent, MPFR_RNDN);
    mpfr_pow(tlo.v, xb.v, eb.v, MPFR_RNDD);
    mpfr_pow(thi.v, xb.v, eb.v, MPFR_RNDU);
    if (rat) {
      if (mpfr_cmp_q(tlo.v, exact_res.get_mpq_t()) >= 0) return true;
      if (mpfr_cmp_q(thi.v, exact_res.get_mpq_t()) < 0) return false;
      continue;
    }
    Interval iv = diff.refine(bits);
    Dyadic alo = iv.lo, ahi = iv.hi;
    if (ahi.sign() <= 0) {
      Dyadic t = alo;
      alo = ahi;
      ahi = t;
      mpfr_neg(alo.raw(), alo.raw(), MPFR_RNDN);
      mpfr_neg(ahi.raw(), ahi.raw(), MPFR_RNDN);
    } else if (alo.sign() < 0) {
      mpfr_neg(alo.raw(), alo.raw(), MPFR_RNDN);
      if (cmp(alo, ahi) > 0) ahi = alo;
      alo = Dyadic();
    }
    if (mpfr_cmp(ahi.raw(), tlo.v) <= 0) return true;
    if (mpfr_cmp(alo.raw(), thi.v) > 0) return false;
  }
  throw GuardError("certified comparison escalation ceiling (simultaneous approximation)");
}

}  // namespace

std::optional<SimultaneousApproximation> simultaneous_approx_search(
    const std::vector<ComputableReal>& alphas, double X, double delta) {
  if (alphas.empty()) throw std::invalid_argument("simultaneous_approx_search requires alphas");
  if (!(X > 1)) throw std::invalid_argument("simultaneous_approx_search requires X > 1");
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("simultaneous_approx_search requires 0 < delta < 1");
  const std::int64_t q_max = static_cast<std::int64_t>(std::floor(std::pow(X, delta) + 1e-9));

  for (std::int64_t q = 1; q <= q_max; ++q) {
    std::vector<mpz_class> a;
    a.reserve(alphas.size());
    bool ok = true;
    for (std::size_t j = 0; j < alphas.size() && ok; ++j) {
      const ComputableReal& alpha = alphas[j];
      mpz_class aj;
      if (const mpq_class* rat = alpha.as_rational()) {
        mpq_class half_up = *rat * q + mpq_class(1, 2);
        mpz_fdiv_q(aj.get_mpz_t(), half_up.get_num_mpz_t(), half_up.get_den_mpz_t());
      } else {
        ComputableReal shifted = alpha * ComputableReal::integer(q) +
                                 ComputableReal::rational(mpq_class(1, 2));
        aj = shifted.certified_floor(FloorOptions{64, 1 << 16}).value;
      }
      ok = residual_within(alpha, q, aj, X, delta - static_cast<double>(j + 1));
      a.push_back(std::move(aj));
    }
    if (ok) return SimultaneousApproximation{q, std::move(a)};
  }
  return std::nullopt;
}

}  // namespace floorgcd
