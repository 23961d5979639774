#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "floorgcd/diophantine.hpp"
#include "floorgcd/errors.hpp"

using namespace floorgcd;

namespace {

// Certified check |alpha - p/q| < 1/q^2 via interval refinement.
bool convergent_law_holds(const ComputableReal& alpha, const Convergent& c) {
  mpq_class pq(c.p, c.q);
  pq.canonicalize();
  mpq_class bound(1, c.q * c.q);
  bound.canonicalize();
  ComputableReal diff = alpha - ComputableReal::rational(pq);
  for (long bits = 64; bits <= (1L << 14); bits *= 2) {
    Interval iv = diff.refine(bits);
    Dyadic alo = iv.lo, ahi = iv.hi;
    if (ahi.sign() <= 0) {
      Dyadic t = alo;
      alo = ahi;
      ahi = t;
      mpfr_neg(alo.raw(), alo.raw(), MPFR_RNDN);
      mpfr_neg(ahi.raw(), ahi.raw(), MPFR_RNDN);
    } else if (alo.sign() < 0) {
      // straddles zero: only the upper bound is certified
      mpfr_neg(alo.raw(), alo.raw(), MPFR_RNDN);
      if (cmp(alo, ahi) > 0) ahi = alo;
      alo = Dyadic();
    }
    if (ahi.cmp_q(bound) < 0) return true;
    if (alo.sign() > 0 && alo.cmp_q(bound) >= 0) return false;
  }
  return false;
}

}  // namespace

TEST_CASE("continued_fraction: sqrt(2) = [1; 2, 2, 2]") {
  CFExpansion cf = continued_fraction(ComputableReal::sqrt_of(2), 4);
  CHECK(cf.a0 == 1);
  REQUIRE(cf.partial_quotients.size() == 3);
  for (const auto& a : cf.partial_quotients) CHECK(a == 2);
  REQUIRE(cf.convergents.size() == 4);
  const long ps[4] = {1, 3, 7, 17};
  const long qs[4] = {1, 2, 5, 12};
  for (int i = 0; i < 4; ++i) {
    CHECK(cf.convergents[i].p == ps[i]);
    CHECK(cf.convergents[i].q == qs[i]);
  }
  CHECK_FALSE(cf.terminated);
}

TEST_CASE("continued_fraction: rationals terminate with the Euclidean expansion") {
  CFExpansion cf = continued_fraction(ComputableReal::rational(mpq_class(7, 3)), 10);
  CHECK(cf.a0 == 2);
  REQUIRE(cf.partial_quotients.size() == 1);
  CHECK(cf.partial_quotients[0] == 3);
  CHECK(cf.terminated);
  CHECK(cf.convergents.back().p == 7);
  CHECK(cf.convergents.back().q == 3);

  // negative rational: floor convention keeps quotients positive past a0
  CFExpansion n = continued_fraction(ComputableReal::rational(mpq_class(-7, 2)), 10);
  CHECK(n.a0 == -4);
  CHECK(n.terminated);
  for (const auto& a : n.partial_quotients) CHECK(a >= 1);
}

TEST_CASE("continued_fraction: invariants on sqrt(2), sqrt(3), pi, liouville(10)") {
  std::vector<ComputableReal> alphas = {ComputableReal::sqrt_of(2), ComputableReal::sqrt_of(3),
                                        ComputableReal::pi(), ComputableReal::liouville(10)};
  for (const auto& alpha : alphas) {
    CFExpansion cf = continued_fraction(alpha, 12);
    for (std::size_t i = 0; i < cf.convergents.size(); ++i) {
      const Convergent& c = cf.convergents[i];
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), c.p.get_mpz_t(), c.q.get_mpz_t());
      CHECK(g == 1);
      if (i > 0) CHECK(c.q >= cf.convergents[i - 1].q);
      CHECK(convergent_law_holds(alpha, c));
    }
    // recurrence check
    for (std::size_t i = 2; i < cf.convergents.size(); ++i) {
      const mpz_class& a = cf.partial_quotients[i - 1];
      CHECK(cf.convergents[i].p == a * cf.convergents[i - 1].p + cf.convergents[i - 2].p);
      CHECK(cf.convergents[i].q == a * cf.convergents[i - 1].q + cf.convergents[i - 2].q);
    }
    // convergents alternate around the value: sign of alpha - p/q flips
    int prev_sign = 0;
    for (const Convergent& c : cf.convergents) {
      mpq_class pq(c.p, c.q);
      pq.canonicalize();
      ComputableReal diff = alpha - ComputableReal::rational(pq);
      int sign = 0;
      for (long bits = 64; bits <= (1L << 14) && sign == 0; bits *= 2) {
        Interval iv = diff.refine(bits);
        if (iv.lo.sign() > 0) sign = 1;
        if (iv.hi.sign() < 0) sign = -1;
      }
      REQUIRE(sign != 0);
      if (prev_sign != 0) CHECK(sign == -prev_sign);
      prev_sign = sign;
    }
  }
}

TEST_CASE("continued_fraction: liouville(10) reaches the truncation denominators") {
  CFExpansion cf = continued_fraction(ComputableReal::liouville(10), 10);
  CHECK(cf.a0 == 0);
  bool q9 = false, q100 = false;
  for (const auto& c : cf.convergents) {
    if (c.q == 9) q9 = true;
    if (c.q == 100) {
      q100 = true;
      CHECK(c.p == 11);  // 11/100 = 0.11, the series truncated at j = 2
    }
  }
  CHECK(q9);
  CHECK(q100);
}

TEST_CASE("continued_fraction: non-collapsed integer value raises floor-undecided") {
  ComputableReal two = ComputableReal::sqrt_of(2) * ComputableReal::sqrt_of(2);
  CHECK_THROWS_AS(continued_fraction(two, 3), FloorUndecidedError);
}

TEST_CASE("liouville_witness: sqrt(2) reference cases") {
  auto w3 = liouville_witness(ComputableReal::sqrt_of(2), 3, 1000);
  REQUIRE(w3.has_value());
  CHECK(w3->p == 3);
  CHECK(w3->q == 2);
  // |sqrt(2) - 3/2| = 0.0858... <= 2^-3
  CHECK(w3->err.to_double() == doctest::Approx(0.085786).epsilon(1e-4));
  CHECK(w3->err.cmp_q(mpq_class(1, 8)) <= 0);

  auto w4 = liouville_witness(ComputableReal::sqrt_of(2), 4, 1000000);
  CHECK_FALSE(w4.has_value());
}

TEST_CASE("liouville_witness: liouville(10) has witnesses; (11,100) qualifies for n = 2") {
  ComputableReal l10 = ComputableReal::liouville(10);
  auto w2 = liouville_witness(l10, 2, 1000);
  REQUIRE(w2.has_value());
  CHECK(w2->q > 1);
  CHECK(w2->q <= 1000);
  // err <= q^-2 re-checked from the reported bound
  mpq_class tau2(1, w2->q * w2->q);
  tau2.canonicalize();
  CHECK(w2->err.cmp_q(tau2) <= 0);

  // the truncation witness is valid (series cut at j = 2)
  mpq_class direct = mpq_class(11, 100);
  ComputableReal diff = l10 - ComputableReal::rational(direct);
  Interval iv = diff.refine(80);
  CHECK(iv.lo.sign() >= 0);  // alpha > 0.11
  CHECK(iv.hi.cmp_q(mpq_class(1, 10000)) < 0);

  auto w3 = liouville_witness(l10, 3, 10000000);
  REQUIRE(w3.has_value());
  mpz_class q3 = w3->q;
  mpq_class tau3(1, q3 * q3 * q3);
  tau3.canonicalize();
  CHECK(w3->err.cmp_q(tau3) <= 0);
}

TEST_CASE("liouville_witness: rational alpha always has a witness (printed definition)") {
  ComputableReal r = ComputableReal::rational(mpq_class(22, 7));
  for (unsigned n : {1u, 2u, 5u, 10u}) {
    auto w = liouville_witness(r, n, 1000);
    REQUIRE(w.has_value());
    CHECK(w->q > 1);
    // exact witness: err = 0 at q = 7
    CHECK(w->err.to_double() <= std::pow(w->q.get_d(), -double(n)));
  }
  // integer alpha: scaled representation works
  auto wi = liouville_witness(ComputableReal::integer(5), 7, 100);
  REQUIRE(wi.has_value());
  CHECK(wi->err.to_double() == 0.0);
}

TEST_CASE("irrationality_exponent_estimate: sqrt(2)") {
  ExponentEstimateSequence seq =
      irrationality_exponent_estimate(ComputableReal::sqrt_of(2), 30);
  REQUIRE(seq.estimates.size() >= 10);
  // first reported convergent with q >= 2 is 3/2; 17/12 sits at index 2
  CHECK(seq.estimates[2].q == 12);
  CHECK(seq.estimates[2].estimate == doctest::Approx(2.4188).epsilon(1e-3));
  for (std::size_t i = 6; i < seq.estimates.size(); ++i) {
    CHECK(seq.estimates[i].estimate >= 1.8);
    CHECK(seq.estimates[i].estimate <= 2.2);
  }
}

TEST_CASE("irrationality_exponent_estimate: rational terminates") {
  ExponentEstimateSequence seq =
      irrationality_exponent_estimate(ComputableReal::rational(mpq_class(355, 113)), 10);
  CHECK(seq.terminated);
}

TEST_CASE("weyl_exponent_params: exact reference values") {
  WeylParams p = weyl_exponent_params(2.0, 2);
  CHECK(p.delta_exact == mpq_class(1, 6));
  CHECK(p.rho_exact == mpq_class(1, 8));
  CHECK(p.tau_exact == mpq_class(1, 24));

  WeylParams q = weyl_exponent_params(1.0, 2);
  CHECK(q.delta_exact == mpq_class(1, 4));
  CHECK(q.rho_exact == mpq_class(1, 4));
  CHECK(q.tau_exact == mpq_class(1, 16));

  CHECK_THROWS_AS(weyl_exponent_params(2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(weyl_exponent_params(0.0, 2), std::invalid_argument);
}

TEST_CASE("weyl_exponent_params: hypothesis invariants hold on a grid") {
  for (double omega : {0.5, 1.0, 2.0, 3.5, 10.0}) {
    for (int k = 2; k <= 6; ++k) {
      WeylParams p = weyl_exponent_params(omega, k);
      mpq_class w(omega);
      CHECK(p.delta_exact < mpq_class(1) / (w + 1));
      CHECK(p.rho_exact > 0);
      CHECK(mpq_class(1) / p.tau_exact >= mpq_class(4 * k * (k - 1)));
      CHECK(p.delta_exact > mpq_class(k) * p.tau_exact);
    }
  }
}

TEST_CASE("simultaneous_approx_search: worked examples") {
  std::vector<ComputableReal> half_third = {ComputableReal::rational(mpq_class(1, 2)),
                                            ComputableReal::rational(mpq_class(1, 3))};
  auto r = simultaneous_approx_search(half_third, 100, 0.5);
  REQUIRE(r.has_value());
  CHECK(r->q == 6);
  CHECK(r->a[0] == 3);
  CHECK(r->a[1] == 2);

  std::vector<ComputableReal> zeros = {ComputableReal::integer(0), ComputableReal::integer(0),
                                       ComputableReal::integer(0)};
  auto z = simultaneous_approx_search(zeros, 50, 0.3);
  REQUIRE(z.has_value());
  CHECK(z->q == 1);
  for (const auto& a : z->a) CHECK(a == 0);

  std::vector<ComputableReal> s2 = {ComputableReal::sqrt_of(2)};
  auto w = simultaneous_approx_search(s2, 10000, 0.5);
  REQUIRE(w.has_value());
  CHECK(w->q == 70);
  CHECK(w->a[0] == 99);  // 70 sqrt(2) = 98.9949...
}

TEST_CASE("simultaneous_approx_search: q = 70 is minimal for sqrt(2) (double oracle)") {
  // brute double-precision scan; residuals here are far from the threshold
  const double thr = std::pow(10000.0, -0.5);
  long first = 0;
  for (long q = 1; q <= 100 && first == 0; ++q) {
    double v = q * std::sqrt(2.0);
    double res = std::fabs(v - std::round(v));
    if (res <= thr) first = q;
  }
  CHECK(first == 70);
}
