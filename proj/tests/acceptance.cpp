// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier end-to-end runs live here; unit tests cover the rest.

#include <gmpxx.h>
#include <mpfr.h>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "floorgcd/cli.hpp"
#include "floorgcd/diophantine.hpp"
#include "floorgcd/errors.hpp"
#include "floorgcd/exponential_sums.hpp"
#include "floorgcd/polynomial.hpp"
#include "floorgcd/sieve.hpp"
#include "test_util.hpp"

using namespace floorgcd;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%2d] %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// --------------------------------------------------------------------------

void criterion1_density_linear() {
  RealPolynomial p = RealPolynomial::parse("sqrt(2)*x");
  DensityReport r = coprime_count(p, 1000000);
  const bool pass = std::fabs(r.ratio - 0.6079271) <= 0.01;
  report(1, pass,
         "density (sqrt(2)x, X=1e6): ratio " + fmt(r.ratio) + ", |ratio - 0.6079271| = " +
             fmt(std::fabs(r.ratio - 0.6079271)) + " <= 0.01");
}

void criterion2_density_cubic() {
  RealPolynomial p = RealPolynomial::parse("sqrt(2)*x^3 + sqrt(3)*x + 1/3");
  DensityReport r = coprime_count_at(p, {1000, 10000, 100000});
  const double e3 = std::fabs(r.checkpoints[0].ratio - 0.6079271);
  const double e5 = std::fabs(r.checkpoints[2].ratio - 0.6079271);
  const bool pass = e5 <= 0.02 && e5 < e3;
  report(2, pass,
         "density (cubic, X=1e5): abs_error " + fmt(e5) + " <= 0.02 and " + fmt(e5) +
             " < abs_error(1e3) = " + fmt(e3));
}

void criterion3_degenerate() {
  RealPolynomial x = RealPolynomial::parse("x");
  RealPolynomial xh = RealPolynomial::parse("x + 1/2");
  bool pass = true;
  for (std::int64_t X : {1, 2, 10, 1000, 100000}) {
    pass = pass && coprime_count(x, X).count == 1;
    pass = pass && coprime_count(xh, X).count == 1;
  }
  report(3, pass, "rational counterexamples: S(X) = 1 exactly for P = x and P = x + 1/2");
}

void criterion4_oracle_equivalence() {
  const std::vector<std::string> polys = {
      "sqrt(2)*x", "sqrt(2)*x^3 + sqrt(3)*x + 1/3", "x + 1/2", "pi*x^2 + e*x",
      "liouville(2)*x^2 - (1/7)*x + 3"};
  const std::int64_t X = 10000;
  bool pass = true;
  std::string bad;
  for (const std::string& text : polys) {
    RealPolynomial p = RealPolynomial::parse(text);
    // naive per-n loop: per-value expression trees, no scanner, no cache
    std::vector<mpz_class> floors(static_cast<std::size_t>(X) + 1);
    std::int64_t oracle_coprime = 0;
    for (std::int64_t n = 1; n <= X; ++n) {
      floors[static_cast<std::size_t>(n)] = p.eval(n).certified_floor().value;
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), mpz_class(n).get_mpz_t(),
              floors[static_cast<std::size_t>(n)].get_mpz_t());
      if (g == 1) ++oracle_coprime;
    }
    if (coprime_count(p, X).count != oracle_coprime) {
      pass = false;
      bad = text + " (coprime)";
      break;
    }
    for (std::int64_t d = 1; d <= 50; ++d) {
      std::int64_t oracle_div = 0;
      for (std::int64_t n = d; n <= X; n += d)
        if (mpz_divisible_ui_p(floors[static_cast<std::size_t>(n)].get_mpz_t(),
                               static_cast<unsigned long>(d)))
          ++oracle_div;
      if (divisor_count(p, d, X).count != oracle_div) {
        pass = false;
        bad = text + " (d=" + std::to_string(d) + ")";
        break;
      }
    }
    if (!pass) break;
  }
  report(4, pass,
         pass ? "oracle equivalence: 5 polynomials x X=1e4 x d=1..50 agree exactly"
              : "oracle equivalence failed at " + bad);
}

void criterion5_legendre() {
  bool pass = true;
  std::string bad;
  struct Case {
    const char* poly;
    std::int64_t X;
  };
  for (const Case& c : {Case{"sqrt(2)*x", 10000}, Case{"sqrt(2)*x^3 + sqrt(3)*x + 1/3", 2000},
                        Case{"x + 1/2", 137}}) {
    RealPolynomial p = RealPolynomial::parse(c.poly);
    for (double z : {2.0, 3.0, 5.0, 7.0, 11.0, 13.0}) {
      const std::int64_t lhs = sifted_count(p, c.X, z);
      const std::int64_t rhs = legendre_expansion(p, c.X, z).value;
      if (lhs != rhs) {
        pass = false;
        bad = std::string(c.poly) + " z=" + fmt(z);
      }
    }
  }
  report(5, pass,
         pass ? "Legendre identity: sifted = Moebius expansion, z in {2,3,5,7,11,13}, X <= 1e4"
              : "Legendre identity failed at " + bad);
}

void criterion6_et_domination() {
  bool pass = true;
  double worst_margin = 1e300;
  for (const char* text : {"sqrt(2)*x", "sqrt(2)*x^2"}) {
    RealPolynomial p = RealPolynomial::parse(text);
    for (std::int64_t X : {1000, 10000}) {
      for (std::int64_t d = 1; d <= 10; ++d) {
        const std::int64_t N = X / d;
        std::vector<double> mags(101, 0.0);
        for (std::int64_t m = 1; m <= 100; ++m)
          mags[static_cast<std::size_t>(m)] = weyl_sum(p, d, m, N).magnitude;
        const double dev = divisor_count(p, d, X).deviation;
        for (std::int64_t T : {10, 100}) {
          double sum = 0;
          for (std::int64_t m = 1; m <= T; ++m)
            sum += mags[static_cast<std::size_t>(m)] / static_cast<double>(m);
          const double bound =
              (static_cast<double>(X) / static_cast<double>(d)) / (static_cast<double>(T) + 1.0) +
              3.0 * sum + 1.0;
          if (dev > bound) pass = false;
          worst_margin = std::min(worst_margin, bound - dev);
        }
      }
    }
  }
  report(6, pass,
         "ET domination over {sqrt(2)x, sqrt(2)x^2} x d<=10 x X in {1e3,1e4} x T in {10,100}; "
         "smallest bound - deviation = " +
             fmt(worst_margin));
}

void criterion7_weyl_decay() {
  WeylParams params = weyl_exponent_params(2.0, 2);
  RealPolynomial p = RealPolynomial::parse("sqrt(2)*x^2");
  bool pass = true;
  double worst = -1e300;
  for (std::int64_t X : {1000, 10000, 100000}) {
    const double mmax = std::pow(static_cast<double>(X), params.rho);
    for (std::int64_t m = 1; m <= static_cast<std::int64_t>(mmax); ++m) {
      const double e = weyl_sum(p, 1, m, X).exponent;
      worst = std::max(worst, e);
      if (e > 1.0 - params.tau) pass = false;
    }
  }
  // resonant negative control: P = x keeps exponent 1 for every m
  RealPolynomial x = RealPolynomial::parse("x");
  for (std::int64_t m = 1; m <= 4; ++m) {
    const double e = weyl_sum(x, 1, m, 100000).exponent;
    if (std::fabs(e - 1.0) > 1e-12) pass = false;
  }
  report(7, pass,
         "Weyl decay (omega=2, k=2): exponent <= 1 - tau = " + fmt(1.0 - params.tau) +
             " for m <= X^rho at X in {1e3,1e4,1e5} (max seen " + fmt(worst) +
             "); resonant P = x pinned at exponent 1");
}

void criterion8_diophantine_suite() {
  bool pass = true;
  std::string notes;

  // convergent law over 30 terms of sqrt(2), sqrt(3), pi
  auto law = [](const ComputableReal& alpha, const Convergent& c) {
    mpq_class pq(c.p, c.q);
    pq.canonicalize();
    mpq_class bound(1, c.q * c.q);
    bound.canonicalize();
    ComputableReal diff = alpha - ComputableReal::rational(pq);
    for (long bits = 64; bits <= (1L << 15); bits *= 2) {
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
      if (ahi.cmp_q(bound) < 0) return true;
      if (alo.sign() > 0 && alo.cmp_q(bound) >= 0) return false;
    }
    return false;
  };
  for (const ComputableReal& alpha :
       {ComputableReal::sqrt_of(2), ComputableReal::sqrt_of(3), ComputableReal::pi()}) {
    CFExpansion cf = continued_fraction(alpha, 30);
    if (cf.convergents.size() != 30) pass = false;
    for (const Convergent& c : cf.convergents)
      if (!law(alpha, c)) pass = false;
  }

  // sqrt(2) irrationality-exponent estimates settle into [1.8, 2.2]
  ExponentEstimateSequence s2 = irrationality_exponent_estimate(ComputableReal::sqrt_of(2), 30);
  for (std::size_t i = 6; i < s2.estimates.size(); ++i)
    if (s2.estimates[i].estimate < 1.8 || s2.estimates[i].estimate > 2.2) pass = false;

  // liouville(10): estimate reaches 5 at the truncation-4 convergent
  // (q = 10^24; exact value is 5 - O(10^-602), i.e. 5 at reporting precision)
  // and exceeds 5 strictly by the truncation-5 convergent (q = 10^120).
  ComputableReal l10 = ComputableReal::liouville(10);
  ExponentEstimateSequence sl = irrationality_exponent_estimate(l10, 32);
  mpz_class q24, q120;
  mpz_ui_pow_ui(q24.get_mpz_t(), 10, 24);
  mpz_ui_pow_ui(q120.get_mpz_t(), 10, 120);
  double est24 = 0, est120 = 0;
  for (const auto& e : sl.estimates) {
    if (e.q == q24) est24 = e.estimate;
    if (e.q == q120) est120 = e.estimate;
  }
  if (!(est24 >= 5.0 - 1e-9)) pass = false;
  if (!(est120 > 5.0)) pass = false;
  notes += "est(10^24) = " + fmt(est24) + ", est(10^120) = " + fmt(est120);

  // witness searches
  if (liouville_witness(ComputableReal::sqrt_of(2), 4, 1000000).has_value()) pass = false;
  mpz_class q2max, q3max;
  mpz_ui_pow_ui(q2max.get_mpz_t(), 10, 3);   // 10^(2!+1)
  mpz_ui_pow_ui(q3max.get_mpz_t(), 10, 7);   // 10^(3!+1)
  auto w2 = liouville_witness(l10, 2, q2max);
  auto w3 = liouville_witness(l10, 3, q3max);
  if (!w2.has_value() || !w3.has_value()) pass = false;

  report(8, pass,
         "diophantine suite: convergent law (30 terms, sqrt2/sqrt3/pi), sqrt(2) estimates in "
         "[1.8,2.2] beyond index 5, liouville(10) " +
             notes + ", witness(sqrt2,4,1e6) = none, liouville witnesses exist for n = 2, 3");
}

void criterion9_floor_certification() {
  bool pass = true;
  int checked = 0, skipped = 0, rational_checked = 0;
  mpfr_t ref, dist;
  mpfr_init2(ref, 256);
  mpfr_init2(dist, 256);

  testutil::ExprGen irr(987654321, false);
  testutil::ExprGen rat(1357911, true);
  std::mt19937_64 nrng(24680);

  for (int i = 0; i < 10000; ++i) {
    const bool rational_only = (i % 3 == 0);
    auto pair = rational_only ? rat.gen(3) : irr.gen(3);
    const long n = static_cast<long>(nrng() % 2000001) - 1000000;
    ComputableReal x = pair.value * ComputableReal::integer(n);
    auto mirror = std::make_shared<testutil::TExpr>();
    mirror->kind = testutil::TExpr::kProd;
    mirror->a = pair.mirror;
    mirror->b = testutil::t_rat(mpq_class(n));

    if (rational_only) {
      mpq_class expect;
      if (!testutil::ref_exact_rational(*mirror, &expect)) {
        pass = false;
        break;
      }
      FloorResult f = x.certified_floor();
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), expect.get_num_mpz_t(), expect.get_den_mpz_t());
      if (f.value != fl || f.exact_integer != (expect.get_den() == 1) || f.precision_used != 0) {
        pass = false;
        break;
      }
      ++rational_checked;
      continue;
    }

    testutil::ref_eval(*mirror, 256, ref);
    mpz_class nearest;
    mpfr_get_z(nearest.get_mpz_t(), ref, MPFR_RNDN);
    mpfr_sub_z(dist, ref, nearest.get_mpz_t(), MPFR_RNDN);
    mpfr_abs(dist, dist, MPFR_RNDN);
    const bool resolvable = mpfr_cmp_d(dist, 0x1p-200) >= 0;
    try {
      FloorResult f = x.certified_floor();
      if (resolvable) {
        mpz_class expect;
        mpfr_get_z(expect.get_mpz_t(), ref, MPFR_RNDD);
        if (f.value != expect) {
          pass = false;
          break;
        }
        ++checked;
      } else {
        ++skipped;
      }
    } catch (const FloorUndecidedError&) {
      if (resolvable) {
        pass = false;  // the reference resolved but certification gave up
        break;
      }
      ++skipped;
    }
  }
  mpfr_clears(ref, dist, nullptr);
  report(9, pass,
         "floor certification: 10^4 random (expression, n) pairs vs 256-bit reference (" +
             std::to_string(checked) + " checked, " + std::to_string(rational_checked) +
             " exact rational, " + std::to_string(skipped) + " near-integer skipped)");
}

void criterion10_hardy_ramanujan() {
  const std::int64_t X = 10000;
  // trial-division brute-force oracle
  auto omega_trial = [](std::int64_t n) {
    int w = 0;
    for (std::int64_t p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        ++w;
        while (n % p == 0) n /= p;
      }
    }
    return n > 1 ? w + 1 : w;
  };
  std::int64_t oracle = 0;
  for (std::int64_t n = 3; n <= X; ++n) {
    const double ll = std::log(std::log(static_cast<double>(n)));
    if (std::fabs(omega_trial(n) - ll) > std::pow(ll, 2.0 / 3.0)) ++oracle;
  }
  OmegaDeviationReport r = omega_deviation_count(X, 3);
  bool pass = (r.count == oracle);
  std::vector<std::uint8_t> spf = omega_table(X);
  for (std::int64_t n = 2; n <= X; ++n)
    if (int(spf[static_cast<std::size_t>(n)]) != omega_trial(n)) pass = false;
  report(10, pass,
         "Hardy-Ramanujan: deviation count at X=1e4 = " + std::to_string(r.count) +
             " matches trial division; omega cross-checked for all n <= 1e4");
}

void criterion11_determinism() {
  bool pass = true;
  auto run_density = [&](const std::string& poly, std::int64_t xmax, unsigned threads,
                         const std::string& out) {
    ExperimentConfig c;
    c.subcommand = "density";
    c.poly = poly;
    c.xmax = xmax;
    c.checkpoints = 6;
    c.threads = threads;
    c.out = out;
    return run(c);
  };
  if (run_density("sqrt(2)*x", 1000000, 1, "/tmp/fg_acc_c1_t1.csv") != 0) pass = false;
  if (run_density("sqrt(2)*x", 1000000, 4, "/tmp/fg_acc_c1_t4.csv") != 0) pass = false;
  if (run_density("sqrt(2)*x^3 + sqrt(3)*x + 1/3", 100000, 1, "/tmp/fg_acc_c2_t1.csv") != 0)
    pass = false;
  if (run_density("sqrt(2)*x^3 + sqrt(3)*x + 1/3", 100000, 4, "/tmp/fg_acc_c2_t4.csv") != 0)
    pass = false;
  const std::string a1 = testutil::slurp("/tmp/fg_acc_c1_t1.csv");
  const std::string a4 = testutil::slurp("/tmp/fg_acc_c1_t4.csv");
  const std::string b1 = testutil::slurp("/tmp/fg_acc_c2_t1.csv");
  const std::string b4 = testutil::slurp("/tmp/fg_acc_c2_t4.csv");
  if (a1.empty() || a1 != a4) pass = false;
  if (b1.empty() || b1 != b4) pass = false;
  report(11, pass, "determinism: criteria 1-2 reports byte-identical for threads in {1, 4}");
}

}  // namespace

int main() {
  criterion1_density_linear();
  criterion2_density_cubic();
  criterion3_degenerate();
  criterion4_oracle_equivalence();
  criterion5_legendre();
  criterion6_et_domination();
  criterion7_weyl_decay();
  criterion8_diophantine_suite();
  criterion9_floor_certification();
  criterion10_hardy_ramanujan();
  criterion11_determinism();
  if (g_failures == 0) {
    std::printf("ACCEPTANCE: 11/11 criteria passed\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
