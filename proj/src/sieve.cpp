#include "floorgcd/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "floorgcd/errors.hpp"
#include "floorgcd/parallel.hpp"

namespace floorgcd {

namespace {

constexpr std::int64_t kCountBlock = 1 << 15;
constexpr std::int64_t kSpfLimit = 10000000;       // linear SPF sieve cap
constexpr double kSieveBoundLimit = 1e8;

std::int64_t sieve_bound(double z) {
  if (z < 0) throw std::invalid_argument("sieve level must be nonnegative");
  if (z > kSieveBoundLimit) throw GuardError("sieve level exceeds the 1e8 guard");
  // primes strictly below z
  double b = std::ceil(z) - 1;
  if (std::ceil(z) == z) b = z - 1;
  return b < 2 ? 1 : static_cast<std::int64_t>(b);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  return std::gcd(a, b);
}

}  // namespace

std::vector<std::int64_t> primes_below(double z) {
  const std::int64_t limit = sieve_bound(z);  // largest candidate
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t p = 2; p <= limit; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    primes.push_back(p);
    for (std::int64_t m = p * p; m <= limit; m += p) composite[static_cast<std::size_t>(m)] = true;
  }
  return primes;
}

mpz_class primorial(double z) {
  mpz_class out = 1;
  for (std::int64_t p : primes_below(z)) out *= p;
  return out;
}

ExactReal mertens_product(double z) {
  mpz_class num = 1, den = 1;
  for (std::int64_t p : primes_below(z)) {
    num *= (p - 1);
    den *= p;
  }
  mpq_class q(num, den);
  q.canonicalize();
  return ExactReal{q, q.get_d()};
}

ExactReal zeta2_partial(double z) {
  mpz_class num = 1, den = 1;
  for (std::int64_t p : primes_below(z)) {
    num *= (p * p - 1);
    den *= (p * p);
  }
  mpq_class q(num, den);
  q.canonicalize();
  return ExactReal{q, q.get_d()};
}

SieveConfig choose_z(std::int64_t X, double A, std::optional<double> override_z, double epsilon) {
  if (!(A > 0)) throw std::invalid_argument("choose_z requires A > 0");
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0,1)");
  SieveConfig cfg;
  cfg.A = A;
  cfg.c = 1.0 / (2.0 * (A + 1.0));
  cfg.epsilon = epsilon;
  cfg.explicit_z_override = override_z;
  const double ee = std::exp(std::exp(1.0));
  if (static_cast<double>(X) <= ee) {
    if (!override_z)
      throw std::invalid_argument("choose_z requires X > e^e; pass an explicit z override");
    cfg.z = std::max(2.0, *override_z);
    return cfg;
  }
  const double lx = std::log(static_cast<double>(X));
  cfg.z = std::max(2.0, std::exp(lx * cfg.c / std::log(lx)));
  return cfg;
}

// ---------------------------------------------------------------------------
// Counting engine.

namespace {

// Runs fn(x, floor) over [first, last] multiples-of-stride in fixed blocks,
// accumulating int64 per-block results combined in index order.
template <class PerBlock>
std::int64_t blocked_count(std::int64_t items, unsigned threads, const PerBlock& per_block) {
  if (items < 1) return 0;
  const std::size_t nblocks = block_count(1, items, kCountBlock);
  std::vector<std::int64_t> partial(nblocks, 0);
  for_each_block(1, items, kCountBlock, threads,
                 [&](const BlockRange& b) { partial[b.index] = per_block(b); });
  std::int64_t total = 0;
  for (std::int64_t c : partial) total += c;
  return total;
}

std::int64_t coprime_in_range(const FloorScan& scan, std::int64_t first, std::int64_t last) {
  std::int64_t count = 0;
  if (scan.int64_safe()) {
    scan.floors(first, last, 1, [&](std::int64_t x, std::int64_t f) {
      if (gcd64(x, f) == 1) ++count;
    });
  } else {
    scan.floors_big(first, last, 1, [&](std::int64_t x, const mpz_class& f) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), mpz_class(x).get_mpz_t(), f.get_mpz_t());
      if (g == 1) ++count;
    });
  }
  return count;
}

}  // namespace

DensityReport coprime_count_at(const RealPolynomial& P, const std::vector<std::int64_t>& xs,
                               const CountOptions& opt) {
  if (xs.empty()) throw std::invalid_argument("coprime_count_at requires checkpoints");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 1 || (i > 0 && xs[i] <= xs[i - 1]))
      throw std::invalid_argument("checkpoints must be ascending and >= 1");
  }
  const std::int64_t X = xs.back();
  FloorScan scan(P, X, opt.scan);

  DensityReport rep;
  rep.X = X;
  std::int64_t running = 0;
  std::int64_t prev = 0;
  for (std::int64_t cx : xs) {
    const std::int64_t seg_first = prev + 1;
    const std::int64_t items = cx - prev;
    running += blocked_count(items, opt.threads, [&](const BlockRange& b) {
      return coprime_in_range(scan, seg_first + b.first - 1, seg_first + b.last - 1);
    });
    rep.checkpoints.push_back(
        {cx, running, static_cast<double>(running) / static_cast<double>(cx)});
    prev = cx;
  }
  rep.count = running;
  rep.ratio = static_cast<double>(running) / static_cast<double>(X);
  rep.abs_error = std::fabs(rep.ratio - rep.target);
  return rep;
}

DensityReport coprime_count(const RealPolynomial& P, std::int64_t X, int checkpoints,
                            const CountOptions& opt) {
  if (X < 1) throw std::invalid_argument("coprime_count requires X >= 1");
  if (checkpoints < 1) checkpoints = 1;
  // geometric spacing, ratio 2, ending at X
  std::vector<std::int64_t> xs;
  std::int64_t v = X;
  for (int i = 0; i < checkpoints && v >= 1; ++i) {
    xs.push_back(v);
    if (v == 1) break;
    v /= 2;
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return coprime_count_at(P, xs, opt);
}

DivisorCount divisor_count(const RealPolynomial& P, std::int64_t d, std::int64_t X,
                           const CountOptions& opt) {
  if (d < 1) throw std::invalid_argument("divisor_count requires d >= 1");
  DivisorCount out;
  out.d = d;
  out.X = X;
  out.expected = static_cast<double>(X) / (static_cast<double>(d) * static_cast<double>(d));
  const std::int64_t n_multiples = X / d;
  if (n_multiples >= 1) {
    FloorScan scan(P, X, opt.scan);
    if (scan.int64_safe()) {
      out.count = blocked_count(n_multiples, opt.threads, [&](const BlockRange& b) {
        std::int64_t c = 0;
        scan.floors(b.first * d, b.last * d, d, [&](std::int64_t, std::int64_t f) {
          if (f % d == 0) ++c;
        });
        return c;
      });
    } else {
      out.count = blocked_count(n_multiples, opt.threads, [&](const BlockRange& b) {
        std::int64_t c = 0;
        scan.floors_big(b.first * d, b.last * d, d, [&](std::int64_t, const mpz_class& f) {
          if (mpz_divisible_ui_p(f.get_mpz_t(), static_cast<unsigned long>(d))) ++c;
        });
        return c;
      });
    }
  }
  out.deviation = std::fabs(static_cast<double>(out.count) - out.expected);
  return out;
}

std::int64_t sifted_count(const RealPolynomial& P, std::int64_t X, double z,
                          const CountOptions& opt) {
  if (X < 1) throw std::invalid_argument("sifted_count requires X >= 1");
  const std::vector<std::int64_t> primes = primes_below(z);
  FloorScan scan(P, X, opt.scan);
  if (scan.int64_safe()) {
    return blocked_count(X, opt.threads, [&](const BlockRange& b) {
      std::int64_t c = 0;
      scan.floors(b.first, b.last, 1, [&](std::int64_t x, std::int64_t f) {
        for (std::int64_t p : primes) {
          if (x % p == 0 && f % p == 0) return;
        }
        ++c;
      });
      return c;
    });
  }
  return blocked_count(X, opt.threads, [&](const BlockRange& b) {
    std::int64_t c = 0;
    scan.floors_big(b.first, b.last, 1, [&](std::int64_t x, const mpz_class& f) {
      for (std::int64_t p : primes) {
        if (x % p == 0 && mpz_divisible_ui_p(f.get_mpz_t(), static_cast<unsigned long>(p))) return;
      }
      ++c;
    });
    return c;
  });
}

LegendreExpansion legendre_expansion(const RealPolynomial& P, std::int64_t X, double z,
                                     const CountOptions& opt, std::size_t divisor_cap) {
  if (X < 1) throw std::invalid_argument("legendre_expansion requires X >= 1");
  const std::vector<std::int64_t> primes = primes_below(z);
  if (primes.size() >= 63 || (1ull << primes.size()) > divisor_cap)
    throw GuardError("squarefree divisor count 2^pi(z) exceeds the configured cap");

  // Squarefree divisors of the primorial as (d, mu) pairs, d <= X.
  std::vector<LegendreTerm> terms;
  const std::uint64_t n_subsets = 1ull << primes.size();
  for (std::uint64_t mask = 0; mask < n_subsets; ++mask) {
    mpz_class d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask & (1ull << i)) {
        d *= primes[i];
        ++bits;
      }
    }
    if (d > X) continue;  // A_d is empty past X
    terms.push_back({static_cast<std::int64_t>(d.get_si()), (bits % 2 == 0) ? 1 : -1, 0});
  }
  std::sort(terms.begin(), terms.end(),
            [](const LegendreTerm& a, const LegendreTerm& b) { return a.d < b.d; });

  LegendreExpansion out;
  for (LegendreTerm& t : terms) {
    t.count = divisor_count(P, t.d, X, opt).count;
    out.value += t.mu * t.count;
  }
  out.terms = std::move(terms);
  return out;
}

// ---------------------------------------------------------------------------
// omega(n).

namespace {

std::vector<std::uint8_t> omega_by_spf(std::int64_t X) {
  // linear sieve: spf[n] = smallest prime factor
  std::vector<std::int32_t> spf(static_cast<std::size_t>(X) + 1, 0);
  std::vector<std::int32_t> primes;
  for (std::int64_t i = 2; i <= X; ++i) {
    if (spf[static_cast<std::size_t>(i)] == 0) {
      spf[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
      primes.push_back(static_cast<std::int32_t>(i));
    }
    for (std::int32_t p : primes) {
      if (p > spf[static_cast<std::size_t>(i)] || i * p > X) break;
      spf[static_cast<std::size_t>(i * p)] = p;
    }
  }
  std::vector<std::uint8_t> omega(static_cast<std::size_t>(X) + 1, 0);
  for (std::int64_t n = 2; n <= X; ++n) {
    std::int64_t m = n / spf[static_cast<std::size_t>(n)];
    // distinct-prime count: drop repeated smallest factors
    while (m % spf[static_cast<std::size_t>(n)] == 0) m /= spf[static_cast<std::size_t>(n)];
    omega[static_cast<std::size_t>(n)] =
        static_cast<std::uint8_t>(omega[static_cast<std::size_t>(m)] + 1);
  }
  return omega;
}

// Segment [lo, hi]: counts distinct prime factors by marking multiples of the
// primes up to sqrt(hi) and crediting the oversized leftover.
void omega_segment(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& primes,
                   std::vector<std::uint8_t>& omega_out, std::vector<std::int64_t>& rem) {
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  omega_out.assign(len, 0);
  rem.resize(len);
  for (std::size_t i = 0; i < len; ++i) rem[i] = lo + static_cast<std::int64_t>(i);
  for (std::int64_t p : primes) {
    if (p * p > hi) break;
    std::int64_t first = ((lo + p - 1) / p) * p;
    for (std::int64_t m = first; m <= hi; m += p) {
      std::size_t i = static_cast<std::size_t>(m - lo);
      ++omega_out[i];
      while (rem[i] % p == 0) rem[i] /= p;
    }
  }
  for (std::size_t i = 0; i < len; ++i)
    if (rem[i] > 1) ++omega_out[i];
}

}  // namespace

std::vector<std::uint8_t> omega_table(std::int64_t X) {
  if (X < 0) throw std::invalid_argument("omega_table requires X >= 0");
  if (X > kSpfLimit) throw GuardError("omega_table is capped at 1e7; use omega_deviation_count");
  if (X < 2) return std::vector<std::uint8_t>(static_cast<std::size_t>(X) + 1, 0);
  return omega_by_spf(X);
}

OmegaDeviationReport omega_deviation_count(std::int64_t X, std::int64_t n_min) {
  if (n_min < 3) throw std::invalid_argument("omega_deviation_count requires n_min >= 3");
  if (X < n_min) throw std::invalid_argument("omega_deviation_count requires X >= n_min");
  OmegaDeviationReport rep;
  rep.X = X;
  rep.n_min = n_min;

  auto deviant = [](std::int64_t n, int w) {
    const double ll = std::log(std::log(static_cast<double>(n)));
    return std::fabs(static_cast<double>(w) - ll) > std::pow(ll, 2.0 / 3.0);
  };

  if (X <= kSpfLimit) {
    std::vector<std::uint8_t> omega = omega_table(X);
    for (std::int64_t n = n_min; n <= X; ++n)
      if (deviant(n, omega[static_cast<std::size_t>(n)])) ++rep.count;
  } else {
    const double zr = std::sqrt(static_cast<double>(X)) + 2;
    const std::vector<std::int64_t> primes = primes_below(zr);
    constexpr std::int64_t kSeg = 1 << 22;
    std::vector<std::uint8_t> omega;
    std::vector<std::int64_t> rem;
    for (std::int64_t lo = n_min; lo <= X; lo += kSeg) {
      const std::int64_t hi = std::min(X, lo + kSeg - 1);
      omega_segment(lo, hi, primes, omega, rem);
      for (std::int64_t n = lo; n <= hi; ++n)
        if (deviant(n, omega[static_cast<std::size_t>(n - lo)])) ++rep.count;
    }
  }
  rep.fraction = static_cast<double>(rep.count) / static_cast<double>(X - n_min + 1);
  return rep;
}

}  // namespace floorgcd
