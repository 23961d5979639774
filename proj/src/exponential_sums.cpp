#include "floorgcd/exponential_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "floorgcd/parallel.hpp"

namespace floorgcd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::int64_t kSumBlock = 1 << 14;

// Neumaier-compensated accumulator.
struct Kahan {
  double sum = 0;
  double comp = 0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

WeylSumValue sum_phases(const RealPolynomial& phase_poly, std::int64_t X, const SumOptions& opt) {
  WeylSumValue out;
  out.X = X;
  if (X < 1) throw std::invalid_argument("weyl sum requires X >= 1");

  FloorScan scan(phase_poly, X, opt.scan);
  const std::size_t nblocks = block_count(1, X, kSumBlock);
  std::vector<double> re(nblocks), im(nblocks);
  for_each_block(1, X, kSumBlock, opt.threads, [&](const BlockRange& b) {
    Kahan sre, sim;
    scan.phases(b.first, b.last, [&](std::int64_t, double f) {
      sre.add(std::cos(kTwoPi * f));
      sim.add(std::sin(kTwoPi * f));
    });
    re[b.index] = sre.value();
    im[b.index] = sim.value();
  });
  // fixed block partition + in-order combine: thread-count invariant
  Kahan sre, sim;
  for (std::size_t i = 0; i < nblocks; ++i) {
    sre.add(re[i]);
    sim.add(im[i]);
  }
  out.re = sre.value();
  out.im = sim.value();
  out.magnitude = std::hypot(out.re, out.im);
  out.exponent = sum_exponent(out);
  return out;
}

}  // namespace

double sum_exponent(const WeylSumValue& s) {
  if (s.magnitude <= 0) return -std::numeric_limits<double>::infinity();
  if (s.X <= 1) return std::numeric_limits<double>::quiet_NaN();
  return std::log(s.magnitude) / std::log(static_cast<double>(s.X));
}

WeylSumValue weyl_sum(const RealPolynomial& P, std::int64_t d, std::int64_t m, std::int64_t X,
                      const SumOptions& opt) {
  if (d < 1 || m < 1) throw std::invalid_argument("weyl_sum requires positive d and m");
  RealPolynomial q = P.dilate(d, m);
  std::vector<ComputableReal> coeffs;
  coeffs.reserve(static_cast<std::size_t>(q.degree()) + 1);
  coeffs.push_back(ComputableReal::integer(0));  // constant term dropped
  for (int j = 1; j <= q.degree(); ++j) coeffs.push_back(q.coefficient(j));
  WeylSumValue out = sum_phases(RealPolynomial(std::move(coeffs)), X, opt);
  out.m = m;
  out.d = d;
  return out;
}

WeylSumValue weyl_sum_general(const std::vector<ComputableReal>& alphas, std::int64_t X,
                              const SumOptions& opt) {
  if (alphas.empty()) throw std::invalid_argument("weyl_sum_general requires coefficients");
  std::vector<ComputableReal> coeffs;
  coeffs.reserve(alphas.size() + 1);
  coeffs.push_back(ComputableReal::integer(0));
  for (const auto& a : alphas) coeffs.push_back(a);
  return sum_phases(RealPolynomial(std::move(coeffs)), X, opt);
}

double star_discrepancy(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("star_discrepancy requires points");
  for (double p : points)
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("points must lie in [0,1)");
  std::sort(points.begin(), points.end());
  const double n = static_cast<double>(points.size());
  double d = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = points[i];
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - u);
    d = std::max(d, u - static_cast<double>(i) / n);
  }
  return d;
}

DiscrepancyReport erdos_turan_bound(const RealPolynomial& P, std::int64_t d, std::int64_t X,
                                    std::int64_t T, const SumOptions& opt) {
  if (d < 1 || T < 1) throw std::invalid_argument("erdos_turan_bound requires d >= 1, T >= 1");
  const std::int64_t N = X / d;
  if (N < 1) throw std::invalid_argument("erdos_turan_bound requires X/d >= 1");

  DiscrepancyReport rep;
  rep.N = N;
  rep.T = T;

  // Point sequence {P(dx)/d mod 1}: the full dilated value, constant term
  // included (it shifts the points, so it matters for the discrepancy).
  RealPolynomial q = P.dilate(d, 1);
  FloorScan scan(q, N, opt.scan);
  std::vector<double> pts(static_cast<std::size_t>(N));
  for_each_block(1, N, kSumBlock, opt.threads, [&](const BlockRange& b) {
    scan.phases(b.first, b.last,
                [&](std::int64_t x, double f) { pts[static_cast<std::size_t>(x - 1)] = f; });
  });
  rep.d_star = star_discrepancy(std::move(pts));

  Kahan terms;
  rep.weyl_terms.reserve(static_cast<std::size_t>(T));
  for (std::int64_t m = 1; m <= T; ++m) {
    WeylSumValue s = weyl_sum(P, d, m, N, opt);
    double term = s.magnitude / static_cast<double>(m);
    rep.weyl_terms.push_back(term);
    terms.add(term);
  }
  rep.weyl_term_sum = terms.value();
  rep.et_bound = 1.0 / (static_cast<double>(T) + 1.0) +
                 3.0 * rep.weyl_term_sum / static_cast<double>(N);
  return rep;
}

}  // namespace floorgcd
