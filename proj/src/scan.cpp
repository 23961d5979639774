#include "floorgcd/scan.hpp"

#include <cmath>
#include <stdexcept>

#include "floorgcd/errors.hpp"

namespace floorgcd {

namespace {

constexpr double kWrapEps = 0x1p-50;

// floor(a / b) for b > 0
std::int64_t floordiv64(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

struct MpfrReg {
  mpfr_t v;
  explicit MpfrReg(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~MpfrReg() { mpfr_clear(v); }
  MpfrReg(const MpfrReg&) = delete;
  MpfrReg& operator=(const MpfrReg&) = delete;
};

}  // namespace

FloorScan::FloorScan(const RealPolynomial& p, std::int64_t x_max, ScanOptions opt)
    : poly_(p), opt_(opt), x_max_(std::max<std::int64_t>(x_max, 1)) {
  const int k = poly_.degree();
  if (poly_.all_rational()) {
    // Common denominator D: P(x) = M(x)/D with integer M; floors are exact
    // fdiv and fractional parts are exact remainders.
    denom_ = 1;
    for (int j = 0; j <= k; ++j)
      denom_ = lcm(denom_, mpz_class(poly_.coefficient(j).as_rational()->get_den()));
    int_coeffs_.resize(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
      const mpq_class* q = poly_.coefficient(j).as_rational();
      int_coeffs_[static_cast<std::size_t>(j)] = q->get_num() * (denom_ / q->get_den());
    }
    // Magnitude bound sum_j |a_j| x_max^j on the Horner partials.
    mpz_class bound = 0, xp = 1;
    for (int j = 0; j <= k; ++j) {
      bound += abs(int_coeffs_[static_cast<std::size_t>(j)]) * xp;
      xp *= x_max_;
    }
    if (mpz_sizeinbase(bound.get_mpz_t(), 2) <= 61 && denom_.fits_slong_p()) {
      mode_ = Mode::kExactInt64;
      int64_safe_ = true;
      denom64_ = denom_.get_si();
      int_coeffs64_.resize(int_coeffs_.size());
      for (std::size_t j = 0; j < int_coeffs_.size(); ++j)
        int_coeffs64_[j] = int_coeffs_[j].get_si();
    } else {
      mode_ = Mode::kExactBig;
      mpz_class floor_bound = bound / denom_ + 1;
      int64_safe_ = mpz_sizeinbase(floor_bound.get_mpz_t(), 2) <= 61;
    }
    return;
  }

  mode_ = Mode::kInterval;
  // Working precision: guard bits plus headroom for the value magnitude and
  // the O(k) directed-rounding steps.
  double log2x = std::log2(static_cast<double>(x_max_) + 1.0);
  double log2mag = 1.0;
  for (int j = 0; j <= k; ++j) {
    Interval ci = poly_.coefficient(j).refine(32);
    double ub = std::max(std::fabs(ci.lo.to_double()), std::fabs(ci.hi.to_double())) + 1.0;
    log2mag = std::max(log2mag, std::log2(ub) + j * log2x);
  }
  prec_ = static_cast<mpfr_prec_t>(opt_.guard_bits + static_cast<long>(log2mag) + 16 +
                                   2 * (k + 1));
  // Coefficient enclosures tight enough that sum_j width_j x_max^j stays below
  // the guard budget.
  coeff_lo_.reserve(static_cast<std::size_t>(k) + 1);
  coeff_hi_.reserve(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    long width_bits = opt_.guard_bits + 4 + static_cast<long>(j * log2x) + (k + 1);
    Interval ci = poly_.coefficient(j).refine(width_bits);
    Dyadic lo(prec_), hi(prec_);
    mpfr_set(lo.raw(), ci.lo.raw(), MPFR_RNDD);
    mpfr_set(hi.raw(), ci.hi.raw(), MPFR_RNDU);
    coeff_lo_.push_back(std::move(lo));
    coeff_hi_.push_back(std::move(hi));
  }
  int64_safe_ = log2mag < 61.0;
}

std::int64_t FloorScan::slow_floor(std::int64_t x, mpz_class* out) const {
  try {
    FloorResult r = poly_.eval(mpz_class(x)).certified_floor(
        FloorOptions{64, opt_.floor_ceiling_bits});
    if (out) {
      *out = r.value;
      return 0;
    }
    return r.value.get_si();
  } catch (const FloorUndecidedError& e) {
    throw FloorUndecidedError(e.ceiling_bits(), x);
  }
}

double FloorScan::slow_phase(std::int64_t x) const {
  try {
    Interval fr = poly_.eval(mpz_class(x)).fractional_part(
        2 * opt_.guard_bits, FloorOptions{64, opt_.floor_ceiling_bits});
    double f = fr.mid();
    if (f < 0.0) f = 0.0;
    if (f >= 1.0) f = std::nextafter(1.0, 0.0);
    return f;
  } catch (const FloorUndecidedError& e) {
    throw FloorUndecidedError(e.ceiling_bits(), x);
  }
}

void FloorScan::floors(std::int64_t first, std::int64_t last, std::int64_t stride,
                       const std::function<void(std::int64_t, std::int64_t)>& fn) const {
  if (!int64_safe_) throw std::logic_error("floors(): values exceed int64; use floors_big");
  if (first < 1) throw std::invalid_argument("scan ranges start at x = 1");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  if (mode_ == Mode::kExactInt64) {
    const int k = poly_.degree();
    for (std::int64_t x = first; x <= last; x += stride) {
      std::int64_t acc = int_coeffs64_[static_cast<std::size_t>(k)];
      for (int j = k - 1; j >= 0; --j) acc = acc * x + int_coeffs64_[static_cast<std::size_t>(j)];
      fn(x, denom64_ == 1 ? acc : floordiv64(acc, denom64_));
    }
    return;
  }
  if (mode_ == Mode::kExactBig) {
    const int k = poly_.degree();
    mpz_class acc, q;
    for (std::int64_t x = first; x <= last; x += stride) {
      acc = int_coeffs_[static_cast<std::size_t>(k)];
      for (int j = k - 1; j >= 0; --j) {
        acc *= x;
        acc += int_coeffs_[static_cast<std::size_t>(j)];
      }
      mpz_fdiv_q(q.get_mpz_t(), acc.get_mpz_t(), denom_.get_mpz_t());
      fn(x, q.get_si());
    }
    return;
  }
  const int k = poly_.degree();
  MpfrReg lo(prec_), hi(prec_);
  for (std::int64_t x = first; x <= last; x += stride) {
    mpfr_set(lo.v, coeff_lo_[static_cast<std::size_t>(k)].raw(), MPFR_RNDD);
    mpfr_set(hi.v, coeff_hi_[static_cast<std::size_t>(k)].raw(), MPFR_RNDU);
    for (int j = k - 1; j >= 0; --j) {
      // x >= 1 keeps endpoint order under multiplication
      mpfr_mul_si(lo.v, lo.v, x, MPFR_RNDD);
      mpfr_add(lo.v, lo.v, coeff_lo_[static_cast<std::size_t>(j)].raw(), MPFR_RNDD);
      mpfr_mul_si(hi.v, hi.v, x, MPFR_RNDU);
      mpfr_add(hi.v, hi.v, coeff_hi_[static_cast<std::size_t>(j)].raw(), MPFR_RNDU);
    }
    std::int64_t flo = mpfr_get_si(lo.v, MPFR_RNDD);
    std::int64_t fhi = mpfr_get_si(hi.v, MPFR_RNDD);
    fn(x, flo == fhi ? flo : slow_floor(x, nullptr));
  }
}

void FloorScan::floors_big(std::int64_t first, std::int64_t last, std::int64_t stride,
                           const std::function<void(std::int64_t, const mpz_class&)>& fn) const {
  if (first < 1) throw std::invalid_argument("scan ranges start at x = 1");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  if (mode_ == Mode::kExactInt64 || mode_ == Mode::kExactBig) {
    const int k = poly_.degree();
    mpz_class acc, q;
    for (std::int64_t x = first; x <= last; x += stride) {
      acc = int_coeffs_[static_cast<std::size_t>(k)];
      for (int j = k - 1; j >= 0; --j) {
        acc *= x;
        acc += int_coeffs_[static_cast<std::size_t>(j)];
      }
      mpz_fdiv_q(q.get_mpz_t(), acc.get_mpz_t(), denom_.get_mpz_t());
      fn(x, q);
    }
    return;
  }
  const int k = poly_.degree();
  MpfrReg lo(prec_), hi(prec_);
  mpz_class flo, fhi;
  for (std::int64_t x = first; x <= last; x += stride) {
    mpfr_set(lo.v, coeff_lo_[static_cast<std::size_t>(k)].raw(), MPFR_RNDD);
    mpfr_set(hi.v, coeff_hi_[static_cast<std::size_t>(k)].raw(), MPFR_RNDU);
    for (int j = k - 1; j >= 0; --j) {
      mpfr_mul_si(lo.v, lo.v, x, MPFR_RNDD);
      mpfr_add(lo.v, lo.v, coeff_lo_[static_cast<std::size_t>(j)].raw(), MPFR_RNDD);
      mpfr_mul_si(hi.v, hi.v, x, MPFR_RNDU);
      mpfr_add(hi.v, hi.v, coeff_hi_[static_cast<std::size_t>(j)].raw(), MPFR_RNDU);
    }
    mpfr_get_z(flo.get_mpz_t(), lo.v, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi.v, MPFR_RNDD);
    if (flo == fhi) {
      fn(x, flo);
    } else {
      mpz_class f;
      slow_floor(x, &f);
      fn(x, f);
    }
  }
}

void FloorScan::phases(std::int64_t first, std::int64_t last,
                       const std::function<void(std::int64_t, double)>& fn) const {
  if (first < 1) throw std::invalid_argument("scan ranges start at x = 1");
  if (mode_ == Mode::kExactInt64) {
    const int k = poly_.degree();
    const double invd = 1.0 / static_cast<double>(denom64_);
    for (std::int64_t x = first; x <= last; ++x) {
      std::int64_t acc = int_coeffs64_[static_cast<std::size_t>(k)];
      for (int j = k - 1; j >= 0; --j) acc = acc * x + int_coeffs64_[static_cast<std::size_t>(j)];
      std::int64_t r = acc % denom64_;
      if (r < 0) r += denom64_;
      fn(x, static_cast<double>(r) * invd);
    }
    return;
  }
  if (mode_ == Mode::kExactBig) {
    const int k = poly_.degree();
    mpz_class acc, r;
    for (std::int64_t x = first; x <= last; ++x) {
      acc = int_coeffs_[static_cast<std::size_t>(k)];
      for (int j = k - 1; j >= 0; --j) {
        acc *= x;
        acc += int_coeffs_[static_cast<std::size_t>(j)];
      }
      mpz_fdiv_r(r.get_mpz_t(), acc.get_mpz_t(), denom_.get_mpz_t());
      mpq_class frac(r, denom_);
      frac.canonicalize();
      fn(x, frac.get_d());
    }
    return;
  }
  const int k = poly_.degree();
  MpfrReg lo(prec_), hi(prec_);
  mpz_class flo, fhi;
  for (std::int64_t x = first; x <= last; ++x) {
    mpfr_set(lo.v, coeff_lo_[static_cast<std::size_t>(k)].raw(), MPFR_RNDD);
    mpfr_set(hi.v, coeff_hi_[static_cast<std::size_t>(k)].raw(), MPFR_RNDU);
    for (int j = k - 1; j >= 0; --j) {
      mpfr_mul_si(lo.v, lo.v, x, MPFR_RNDD);
      mpfr_add(lo.v, lo.v, coeff_lo_[static_cast<std::size_t>(j)].raw(), MPFR_RNDD);
      mpfr_mul_si(hi.v, hi.v, x, MPFR_RNDU);
      mpfr_add(hi.v, hi.v, coeff_hi_[static_cast<std::size_t>(j)].raw(), MPFR_RNDU);
    }
    mpfr_get_z(flo.get_mpz_t(), lo.v, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi.v, MPFR_RNDD);
    double f;
    if (flo == fhi) {
      mpfr_sub_z(lo.v, lo.v, flo.get_mpz_t(), MPFR_RNDD);
      f = mpfr_get_d(lo.v, MPFR_RNDN);
      if (f < 0.0) f = 0.0;
      if (f >= 1.0) f = std::nextafter(1.0, 0.0);
      // Near a wrap the floor-side error bound matters most: re-extract at
      // doubled precision.
      if (f < kWrapEps || f > 1.0 - kWrapEps) f = slow_phase(x);
    } else {
      f = slow_phase(x);
    }
    fn(x, f);
  }
}

}  // namespace floorgcd
