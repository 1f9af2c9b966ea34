#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "apx/bigreal.hpp"

namespace apx {

struct series_divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Value with a tracked absolute-error bound, carried as log2(bound).
// -inf marks an exact quantity.
struct Tracked {
  BigReal value;
  double err_log2 = -1e300;

  double mag_log2() const {
    return value.is_zero() ? -1e300 : double(value.exponent2());
  }
  // Correct bits in the value under the tracked bound.
  double correct_bits() const { return mag_log2() - err_log2; }
};

inline double log2_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b < a - 64.0) return a;
  return a + std::log2(1.0 + std::exp2(b - a));
}

inline Tracked t_add(const Tracked& a, const Tracked& b) {
  Tracked r{a.value + b.value, 0.0};
  r.err_log2 = log2_add(log2_add(a.err_log2, b.err_log2),
                        r.mag_log2() - double(r.value.precision()));
  return r;
}
inline Tracked t_sub(const Tracked& a, const Tracked& b) {
  Tracked r{a.value - b.value, 0.0};
  r.err_log2 = log2_add(log2_add(a.err_log2, b.err_log2),
                        r.mag_log2() - double(r.value.precision()));
  return r;
}
inline Tracked t_mul(const Tracked& a, const Tracked& b) {
  Tracked r{a.value * b.value, 0.0};
  double cross = log2_add(a.mag_log2() + b.err_log2, b.mag_log2() + a.err_log2);
  cross = log2_add(cross, a.err_log2 + b.err_log2);
  r.err_log2 = log2_add(cross, r.mag_log2() - double(r.value.precision()));
  return r;
}
inline Tracked t_div(const Tracked& a, const Tracked& b) {
  Tracked r{a.value / b.value, 0.0};
  // |d(a/b)| <= (|da| + |a/b||db|) / (|b| - |db|); the denominator slack is
  // absorbed by one extra bit.
  double num = log2_add(a.err_log2, r.mag_log2() + b.err_log2);
  r.err_log2 = log2_add(num - b.mag_log2() + 1.0,
                        r.mag_log2() - double(r.value.precision()));
  return r;
}
inline Tracked t_exact(BigReal v) { return Tracked{std::move(v), -1e300}; }
inline Tracked t_rounded(BigReal v) {
  Tracked r{std::move(v), 0.0};
  r.err_log2 = r.mag_log2() - double(r.value.precision());
  return r;
}

// J_m = e^d int_1^inf w^m e^{-dw} dw for m >= 0, by parts:
// J_0 = 1/d, J_m = 1/d + (m/d) J_{m-1}. Exact up to rounding.
inline Tracked scaled_power_integral(long m, const BigReal& d, unsigned prec) {
  Tracked invd = t_div(t_exact(BigReal(1L, prec)), t_rounded(d.rounded(prec)));
  Tracked j = invd;
  for (long i = 1; i <= m; ++i) {
    Tracked mi = t_exact(BigReal(i, prec));
    j = t_add(invd, t_mul(t_mul(mi, invd), j));
  }
  return j;
}

// Asymptotic alternating series for Etilde_j = e^d E_j(d), j >= 1:
//   Etilde_j = (1/d) sum_k (-1)^k (j+k-1)!/((j-1)! d^k).
// Valid only while terms decrease; error bounded by the first omitted term.
// Returns nullopt if the target cannot be met before terms grow or the
// budget runs out.
inline std::optional<Tracked> scaled_exp_integral_asymptotic(long j, const BigReal& d,
                                                             unsigned prec,
                                                             double target_rel_log2,
                                                             long budget) {
  BigReal dv = d.rounded(prec);
  BigReal invd = BigReal(1L, prec) / dv;
  BigReal term(1L, prec);
  BigReal sum(0L, prec);
  long k = 0;
  bool neg = false;
  double prev_mag = 1e300;
  while (k <= budget) {
    double mag = double(term.exponent2());
    if (mag >= prev_mag) return std::nullopt;  // terms stopped decreasing
    prev_mag = mag;
    if (neg)
      sum -= term;
    else
      sum += term;
    // next term magnitude bounds the truncation error (alternating, decreasing)
    BigReal next = term;
    next.mul_si(j + k);
    next *= invd;
    if (!sum.is_zero() &&
        double(next.exponent2()) - double(sum.exponent2()) <= target_rel_log2 - 4.0) {
      Tracked r = t_rounded(sum * invd);
      r.err_log2 = log2_add(r.err_log2 + std::log2(double(k + 3)),
                            double(next.exponent2()) - double(dv.exponent2()));
      return r;
    }
    term = next;
    neg = !neg;
    ++k;
  }
  return std::nullopt;
}

// Etilde_1 = e^d E_1(d) from the everywhere-convergent series
//   E_1(d) = -gamma - log d + sum_{k>=1} (-1)^{k+1} d^k / (k k!),
// evaluated with enough guard bits to absorb the e^{2d}-scale cancellation.
inline Tracked scaled_exp_integral_convergent(const BigReal& d, unsigned prec) {
  const double dd = std::fabs(d.to_double());
  const unsigned wp =
      prec + 128 + static_cast<unsigned>(std::ceil(3.0 * dd * 1.4427 + 2.0 * std::log2(dd + 2.0)));
  BigReal dv = d.rounded(wp);
  BigReal sum = -BigReal::euler_gamma(wp) - log(dv);
  BigReal term(1L, wp);
  long k = 1;
  double max_mag = double(sum.exponent2());
  const double floor_log2 = -double(wp) + 8.0;
  while (true) {
    term *= dv;
    term.div_si(k);  // term = d^k / k!
    BigReal contrib = term;
    contrib.div_si(k);
    if (k % 2 == 1)
      sum += contrib;
    else
      sum -= contrib;
    max_mag = std::max(max_mag, double(sum.exponent2()));
    if (k > 2 * dd + 4.0 && double(contrib.exponent2()) - max_mag < floor_log2) break;
    if (k > 4'000'000) throw series_divergence_error("exp_integral: convergent series stalled");
    ++k;
  }
  Tracked r{exp(dv) * sum, 0.0};
  // Accumulated rounding: ~4k ulps at the largest intermediate magnitude,
  // scaled by e^d from the final multiplication.
  double dlog2e = dd * 1.4426950408889634;
  r.err_log2 = (max_mag + dlog2e) - double(wp) + std::log2(4.0 * double(k) + 16.0);
  r.value = r.value.rounded(prec + 32);
  return r;
}

// Etilde_j = e^d E_j(d) for j >= 1 at relative target 2^{target_rel_log2}.
// Tries the asymptotic series first; falls back to the convergent seed plus
// the by-parts recurrence Etilde_{j+1} = (1 - d Etilde_j)/j.
inline Tracked scaled_exp_integral(long j, const BigReal& d, unsigned prec,
                                   double target_rel_log2) {
  const long budget = 4 * static_cast<long>(std::ceil(d.to_double())) + 200;
  if (auto r = scaled_exp_integral_asymptotic(j, d, prec, target_rel_log2, budget)) return *r;

  const double dd = d.to_double();
  const unsigned wp =
      prec + 96 + static_cast<unsigned>(std::ceil(1.5 * dd * 1.4427 + double(j)));
  Tracked e = scaled_exp_integral_convergent(d, wp);
  Tracked dv = t_rounded(d.rounded(wp));
  Tracked one = t_exact(BigReal(1L, wp));
  for (long i = 1; i < j; ++i) {
    Tracked num = t_sub(one, t_mul(dv, e));
    e = t_div(num, t_exact(BigReal(i, wp)));
  }
  e.value = e.value.rounded(prec + 32);
  return e;
}

}  // namespace detail

// E_j(d) = int_1^inf w^{-j} e^{-dw} dw to relative error 2^{-prec+g} with
// guard slack g = 8. For j <= 0 the integrand is w^{|j|} and the closed
// form from repeated integration by parts is exact up to rounding. For
// j >= 1 the rapidly convergent series in 1/d is used while its terms
// decrease, with a convergent-series seed plus the by-parts recurrence as
// the high-precision fallback.
inline BigReal exp_integral(long j, double d, unsigned prec) {
  if (!(d > 1.0)) throw std::invalid_argument("exp_integral: requires d > 1");
  if (prec < 64) throw std::invalid_argument("exp_integral: precision must be >= 64 bits");
  const unsigned wp = prec + 64;
  BigReal dv(d, wp);
  BigReal emd = exp(-dv);
  if (j <= 0) {
    auto r = detail::scaled_power_integral(-j, dv, wp);
    return (r.value * emd).rounded(prec);
  }
  auto r = detail::scaled_exp_integral(j, dv, wp, -double(prec) - 8.0);
  return (r.value * emd).rounded(prec);
}

}  // namespace apx
