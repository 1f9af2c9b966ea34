#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "apx/bigreal.hpp"
#include "apx/cheb.hpp"
#include "apx/exp_integral.hpp"
#include "apx/expsum.hpp"

namespace apx {

struct ssv_precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rational approximation p(x)/(1+x/d)^d to e^{-x} on [0, inf) with error
// O(d 2^{-d}). p_x holds the numerator as a polynomial in x; p_u holds the
// same approximant as a polynomial in u = (1+x/d)^{-1}, the form the
// matrix algorithms apply to (I + A/d)^{-1}.
struct SsvApprox {
  MonomialPoly p_x;
  MonomialPoly p_u;
  ChebSeries u_cheb;  // p_u in the Chebyshev basis on [0,1]; coefficients are
                      // O(1), so this is the numerically safe evaluation form
  long long degree = 0;
  unsigned prec_bits = 0;
  double sup_error = 0.0;       // measured grid certificate error
  double error_bound = 0.0;     // certified bound 8 d 2^{-d}
  double min_correct_bits = 0;  // tracked bookkeeping over output coefficients

  double eval(double x) const {
    double u = 1.0 / (1.0 + x / double(degree));
    return cheb_series_eval(u_cheb, u);
  }
};

namespace ssv_constants {
inline constexpr long long degree_cap = 40;
// Empirical certificate constant for the O(d 2^{-d}) bound.
inline constexpr double error_constant = 8.0;
inline constexpr int cert_grid_points = 20000;
inline constexpr double cert_x_span = 40.0;  // certificate covers [0, 40 d]
}  // namespace ssv_constants

// Working precision schedule: intermediate pipeline quantities reach
// d^{O(d)}, so the precision grows as d log d.
inline unsigned ssv_precision_schedule(long long d) {
  double bits = 12.0 * double(d) * std::ceil(std::log2(double(d) + 1.0));
  return std::max(256u, static_cast<unsigned>(bits));
}

namespace detail {

inline double binom_exact(long n, long k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (long i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return std::round(r);
}

// gamma_k = int_{-1}^{1} f_d'(t) L_k(t) dt for f_d(y) = exp(-d(1+y)/(1-y)),
// through the Laguerre form
//   gamma_k = -d sum_{i<=k} (-1)^i binom(k+1, k-i) (d^i/i!) M(k, i),
//   M(k, i) = sum_{r<=k} binom(k, r) (-1)^{k-r} J(r+i-k),
// where J(m) = e^d int_1^inf w^m e^{-dw} dw: rational for m >= 0 and
// e^d E_{-m}(d) otherwise.
inline std::vector<Tracked> ssv_gammas_tracked(long long d, unsigned wp) {
  const long maxm = static_cast<long>(d);  // exponents m in [-(d-1), d-1]
  BigReal dv(double(d), wp);

  // J(m) for m = 0..d-1.
  std::vector<Tracked> jpos;
  {
    Tracked invd = t_div(t_exact(BigReal(1L, wp)), t_exact(dv));
    Tracked j = invd;
    jpos.push_back(j);
    for (long m = 1; m < maxm; ++m) {
      j = t_add(invd, t_mul(t_mul(t_exact(BigReal(m, wp)), invd), j));
      jpos.push_back(j);
    }
  }
  // Etilde_j = e^d E_j(d) for j = 1..d-1 (none needed when d == 1).
  std::vector<Tracked> etil;
  if (d >= 2) {
    Tracked e1 = scaled_exp_integral(1, dv, wp, -double(wp) + 48.0);
    etil.push_back(e1);
    Tracked one = t_exact(BigReal(1L, wp));
    Tracked dvt = t_exact(dv);
    for (long j = 2; j < maxm; ++j) {
      Tracked prev = etil.back();
      etil.push_back(t_div(t_sub(one, t_mul(dvt, prev)), t_exact(BigReal(j - 1, wp))));
    }
  }
  auto jfull = [&](long m) -> const Tracked& {
    return m >= 0 ? jpos[static_cast<std::size_t>(m)]
                  : etil[static_cast<std::size_t>(-m) - 1];
  };

  // d^i / i! for i = 0..d-1.
  std::vector<Tracked> dpow{t_exact(BigReal(1L, wp))};
  for (long i = 1; i < maxm; ++i) {
    Tracked t = t_mul(dpow.back(), t_exact(dv));
    dpow.push_back(t_div(t, t_exact(BigReal(i, wp))));
  }

  std::vector<Tracked> gammas;
  gammas.reserve(static_cast<std::size_t>(d));
  for (long k = 0; k < maxm; ++k) {
    Tracked acc = t_exact(BigReal(0L, wp));
    for (long i = 0; i <= k; ++i) {
      Tracked m_sum = t_exact(BigReal(0L, wp));
      for (long r = 0; r <= k; ++r) {
        Tracked term = t_mul(t_exact(BigReal(binom_exact(k, r), wp)),
                             jfull(r + i - k));
        if ((k - r) % 2 != 0) term.value = -term.value;
        m_sum = t_add(m_sum, term);
      }
      Tracked term = t_mul(t_exact(BigReal(binom_exact(k + 1, k - i), wp)),
                           t_mul(dpow[static_cast<std::size_t>(i)], m_sum));
      if (i % 2 != 0) term.value = -term.value;
      acc = t_add(acc, term);
    }
    acc = t_mul(acc, t_exact(BigReal(-double(d), wp)));
    gammas.push_back(acc);
  }
  return gammas;
}

// Monomial coefficient rows of the Legendre polynomials L_0..L_{kmax} via
// (k+1) L_{k+1} = (2k+1) x L_k - k L_{k-1}.
inline std::vector<std::vector<Tracked>> legendre_rows(long kmax, unsigned wp) {
  std::vector<std::vector<Tracked>> rows;
  rows.push_back({t_exact(BigReal(1L, wp))});
  if (kmax >= 1) rows.push_back({t_exact(BigReal(0L, wp)), t_exact(BigReal(1L, wp))});
  for (long k = 1; k < kmax; ++k) {
    const auto& lk = rows[static_cast<std::size_t>(k)];
    const auto& lkm = rows[static_cast<std::size_t>(k) - 1];
    std::vector<Tracked> next(static_cast<std::size_t>(k) + 2, t_exact(BigReal(0L, wp)));
    for (std::size_t i = 0; i < lk.size(); ++i) {
      Tracked t = t_mul(t_exact(BigReal(2 * k + 1, wp)), lk[i]);
      next[i + 1] = t_add(next[i + 1], t);
    }
    for (std::size_t i = 0; i < lkm.size(); ++i) {
      Tracked t = t_mul(t_exact(BigReal(k, wp)), lkm[i]);
      next[i] = t_sub(next[i], t);
    }
    for (auto& c : next) c = t_div(c, t_exact(BigReal(k + 1, wp)));
    rows.push_back(std::move(next));
  }
  return rows;
}

}  // namespace detail

// Builds the degree-d SSV rational approximant through the coefficient
// pipeline: Laguerre-form gamma_k from exponential-integral values,
// Legendre recombination r = sum (2k+1)/2 gamma_k L_k, exact integration
// q(y) = -int_y^1 r, affine substitution u-form p_u(u) = q(1-2u), and the
// binomial expansion to the x-form numerator. All arithmetic in BigReal at
// the precision schedule with interval-style error bookkeeping.
inline SsvApprox ssv_build(long long d, unsigned prec = 0) {
  namespace kc = ssv_constants;
  if (d < 1 || d > kc::degree_cap)
    throw std::invalid_argument("ssv_build: d must lie in [1, " +
                                std::to_string(kc::degree_cap) + "]");
  const unsigned sched = ssv_precision_schedule(d);
  if (prec == 0) prec = sched;
  if (prec < sched)
    throw std::invalid_argument("ssv_build: precision below the schedule for d=" +
                                std::to_string(d));
  const unsigned wp = prec;
  using detail::Tracked;
  using detail::t_add;
  using detail::t_div;
  using detail::t_exact;
  using detail::t_mul;
  using detail::t_sub;

  auto gammas = detail::ssv_gammas_tracked(d, wp);
  auto leg = detail::legendre_rows(static_cast<long>(d) - 1, wp);

  // r(t) = sum_k (2k+1)/2 gamma_k L_k(t), the L2 projection of f_d'.
  std::vector<Tracked> r(static_cast<std::size_t>(d), t_exact(BigReal(0L, wp)));
  for (long k = 0; k < d; ++k) {
    Tracked wgt = t_div(t_mul(t_exact(BigReal(2 * k + 1, wp)), gammas[static_cast<std::size_t>(k)]),
                        t_exact(BigReal(2L, wp)));
    const auto& row = leg[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < row.size(); ++i)
      r[i] = t_add(r[i], t_mul(wgt, row[i]));
  }

  // q(y) = -int_y^1 r(t) dt: a_0 = -sum r_j/(j+1), a_{j+1} = r_j/(j+1).
  std::vector<Tracked> a(static_cast<std::size_t>(d) + 1, t_exact(BigReal(0L, wp)));
  for (long j = 0; j < d; ++j) {
    Tracked c = t_div(r[static_cast<std::size_t>(j)], t_exact(BigReal(j + 1, wp)));
    a[static_cast<std::size_t>(j) + 1] = c;
    a[0] = t_sub(a[0], c);
  }

  // p_u(u) = q(1 - 2u) by Horner substitution.
  std::vector<Tracked> b{a[static_cast<std::size_t>(d)]};
  for (long m = static_cast<long>(d) - 1; m >= 0; --m) {
    std::vector<Tracked> nb(b.size() + 1, t_exact(BigReal(0L, wp)));
    for (std::size_t i = 0; i < b.size(); ++i) {
      nb[i] = t_add(nb[i], b[i]);
      nb[i + 1] = t_sub(nb[i + 1], t_mul(t_exact(BigReal(2L, wp)), b[i]));
    }
    nb[0] = t_add(nb[0], a[static_cast<std::size_t>(m)]);
    b = std::move(nb);
  }

  // x-form numerator: P_r = d^{-r} sum_m b_m binom(d-m, r).
  std::vector<Tracked> px(static_cast<std::size_t>(d) + 1, t_exact(BigReal(0L, wp)));
  {
    Tracked invd = t_div(t_exact(BigReal(1L, wp)), t_exact(BigReal(double(d), wp)));
    Tracked scale = t_exact(BigReal(1L, wp));
    for (long rr = 0; rr <= d; ++rr) {
      Tracked acc = t_exact(BigReal(0L, wp));
      for (long m = 0; m <= d; ++m) {
        double bc = detail::binom_exact(static_cast<long>(d) - m, rr);
        if (bc == 0.0) continue;
        acc = t_add(acc, t_mul(t_exact(BigReal(bc, wp)), b[static_cast<std::size_t>(m)]));
      }
      px[static_cast<std::size_t>(rr)] = t_mul(acc, scale);
      scale = t_mul(scale, invd);
    }
  }

  // Chebyshev form of p_u on [0,1]: substitute u = (1+y)/2 to get a
  // y-monomial polynomial, then expand each y^i through
  // y^i = 2^{1-i} sum'_{j = i (2)} binom(i, (i-j)/2) T_j(y) (j = 0 halved).
  // The resulting coefficients are bounded by 2 sup|p_u|, so the double
  // rounding of this form is harmless.
  std::vector<Tracked> ucheb(b.size(), t_exact(BigReal(0L, wp)));
  {
    std::vector<Tracked> ypoly{b[static_cast<std::size_t>(d)]};
    Tracked half = t_div(t_exact(BigReal(1L, wp)), t_exact(BigReal(2L, wp)));
    for (long m = static_cast<long>(d) - 1; m >= 0; --m) {
      std::vector<Tracked> ny(ypoly.size() + 1, t_exact(BigReal(0L, wp)));
      for (std::size_t i = 0; i < ypoly.size(); ++i) {
        Tracked t = t_mul(half, ypoly[i]);
        ny[i] = t_add(ny[i], t);
        ny[i + 1] = t_add(ny[i + 1], t);
      }
      ny[0] = t_add(ny[0], b[static_cast<std::size_t>(m)]);
      ypoly = std::move(ny);
    }
    for (long i = 0; i <= d; ++i) {
      if (i > 60) throw std::logic_error("ssv_build: degree beyond shift range");
      // scale factor 2^{1-i}
      Tracked sc = i == 0 ? t_mul(ypoly[0], t_exact(BigReal(2L, wp)))
                          : t_div(ypoly[static_cast<std::size_t>(i)],
                                  t_exact(BigReal(double(1L << (i - 1)), wp)));
      for (long j = i % 2; j <= i; j += 2) {
        Tracked c = t_mul(sc, t_exact(BigReal(detail::binom_exact(i, (i - j) / 2), wp)));
        if (j == 0) c = t_mul(c, half);
        ucheb[static_cast<std::size_t>(j)] = t_add(ucheb[static_cast<std::size_t>(j)], c);
      }
    }
  }

  // Error bookkeeping: significant coefficients need >= 10 correct bits;
  // negligible ones only need absolute error below the global scale.
  double max_mag = -1e300;
  for (const auto& c : b) max_mag = std::max(max_mag, c.mag_log2());
  double min_bits = 1e300;
  for (const auto* vecp : {&b, &px, &ucheb}) {
    for (const auto& c : *vecp) {
      if (c.mag_log2() > max_mag - 40.0)
        min_bits = std::min(min_bits, c.correct_bits());
      else if (c.err_log2 > max_mag - 50.0)
        min_bits = std::min(min_bits, 0.0);
    }
  }
  if (min_bits < 10.0)
    throw ssv_precision_error("ssv_build: fewer than 10 correct bits in a coefficient (d=" +
                              std::to_string(d) + ", prec=" + std::to_string(wp) + ")");

  SsvApprox out;
  out.degree = d;
  out.prec_bits = wp;
  out.min_correct_bits = min_bits;
  out.error_bound = kc::error_constant * double(d) * std::pow(2.0, -double(d));

  std::vector<double> pxd(px.size()), pud(b.size()), uchd(ucheb.size());
  for (std::size_t i = 0; i < px.size(); ++i) pxd[i] = px[i].value.to_double();
  for (std::size_t i = 0; i < b.size(); ++i) pud[i] = b[i].value.to_double();
  for (std::size_t i = 0; i < ucheb.size(); ++i) uchd[i] = ucheb[i].value.to_double();
  out.p_x = MonomialPoly(std::move(pxd));
  out.p_u = MonomialPoly(std::move(pud));
  out.u_cheb = ChebSeries(std::move(uchd), {0.0, 1.0});

  // Grid certificate on [0, 40 d], evaluated through the O(1)-coefficient
  // Chebyshev form as shipped.
  const double hi = kc::cert_x_span * double(d);
  const double llo = std::log(1e-4), lhi = std::log(hi);
  double sup = std::fabs(out.eval(0.0) - 1.0);
  for (int i = 0; i < kc::cert_grid_points; ++i) {
    double x = std::exp(llo + (lhi - llo) * double(i) / double(kc::cert_grid_points - 1));
    sup = std::max(sup, std::fabs(out.eval(x) - std::exp(-x)));
  }
  out.sup_error = sup;
  if (!(sup <= out.error_bound))
    throw certificate_error("ssv_build: grid certificate failed, sup=" + std::to_string(sup) +
                            " bound=" + std::to_string(out.error_bound));
  return out;
}

// Monomial coefficients of the x-form numerator p_d, satisfying
// sup_{x>=0} |e^{-x} - p_d(x)/(1+x/d)^d| <= 8 d 2^{-d} (grid-certified).
inline MonomialPoly ssv_coeffs(long long d, unsigned prec) {
  return ssv_build(d, prec).p_x;
}

// gamma_0..gamma_{d-1} rounded to double, for cross-checks.
inline std::vector<double> ssv_gammas(long long d, unsigned prec = 0) {
  if (prec == 0) prec = ssv_precision_schedule(d);
  auto g = detail::ssv_gammas_tracked(d, prec);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].value.to_double();
  return out;
}

}  // namespace apx
