#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace apx {

// Chebyshev polynomial T_d(x) by the three-term recurrence
// T_d = 2x T_{d-1} - T_{d-2}, extended to negative d via T_d = T_{|d|}.
inline double cheb_eval(long long d, double x) {
  if (d < 0) d = -d;
  if (d == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (long long k = 2; k <= d; ++k) {
    double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// T_d'(1), computed by differentiating the recurrence at x = 1:
// T_d'(1) = 2 T_{d-1}(1) + 2 T_{d-1}'(1) - T_{d-2}'(1), with T_d(1) = 1.
// Equals d^2 exactly in integer arithmetic.
inline double cheb_deriv_at_one(long long d) {
  if (d < 0) d = -d;
  if (d == 0) return 0.0;
  double dprev = 0.0, dcur = 1.0;
  for (long long k = 2; k <= d; ++k) {
    double dnext = 2.0 + 2.0 * dcur - dprev;
    dprev = dcur;
    dcur = dnext;
  }
  return dcur;
}

// A polynomial in the Chebyshev basis, c_j multiplying T_j of the
// affinely mapped argument 2(x-a)/(b-a) - 1.
struct ChebSeries {
  std::vector<double> coeffs;
  std::pair<double, double> interval{-1.0, 1.0};

  ChebSeries() = default;
  ChebSeries(std::vector<double> c, std::pair<double, double> iv)
      : coeffs(std::move(c)), interval(iv) {
    validate();
  }

  long long degree() const { return static_cast<long long>(coeffs.size()) - 1; }

  void validate() const {
    if (coeffs.empty()) throw std::invalid_argument("ChebSeries: empty coefficient list");
    for (double c : coeffs)
      if (!std::isfinite(c)) throw std::invalid_argument("ChebSeries: non-finite coefficient");
    if (!(interval.first < interval.second))
      throw std::invalid_argument("ChebSeries: interval must satisfy a < b");
  }
};

// Clenshaw backward recurrence. Evaluation outside the interval is
// extrapolation; the caller owns that decision.
inline double cheb_series_eval(const ChebSeries& s, double x) {
  const double a = s.interval.first, b = s.interval.second;
  const double z = 2.0 * (x - a) / (b - a) - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = s.coeffs.size(); k-- > 1;) {
    double bn = s.coeffs[k] + 2.0 * z * b1 - b2;
    b2 = b1;
    b1 = bn;
  }
  return s.coeffs[0] + z * b1 - b2;
}

// A polynomial in the monomial basis, a_0 + a_1 x + ... + a_d x^d.
struct MonomialPoly {
  std::vector<double> coeffs;

  MonomialPoly() = default;
  explicit MonomialPoly(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("MonomialPoly: empty coefficient list");
    for (double v : coeffs)
      if (!std::isfinite(v)) throw std::invalid_argument("MonomialPoly: non-finite coefficient");
  }

  long long degree() const { return static_cast<long long>(coeffs.size()) - 1; }

  double eval(double x) const {
    double r = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) r = r * x + coeffs[k];
    return r;
  }
};

// Monomial coefficients of T_d. Integer-valued and exact in double for
// d <= 52 (leading coefficient 2^{d-1}).
inline MonomialPoly cheb_monomial_coeffs(long long d) {
  if (d < 0) d = -d;
  if (d > 52) throw std::invalid_argument("cheb_monomial_coeffs: d too large for exact doubles");
  std::vector<double> prev{1.0}, cur{0.0, 1.0};
  if (d == 0) return MonomialPoly(prev);
  for (long long k = 2; k <= d; ++k) {
    std::vector<double> next(k + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return MonomialPoly(cur);
}

namespace detail {

struct KahanSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Relative coefficient weights rho_j = c_j / c_{j0} of the Chebyshev
// expansion of x^s, j = j0, j0+2, ..., computed by the successive-ratio
// recurrence: c_{j+2}/c_j = (s-j)/(s+j+2), doubled once when leaving j = 0.
// Returns the weights for j <= jmax together with the full-expansion sum
// (early-stopped once the Gaussian tail is below double precision).
struct PowerCoeffWeights {
  std::vector<double> rho;  // index k holds j = j0 + 2k
  long long j0 = 0;
  double full_sum = 0.0;   // sum over the whole expansion (j <= s)
  double trunc_sum = 0.0;  // sum over j <= jmax only
};

inline PowerCoeffWeights power_coeff_weights(long long s, long long jmax) {
  PowerCoeffWeights w;
  w.j0 = s % 2;
  KahanSum full, trunc;
  double rho = 1.0;
  for (long long j = w.j0; j <= s; j += 2) {
    if (j <= jmax) {
      w.rho.push_back(rho);
      trunc.add(rho);
    }
    full.add(rho);
    if (j > jmax && rho < 1e-30) break;  // remaining tail below double noise
    double f = double(s - j) / double(s + j + 2);
    if (j == 0) f *= 2.0;  // c_0 carries 2^{-s} binom, c_{j>0} carry 2^{1-s} binom
    rho *= f;
  }
  w.full_sum = full.sum;
  w.trunc_sum = trunc.sum;
  return w;
}

}  // namespace detail

// Chebyshev coefficients of p_{s,d}(x) = E[T_{D_s}(x) 1_{|D_s| <= d}]:
// c_j = 2^{1-s} binom(s, (s+j)/2) for 1 <= j <= d with j = s (mod 2), and
// c_0 = 2^{-s} binom(s, s/2) when s is even. Computed by the ratio
// recurrence and pinned by normalizing the full-expansion sum to 1
// (the untruncated expansion satisfies E[T_{D_s}(1)] = 1 exactly).
inline ChebSeries monomial_cheb_coeffs(long long s, long long d) {
  if (s < 0 || d < 0) throw std::invalid_argument("monomial_cheb_coeffs: s and d must be >= 0");
  if (s > (1LL << 40)) throw std::invalid_argument("monomial_cheb_coeffs: s exceeds 2^40 cap");
  if (s == 0) return ChebSeries({1.0}, {-1.0, 1.0});
  if (d > s) d = s;  // d >= s gives the exact expansion of x^s
  auto w = detail::power_coeff_weights(s, d);
  std::vector<double> c(d + 1, 0.0);
  for (std::size_t k = 0; k < w.rho.size(); ++k)
    c[static_cast<std::size_t>(w.j0 + 2 * static_cast<long long>(k))] = w.rho[k] / w.full_sum;
  return ChebSeries(std::move(c), {-1.0, 1.0});
}

// Coefficients of alpha^{-1} p_{s,d} with alpha = P[|D_s| <= d]: the
// truncated weights renormalized so their sum is 1 to working precision.
// This is the variant the matrix walk algorithm consumes.
inline ChebSeries normalized_power_coeffs(long long s, long long d) {
  if (s < 0 || d < 0) throw std::invalid_argument("normalized_power_coeffs: s and d must be >= 0");
  if (s == 0) return ChebSeries({1.0}, {-1.0, 1.0});
  if (d > s) d = s;
  auto w = detail::power_coeff_weights(s, d);
  std::vector<double> c(d + 1, 0.0);
  for (std::size_t k = 0; k < w.rho.size(); ++k)
    c[static_cast<std::size_t>(w.j0 + 2 * static_cast<long long>(k))] = w.rho[k] / w.trunc_sum;
  return ChebSeries(std::move(c), {-1.0, 1.0});
}

namespace detail {

// Smallest t with Poisson(lambda) tail P(X > t) <= tail_budget, capped by
// the closed-form choice ceil(max(lambda e^2, log(2/tail_budget))) from the
// construction's proof. The exact tail keeps the degree near
// sqrt(max{b, log 1/delta} log 1/delta) instead of the proof's worst case.
inline long long poisson_tail_cutoff(double lambda, double tail_budget) {
  long long cap = static_cast<long long>(
      std::ceil(std::max(lambda * std::exp(2.0), std::log(2.0 / tail_budget))));
  long long imax = static_cast<long long>(std::ceil(lambda + 20.0 * std::sqrt(lambda + 1.0) + 60.0));
  imax = std::min(imax, cap);
  // pmf(i) = exp(i log lambda - lambda - lgamma(i+1)); accumulate tail backward
  std::vector<double> pmf(static_cast<std::size_t>(imax) + 1, 0.0);
  for (long long i = 0; i <= imax; ++i) {
    double lp = (lambda > 0.0 ? double(i) * std::log(lambda) : (i == 0 ? 0.0 : -1e308)) -
                lambda - std::lgamma(double(i) + 1.0);
    pmf[static_cast<std::size_t>(i)] = std::exp(lp);
  }
  double tail = 0.0;  // P(X > imax) <= pmf(imax) * geometric slack; fold into budget
  if (imax >= 1) tail = pmf[static_cast<std::size_t>(imax)];
  for (long long t = imax - 1; t >= 0; --t) {
    double tail_gt_t = tail + pmf[static_cast<std::size_t>(t) + 1];
    if (tail_gt_t > tail_budget) return std::min(t + 1, cap);
    tail = tail_gt_t;
  }
  return 1;
}

}  // namespace detail

// Chebyshev-basis approximation r_{b,delta} to e^{-x} on [0, b]:
// q_{lambda,t,d} = sum_{i<=t} e^{-lambda} (-lambda)^i / i! * p_{i,d} with
// lambda = b/2, remapped onto the interval (0, b). Sup error <= delta with
// degree O(sqrt(max{b, log 1/delta} log 1/delta)).
inline ChebSeries exp_poly_coeffs(double b, double delta) {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("exp_poly_coeffs: b must be > 0");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("exp_poly_coeffs: delta must lie in (0,1]");
  const double lambda = b / 2.0;
  const long long t = detail::poisson_tail_cutoff(lambda, delta / 2.0);
  const long long d = static_cast<long long>(
      std::ceil(std::sqrt(2.0 * double(t) * std::log(4.0 / delta))));

  std::vector<detail::KahanSum> acc(static_cast<std::size_t>(d) + 1);
  for (long long i = 0; i <= t; ++i) {
    double lw = (lambda > 0.0 ? double(i) * std::log(lambda) : (i == 0 ? 0.0 : -1e308)) -
                lambda - std::lgamma(double(i) + 1.0);
    double w = std::exp(lw);
    if (i % 2 == 1) w = -w;  // (-lambda)^i
    if (w == 0.0) continue;
    ChebSeries p = monomial_cheb_coeffs(i, d);
    for (std::size_t j = 0; j < p.coeffs.size(); ++j)
      if (p.coeffs[j] != 0.0) acc[j].add(w * p.coeffs[j]);
  }
  std::vector<double> c(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) c[j] = acc[j].sum;
  return ChebSeries(std::move(c), {0.0, b});
}

}  // namespace apx
