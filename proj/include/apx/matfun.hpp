#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "apx/cheb.hpp"
#include "apx/expsum.hpp"
#include "apx/graph.hpp"
#include "apx/solve.hpp"
#include "apx/sparse.hpp"
#include "apx/ssv.hpp"
#include "apx/vec.hpp"

namespace apx {

// Outcome of an accelerated matrix-function application. matvec_count
// follows the degree/term accounting of the method (power-cheb spends
// exactly the polynomial degree); spectrum estimation and norm checks are
// booked separately under aux_matvecs.
struct ApplyReport {
  VectorReal result;
  std::string method;
  double certified_delta = 0.0;
  long long matvec_count = 0;
  long long aux_matvecs = 0;
  long long degree = 0;
  long long terms = 0;                       // exponential-sum path
  std::vector<long long> inner_solve_iters;  // rational path, one per solve
  bool converged = true;
  bool warn_spectrum = false;
};

struct ApplyOptions {
  std::uint64_t seed = 20240101;
  bool check_norm = true;      // probabilistic ||M|| <= 1 check (warn only)
  double norm_bound = 0.0;     // spectral upper bound if the caller has one
};

namespace detail {

// Power-iteration estimate of the spectral norm; warn-only check.
inline double power_norm_estimate(const SparseSymMatrix& M, std::uint64_t seed, int iters,
                                  long long& aux) {
  if (M.dim() == 0) return 0.0;
  VectorReal x = random_unit_vector(M.dim(), seed ^ 0x9e3779b97f4a7c15ULL);
  double est = 0.0;
  VectorReal y(M.dim());
  for (int i = 0; i < iters; ++i) {
    matvec_into(M, x, y);
    ++aux;
    est = norm2(y);
    if (est == 0.0) return 0.0;
    x = y;
    scale(1.0 / est, x);
  }
  return est;
}

// Lanczos-based spectral upper bound with 10% inflation.
inline double norm_upper_bound(const SparseSymMatrix& A, std::uint64_t seed, long long& aux) {
  if (A.dim() <= 1) {
    double v = 0.0;
    A.for_each_stored([&](std::size_t, std::size_t, double x) { v = std::fabs(x); });
    return v * 1.1;
  }
  long long k = std::min<long long>(30, static_cast<long long>(A.dim()) - 1);
  auto L = lanczos_decomp(A, k, seed);
  auto ev = lanczos_t_eigs(L);
  aux += L.k + 1;
  double m = 0.0;
  for (double e : ev) m = std::max(m, std::fabs(e));
  return m * 1.1;
}

}  // namespace detail

// w with ||M^s v - w|| <= delta ||v|| for symmetric ||M|| <= 1, through the
// degree d = ceil(sqrt(2 s log(2/delta))) Chebyshev compression of x^s:
// T_j(M) v by the vector three-term recurrence, accumulated with the
// sum-normalized coefficients. Exactly d matvecs.
inline ApplyReport power_apply(const SparseSymMatrix& M, const VectorReal& v, long long s,
                               double delta, const ApplyOptions& opt = {}) {
  if (s < 0) throw std::invalid_argument("power_apply: s must be >= 0");
  if (!(delta > 0.0) || delta > 0.5)
    throw std::invalid_argument("power_apply: delta must lie in (0, 1/2]");
  if (v.size() != M.dim()) throw std::invalid_argument("power_apply: dimension mismatch");
  ApplyReport rep;
  rep.method = "power-cheb";
  rep.certified_delta = delta;
  if (opt.check_norm && M.dim() > 0) {
    double est = detail::power_norm_estimate(M, opt.seed, 8, rep.aux_matvecs);
    if (est > 1.0 + 1e-8) rep.warn_spectrum = true;
  }
  if (s == 0) {
    rep.result = v;
    return rep;
  }
  long long d = static_cast<long long>(std::ceil(std::sqrt(2.0 * double(s) * std::log(2.0 / delta))));
  d = std::min(d, s);
  rep.degree = d;
  ChebSeries c = normalized_power_coeffs(s, d);

  VectorReal prev = v;                      // T_0(M) v
  VectorReal cur = matvec(M, v);            // T_1(M) v
  rep.matvec_count = 1;
  VectorReal acc(v.size(), 0.0);
  axpy(c.coeffs[0], prev, acc);
  if (d >= 1) axpy(c.coeffs[1], cur, acc);
  VectorReal next(v.size());
  for (long long j = 2; j <= d; ++j) {
    matvec_into(M, cur, next);
    ++rep.matvec_count;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
    prev.swap(cur);
    cur.swap(next);
    if (c.coeffs[static_cast<std::size_t>(j)] != 0.0)
      axpy(c.coeffs[static_cast<std::size_t>(j)], cur, acc);
  }
  rep.result = std::move(acc);
  return rep;
}

// Approximates the s-step random walk distribution W~^s v0 by conjugating
// the symmetrized walk: W~^s v = D^{1/2} W^s D^{-1/2} v. The 2-norm error
// is at most delta ||D^{-1/2} v0|| max_i sqrt(d_i).
inline ApplyReport walk_distribution(const WeightedGraph& g, const VectorReal& v0, long long s,
                                     double delta, const ApplyOptions& opt = {}) {
  if (v0.size() != g.num_vertices())
    throw std::invalid_argument("walk_distribution: dimension mismatch");
  double mass = 0.0;
  for (double p : v0) {
    if (p < -1e-12) throw std::invalid_argument("walk_distribution: negative probability entry");
    mass += p;
  }
  if (std::fabs(mass - 1.0) > 1e-8)
    throw std::invalid_argument("walk_distribution: probabilities sum to " + std::to_string(mass));
  if (s == 0) {
    ApplyReport rep;
    rep.method = "power-cheb";
    rep.result = v0;
    rep.certified_delta = 0.0;
    return rep;
  }
  const auto& deg = g.degrees();
  VectorReal z(v0.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = v0[i] / std::sqrt(deg[i]);
  auto W = walk_matrix_sym(g);
  ApplyOptions o = opt;
  o.check_norm = false;  // ||W|| <= 1 holds by construction
  ApplyReport rep = power_apply(W, z, s, delta, o);
  double dmax = 0.0;
  for (double d : deg) dmax = std::max(dmax, d);
  rep.certified_delta = delta * norm2(z) * std::sqrt(dmax);
  for (std::size_t i = 0; i < rep.result.size(); ++i) rep.result[i] *= std::sqrt(deg[i]);
  return rep;
}

// exp(-A) v for PSD A by the degree-O(sqrt(b log 1/delta)) Chebyshev
// approximant of e^{-x} on [0, b], b an upper bound on ||A|| (supplied or
// Lanczos-estimated). matvec count = degree. matvec_scale realizes
// exp(-(t A)) v without materializing t A.
inline ApplyReport exp_apply_poly(const SparseSymMatrix& A, const VectorReal& v, double delta,
                                  const ApplyOptions& opt = {}, double matvec_scale = 1.0) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("exp_apply_poly: delta must lie in (0,1]");
  if (v.size() != A.dim()) throw std::invalid_argument("exp_apply_poly: dimension mismatch");
  ApplyReport rep;
  rep.method = "exp-poly";
  rep.certified_delta = delta;
  double b = opt.norm_bound > 0.0 ? opt.norm_bound * matvec_scale
                                  : detail::norm_upper_bound(A, opt.seed, rep.aux_matvecs) * matvec_scale;
  if (b <= 1e-14) {  // exp(0) = I
    rep.result = v;
    return rep;
  }
  ChebSeries r = exp_poly_coeffs(b, delta);
  rep.degree = r.degree();
  // Clenshaw-style forward recurrence on the mapped matrix (2/b) A - I.
  const double two_over_b = 2.0 * matvec_scale / b;
  auto mapped = [&](const VectorReal& x, VectorReal& y) {
    matvec_into(A, x, y);
    ++rep.matvec_count;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = two_over_b * y[i] - x[i];
  };
  VectorReal prev = v;
  VectorReal cur(v.size());
  mapped(v, cur);
  VectorReal acc(v.size(), 0.0);
  axpy(r.coeffs[0], prev, acc);
  if (r.degree() >= 1) axpy(r.coeffs[1], cur, acc);
  VectorReal next(v.size());
  for (long long j = 2; j <= r.degree(); ++j) {
    mapped(cur, next);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
    prev.swap(cur);
    cur.swap(next);
    axpy(r.coeffs[static_cast<std::size_t>(j)], cur, acc);
  }
  rep.result = std::move(acc);
  return rep;
}

namespace detail {

inline const SsvApprox& ssv_cached(long long d) {
  static std::mutex mu;
  static std::map<long long, std::unique_ptr<SsvApprox>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(d);
  if (it == cache.end())
    it = cache.emplace(d, std::make_unique<SsvApprox>(ssv_build(d))).first;
  return *it->second;
}

// Smallest degree whose certified bound 8 d 2^{-d} is within delta/2.
inline long long ssv_degree_for(double delta) {
  for (long long d = 2; d <= ssv_constants::degree_cap; ++d)
    if (ssv_constants::error_constant * double(d) * std::pow(2.0, -double(d)) <= delta / 2.0)
      return d;
  return ssv_constants::degree_cap;
}

}  // namespace detail

// exp(-sA) v for PSD A via the SSV rational approximant: the degree-d
// polynomial in B = (I + sA/d)^{-1} evaluated through its Chebyshev form
// by the T_m(2B - I) vector recurrence, one inner CG solve per degree.
// The monomial form of p_d has d^{O(d)}-sized coefficients, so the
// Chebyshev form is the numerically usable carrier of the same polynomial.
inline ApplyReport exp_apply_rational(const SparseSymMatrix& A, const VectorReal& v, double delta,
                                      const ApplyOptions& opt = {}, double matvec_scale = 1.0) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("exp_apply_rational: delta must lie in (0,1]");
  if (v.size() != A.dim()) throw std::invalid_argument("exp_apply_rational: dimension mismatch");
  ApplyReport rep;
  rep.method = "exp-rational";
  rep.certified_delta = delta;

  const long long d = detail::ssv_degree_for(delta);
  rep.degree = d;
  const SsvApprox& ssv = detail::ssv_cached(d);

  double bnorm = opt.norm_bound > 0.0 ? opt.norm_bound * matvec_scale
                                      : detail::norm_upper_bound(A, opt.seed, rep.aux_matvecs) * matvec_scale;
  if (bnorm <= 1e-14) {
    rep.result = v;
    return rep;
  }

  // Inner tolerance: first-order propagation through the Chebyshev
  // recurrence costs a factor <= d^2 per coefficient.
  double coeff_sum = 0.0;
  for (double c : ssv.u_cheb.coeffs) coeff_sum += std::fabs(c);
  const double delta1 = delta / (4.0 * double(d) * double(d) * std::max(coeff_sum, 1.0));
  const double kappa_inner = 1.0 + bnorm / double(d);
  const double cg_delta = std::max(delta1 / std::sqrt(kappa_inner), 5e-15);

  SparseSymMatrix S = scaled_shifted(A, matvec_scale / double(d), 1.0);
  SolverOptions sopt;
  sopt.kappa_hint = kappa_inner;

  auto apply_B = [&](const VectorReal& x) {
    SolveReport sr = cg_solve(S, x, cg_delta, sopt);
    rep.inner_solve_iters.push_back(sr.iterations);
    rep.matvec_count += sr.iterations;
    if (!sr.converged) rep.converged = false;
    return sr.solution;
  };
  // y = (2B - I) x
  auto apply_Y = [&](const VectorReal& x) {
    VectorReal y = apply_B(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 * y[i] - x[i];
    return y;
  };

  // u-interval [0,1] maps to [-1,1] exactly by u -> 2u - 1 = y(B).
  const auto& c = ssv.u_cheb.coeffs;
  VectorReal prev = v;
  VectorReal cur = apply_Y(v);
  VectorReal acc(v.size(), 0.0);
  axpy(c[0], prev, acc);
  if (c.size() > 1) axpy(c[1], cur, acc);
  for (std::size_t m = 2; m < c.size(); ++m) {
    VectorReal next = apply_Y(cur);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
    prev.swap(cur);
    cur.swap(next);
    axpy(c[m], cur, acc);
  }
  rep.result = std::move(acc);
  return rep;
}

// exp(-s L) v, the s-length continuous-time (heat-kernel) walk on the
// graph with normalized Laplacian L; I + sL/d is SDD, so the inner solves
// are the benign case of the rational path.
inline ApplyReport heat_kernel_apply(const WeightedGraph& g, const VectorReal& v, double s,
                                     double delta, const ApplyOptions& opt = {}) {
  if (!(s >= 0.0)) throw std::invalid_argument("heat_kernel_apply: s must be >= 0");
  if (s == 0.0) {
    ApplyReport rep;
    rep.method = "exp-rational";
    rep.certified_delta = delta;
    rep.result = v;
    return rep;
  }
  auto L = normalized_laplacian(g);
  ApplyOptions o = opt;
  o.norm_bound = 2.0;  // ||normalized Laplacian|| <= 2 always
  return exp_apply_rational(L, v, delta, o, s);
}

// A^{-1} v for eps I <= A <= I as the weighted sum of matrix exponentials
// sum_j w_j exp(-t_j A) v from the trapezoidal discretization of the
// integral identity for 1/x; each exponential runs the polynomial path
// at tolerance delta / (2 sum w_j).
inline ApplyReport inverse_apply_via_exp(const SparseSymMatrix& A, const VectorReal& v, double eps,
                                         double delta, const ApplyOptions& opt = {}) {
  if (v.size() != A.dim()) throw std::invalid_argument("inverse_apply_via_exp: dimension mismatch");
  ApplyReport rep;
  rep.method = "inv-expsum";
  rep.certified_delta = delta;

  ExpSumApprox es = inverse_expsum(eps, delta);
  rep.terms = static_cast<long long>(es.size());

  // Spectral sanity eps I <= A <= I, warn-only.
  double bnorm = opt.norm_bound > 0.0 ? opt.norm_bound
                                      : detail::norm_upper_bound(A, opt.seed, rep.aux_matvecs);
  if (bnorm > 1.1 * 1.05) rep.warn_spectrum = true;
  if (A.dim() > 1) {
    auto shifted = scaled_shifted(A, -1.0, bnorm);
    long long aux = 0;
    double lmin = bnorm - detail::norm_upper_bound(shifted, opt.seed + 3, aux) / 1.1;
    rep.aux_matvecs += aux;
    if (lmin < eps * 0.5) rep.warn_spectrum = true;
  }

  double wsum = 0.0;
  for (const auto& t : es.terms) wsum += t.w;
  const double delta_inner = delta / (2.0 * wsum);

  ApplyOptions term_opt = opt;
  term_opt.norm_bound = std::max(bnorm, 1.0);  // bound for A itself; scaled per term
  VectorReal acc(v.size(), 0.0);
  for (const auto& term : es.terms) {
    ApplyReport tr = exp_apply_poly(A, v, delta_inner, term_opt, term.t);
    rep.matvec_count += tr.matvec_count;
    rep.aux_matvecs += tr.aux_matvecs;
    if (!tr.converged) rep.converged = false;
    axpy(term.w, tr.result, acc);
  }
  rep.result = std::move(acc);
  return rep;
}

}  // namespace apx
