#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "apx/lanczos.hpp"
#include "apx/sparse.hpp"
#include "apx/vec.hpp"

namespace apx {

struct SolverOptions {
  double kappa_hint = 0.0;       // condition number if the caller knows it
  long long max_iters = 0;       // 0 = ten times the theory bound
  bool record_iterates = false;  // keep per-iteration solutions (test support)
  std::uint64_t seed = 20240101; // seeds the spectrum estimation
};

// residual_history norms: gd stores 2-norm residuals ||v - A x_t||; cg
// stores the A-norm error proxy sqrt(sum_{i>=t} alpha_i ||r_i||^2), which
// is non-increasing by construction.
struct SolveReport {
  VectorReal solution;
  long long iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  double target_delta = 0.0;
  double kappa_used = 0.0;
  std::vector<VectorReal> iterates;  // only when record_iterates
};

namespace detail {

// Condition number estimate: lambda_max by Lanczos, lambda_min through the
// shifted matrix lambda_max_est * 1.05 I - A (largest eigenvalue of the
// shift recovers the smallest of A without inner solves).
inline double estimate_kappa(const SparseSymMatrix& A, std::uint64_t seed) {
  const std::size_t n = A.dim();
  if (n <= 1) return 1.0;
  double dl = 0.25;
  auto top = lanczos_lambda_max(A, dl, seed);
  double lmax = std::max(top.value, 1e-300);
  double shift = lmax * 1.05;
  auto shifted = scaled_shifted(A, -1.0, shift);
  auto bot = lanczos_lambda_max(shifted, dl, seed + 1);
  double lmin = shift - bot.value;
  if (!(lmin > 0.0)) lmin = lmax * 1e-12;
  return std::max(1.0, 1.2 * lmax / lmin);  // 20% safety inflation
}

}  // namespace detail

// Steepest descent with exact line search: x_{t+1} = x_t + alpha_t r_t,
// alpha_t = r^T r / r^T A r. Needs about kappa log(1/delta) iterations.
// Guarantee on exit: ||x - A^{-1}v||_A <= delta ||A^{-1}v||_A, enforced
// through the residual criterion ||r|| <= delta ||v|| / sqrt(kappa).
inline SolveReport gd_solve(const SparseSymMatrix& A, const VectorReal& v, double delta,
                            const SolverOptions& opt = {}) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("gd_solve: delta must lie in (0,1)");
  if (v.size() != A.dim()) throw std::invalid_argument("gd_solve: dimension mismatch");
  const std::size_t n = A.dim();
  SolveReport rep;
  rep.target_delta = delta;
  rep.solution.assign(n, 0.0);
  const double vnorm = norm2(v);
  if (vnorm == 0.0) {
    rep.converged = true;
    return rep;
  }
  const double kappa = opt.kappa_hint > 0.0 ? opt.kappa_hint : detail::estimate_kappa(A, opt.seed);
  rep.kappa_used = kappa;
  const double tol = delta * vnorm / std::sqrt(kappa);
  long long cap = opt.max_iters > 0
                      ? opt.max_iters
                      : 10 * static_cast<long long>(std::ceil(kappa * std::log(1.0 / (delta / std::sqrt(kappa)))) + 2);
  VectorReal r = v, ar(n);
  while (rep.iterations < cap) {
    double rr = dot(r, r);
    if (std::sqrt(rr) <= tol) {
      rep.converged = true;
      break;
    }
    matvec_into(A, r, ar);
    double rar = dot(r, ar);
    if (!(rar > 0.0)) throw std::invalid_argument("gd_solve: r^T A r <= 0, input not positive definite");
    double alpha = rr / rar;
    axpy(alpha, r, rep.solution);
    axpy(-alpha, ar, r);
    ++rep.iterations;
    rep.residual_history.push_back(norm2(r));
    if (opt.record_iterates) rep.iterates.push_back(rep.solution);
  }
  if (!rep.converged && norm2(r) <= tol) rep.converged = true;
  return rep;
}

// Conjugate gradient with the two-term A-orthogonalization. A-norm error
// guarantee as in gd_solve, reached in O(sqrt(kappa) log(1/delta))
// iterations.
inline SolveReport cg_solve(const SparseSymMatrix& A, const VectorReal& v, double delta,
                            const SolverOptions& opt = {}) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("cg_solve: delta must lie in (0,1)");
  if (v.size() != A.dim()) throw std::invalid_argument("cg_solve: dimension mismatch");
  const std::size_t n = A.dim();
  SolveReport rep;
  rep.target_delta = delta;
  rep.solution.assign(n, 0.0);
  const double vnorm = norm2(v);
  if (vnorm == 0.0) {
    rep.converged = true;
    return rep;
  }
  const double kappa = opt.kappa_hint > 0.0 ? opt.kappa_hint : detail::estimate_kappa(A, opt.seed);
  rep.kappa_used = kappa;
  const double tol = delta * vnorm / std::sqrt(kappa);
  long long cap = opt.max_iters > 0
                      ? opt.max_iters
                      : 10 * static_cast<long long>(
                                 std::ceil(std::sqrt(kappa) * std::log(1.0 / (delta / std::sqrt(kappa)))) + 2);
  cap = std::min<long long>(cap, 4 * static_cast<long long>(n) + 64);

  VectorReal r = v, p = v, ap(n);
  double rr = dot(r, r);
  std::vector<double> step_energy;  // alpha_i ||r_i||^2 terms of the A-norm identity
  while (rep.iterations < cap) {
    if (std::sqrt(rr) <= tol) {
      rep.converged = true;
      break;
    }
    matvec_into(A, p, ap);
    double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      if (norm2(p) <= 1e-14 * vnorm) break;  // direction breakdown
      throw std::invalid_argument("cg_solve: p^T A p <= 0, input not positive definite");
    }
    double alpha = rr / pap;
    axpy(alpha, p, rep.solution);
    axpy(-alpha, ap, r);
    double rr_new = dot(r, r);
    step_energy.push_back(alpha * rr);
    ++rep.iterations;
    if (opt.record_iterates) rep.iterates.push_back(rep.solution);
    double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  rep.converged = rep.converged || std::sqrt(rr) <= tol;
  // A-norm error proxy after iteration t: ||e_t||_A^2 = sum_{i > t} alpha_i ||r_i||^2.
  rep.residual_history.assign(step_energy.size(), 0.0);
  double tail = 0.0;
  for (std::size_t i = step_energy.size(); i-- > 0;) {
    rep.residual_history[i] = std::sqrt(tail);
    tail += step_energy[i];
  }
  return rep;
}

}  // namespace apx
