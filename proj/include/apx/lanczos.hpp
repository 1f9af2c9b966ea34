#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "apx/dense_ref.hpp"
#include "apx/sparse.hpp"
#include "apx/vec.hpp"

namespace apx {

// Krylov decomposition A V = V T (+ residual): V has orthonormal columns
// v_0..v_k, T = V^T A V is tridiagonal with diagonal alpha and
// off-diagonal beta.
struct LanczosDecomp {
  std::vector<VectorReal> V;
  std::vector<double> alpha;
  std::vector<double> beta;
  long long k = 0;  // Krylov order actually reached
  std::uint64_t seed = 0;
};

struct LanczosOptions {
  // Full re-orthogonalization against all stored basis vectors; the
  // two-term recurrence of exact arithmetic is available behind this flag.
  bool full_reorth = true;
  double breakdown_tol = 1e-12;  // relative to a running norm estimate
};

namespace detail {

// Eigendecomposition of a symmetric tridiagonal matrix by the implicit
// shift QL algorithm, with optional eigenvector accumulation. Eigenvalues
// ascend.
inline void tridiag_eig(std::vector<double>& diag, std::vector<double>& off,
                        std::vector<VectorReal>* vecs) {
  const std::size_t n = diag.size();
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = off[i - 1];
  if (vecs) {
    vecs->assign(n, VectorReal(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) (*vecs)[i][i] = 1.0;
  }
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tridiag_eig: too many QL iterations");
        double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i], b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          if (vecs) {
            for (std::size_t row = 0; row < n; ++row) {
              double fv = (*vecs)[i + 1][row];
              (*vecs)[i + 1][row] = s * (*vecs)[i][row] + c * fv;
              (*vecs)[i][row] = c * (*vecs)[i][row] - s * fv;
            }
          }
        }
        if (r == 0.0 && m - l > 1) continue;
        diag[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  // sort ascending, carrying eigenvectors along
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return diag[a] < diag[b];
  });
  std::vector<double> d2(n);
  std::vector<VectorReal> v2;
  if (vecs) v2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = diag[idx[i]];
    if (vecs) v2[i] = std::move((*vecs)[idx[i]]);
  }
  diag = std::move(d2);
  if (vecs) *vecs = std::move(v2);
}

}  // namespace detail

inline LanczosDecomp lanczos_decomp(const SparseSymMatrix& A, long long k, std::uint64_t seed,
                                    const VectorReal* start = nullptr,
                                    const LanczosOptions& opt = {}) {
  const std::size_t n = A.dim();
  if (k < 0 || static_cast<std::size_t>(k) >= n)
    throw std::invalid_argument("lanczos_decomp: requires 0 <= k < n");
  LanczosDecomp L;
  L.seed = seed;
  VectorReal q = start ? *start : random_unit_vector(n, seed);
  if (start) {
    double nn = norm2(q);
    if (nn == 0.0) throw std::invalid_argument("lanczos_decomp: zero start vector");
    scale(1.0 / nn, q);
  }
  L.V.push_back(q);
  VectorReal w(n);
  double scale_est = 0.0;
  for (long long j = 0; j <= k; ++j) {
    matvec_into(A, L.V.back(), w);
    double a = dot(w, L.V.back());
    L.alpha.push_back(a);
    scale_est = std::max(scale_est, std::fabs(a));
    if (j == k) break;
    axpy(-a, L.V.back(), w);
    if (L.V.size() >= 2) axpy(-L.beta.back(), L.V[L.V.size() - 2], w);
    if (opt.full_reorth) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& vprev : L.V) axpy(-dot(w, vprev), vprev, w);
    }
    double b = norm2(w);
    scale_est = std::max(scale_est, b);
    if (b <= opt.breakdown_tol * std::max(scale_est, 1e-300)) break;  // invariant subspace
    L.beta.push_back(b);
    scale(1.0 / b, w);
    L.V.push_back(w);
  }
  L.k = static_cast<long long>(L.V.size()) - 1;
  return L;
}

// Eigenvalues (ascending) and optionally eigenvectors of T.
inline VectorReal lanczos_t_eigs(const LanczosDecomp& L, std::vector<VectorReal>* vecs = nullptr) {
  std::vector<double> d = L.alpha, e = L.beta;
  detail::tridiag_eig(d, e, vecs);
  return d;
}

struct EigEstimate {
  double value = 0.0;
  VectorReal witness;
  long long k_used = 0;
};

// mu = lambda_1(T) for a Krylov space of order k = ceil((1/sqrt(delta))
// log(n/delta)); always mu <= lambda_1(A), and mu >= (1-delta) lambda_1(A)
// with constant probability over the seeded start vector (A PSD).
inline EigEstimate lanczos_lambda_max(const SparseSymMatrix& A, double delta, std::uint64_t seed) {
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("lanczos_lambda_max: delta must lie in (0,1)");
  const std::size_t n = A.dim();
  const double nn = double(std::max<std::size_t>(n, 2));
  long long k = static_cast<long long>(std::ceil(std::log(nn / delta) / std::sqrt(delta)));
  k = std::min<long long>(k, static_cast<long long>(n) - 1);
  auto L = lanczos_decomp(A, k, seed);
  std::vector<VectorReal> tv;
  auto ev = lanczos_t_eigs(L, &tv);
  EigEstimate est;
  est.k_used = L.k;
  est.value = ev.back();
  const auto& w = tv.back();
  est.witness.assign(n, 0.0);
  for (std::size_t c = 0; c < L.V.size(); ++c) axpy(w[c], L.V[c], est.witness);
  double wn = norm2(est.witness);
  if (wn > 0) scale(1.0 / wn, est.witness);
  return est;
}

// Top-r eigenpair estimates; on gap-respecting inputs each mu_i lies in
// [(1-delta/3) lambda_i, lambda_i]. Without the gap assumption the output
// is a heuristic.
inline std::vector<EigEstimate> lanczos_top_r(const SparseSymMatrix& A, long long r, double delta,
                                              std::uint64_t seed) {
  if (r < 1) throw std::invalid_argument("lanczos_top_r: r must be >= 1");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("lanczos_top_r: delta must lie in (0,1)");
  const std::size_t n = A.dim();
  const double nn = double(std::max<std::size_t>(n, 2));
  long long k = static_cast<long long>(
      std::ceil(double(r) * std::log(nn * double(r) / delta) / std::sqrt(delta)));
  k = std::min<long long>(k, static_cast<long long>(n) - 1);
  auto L = lanczos_decomp(A, k, seed);
  std::vector<VectorReal> tv;
  auto ev = lanczos_t_eigs(L, &tv);
  r = std::min<long long>(r, static_cast<long long>(ev.size()));
  std::vector<EigEstimate> out;
  for (long long i = 0; i < r; ++i) {
    EigEstimate e;
    e.k_used = L.k;
    e.value = ev[ev.size() - 1 - static_cast<std::size_t>(i)];
    const auto& w = tv[tv.size() - 1 - static_cast<std::size_t>(i)];
    e.witness.assign(n, 0.0);
    for (std::size_t c = 0; c < L.V.size(); ++c) axpy(w[c], L.V[c], e.witness);
    double wn = norm2(e.witness);
    if (wn > 0) scale(1.0 / wn, e.witness);
    out.push_back(std::move(e));
  }
  return out;
}

struct FApplyResult {
  VectorReal result;
  bool dense_fallback = false;
  long long k_used = 0;
};

// V f(T) V^T v with the Krylov space grown from v itself; the error is
// within twice the best degree-k uniform error of f on the spectral
// interval. k >= n falls back to the dense oracle.
inline FApplyResult lanczos_f_apply(const SparseSymMatrix& A, const VectorReal& v,
                                    const std::function<double(double)>& f, long long k) {
  const std::size_t n = A.dim();
  if (v.size() != n) throw std::invalid_argument("lanczos_f_apply: dimension mismatch");
  FApplyResult out;
  double vn = norm2(v);
  if (vn == 0.0) {
    out.result.assign(n, 0.0);
    return out;
  }
  if (static_cast<std::size_t>(k) >= n) {
    detail::check_oracle_cap(A, "lanczos_f_apply dense fallback");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A));
    Eigen::Map<const Eigen::VectorXd> vv(v.data(), long(n));
    Eigen::VectorXd y = es.eigenvectors().transpose() * vv;
    for (long i = 0; i < y.size(); ++i) y(i) *= f(es.eigenvalues()(i));
    Eigen::VectorXd r = es.eigenvectors() * y;
    out.result.assign(r.data(), r.data() + r.size());
    out.dense_fallback = true;
    out.k_used = static_cast<long long>(n);
    return out;
  }
  auto L = lanczos_decomp(A, k, /*seed=*/0, &v);
  std::vector<VectorReal> tv;
  auto ev = lanczos_t_eigs(L, &tv);
  // f(T) e_0 * ||v||: columns of tv are T's eigenvectors in the V basis.
  const std::size_t m = ev.size();
  VectorReal ft_e0(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double c = f(ev[i]) * tv[i][0] * vn;
    for (std::size_t row = 0; row < m; ++row) ft_e0[row] += c * tv[i][row];
  }
  out.result.assign(n, 0.0);
  for (std::size_t c = 0; c < m; ++c) axpy(ft_e0[c], L.V[c], out.result);
  out.k_used = L.k;
  return out;
}

}  // namespace apx
