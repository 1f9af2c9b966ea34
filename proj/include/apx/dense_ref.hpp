#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "apx/sparse.hpp"
#include "apx/vec.hpp"

// Dense reference oracles via full symmetric eigendecomposition,
// f(A) = U f(Lambda) U^T. Backed by Eigen so the reference path shares no
// code with the iterative solvers it checks.

namespace apx {

inline constexpr std::size_t dense_oracle_cap = 500;

inline Eigen::MatrixXd to_dense(const SparseSymMatrix& A) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(long(A.dim()), long(A.dim()));
  A.for_each_stored([&](std::size_t i, std::size_t j, double v) {
    M(long(i), long(j)) = v;
    M(long(j), long(i)) = v;
  });
  return M;
}

namespace detail {
inline void check_oracle_cap(const SparseSymMatrix& A, const char* who) {
  if (A.dim() > dense_oracle_cap)
    throw std::invalid_argument(std::string(who) + ": n=" + std::to_string(A.dim()) +
                                " exceeds dense oracle cap " + std::to_string(dense_oracle_cap));
}
}  // namespace detail

// Eigenvalues in ascending order.
inline VectorReal dense_eigs_ref(const SparseSymMatrix& A) {
  detail::check_oracle_cap(A, "dense_eigs_ref");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A), Eigen::EigenvaluesOnly);
  VectorReal out(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i) out[i] = es.eigenvalues()(long(i));
  return out;
}

// exp(-A) as a dense matrix.
inline Eigen::MatrixXd dense_expm_ref(const SparseSymMatrix& A) {
  detail::check_oracle_cap(A, "dense_expm_ref");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A));
  Eigen::VectorXd el = (-es.eigenvalues().array()).exp().matrix();
  return es.eigenvectors() * el.asDiagonal() * es.eigenvectors().transpose();
}

inline VectorReal dense_expm_apply_ref(const SparseSymMatrix& A, std::span<const double> v) {
  Eigen::MatrixXd E = dense_expm_ref(A);
  Eigen::Map<const Eigen::VectorXd> vv(v.data(), long(v.size()));
  Eigen::VectorXd r = E * vv;
  return VectorReal(r.data(), r.data() + r.size());
}

inline VectorReal dense_solve_ref(const SparseSymMatrix& A, std::span<const double> v) {
  detail::check_oracle_cap(A, "dense_solve_ref");
  if (v.size() != A.dim()) throw std::invalid_argument("dense_solve_ref: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A));
  double lmax = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    lmax = std::max(lmax, std::fabs(es.eigenvalues()(i)));
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (std::fabs(es.eigenvalues()(i)) <= 1e-13 * std::max(lmax, 1.0))
      throw std::invalid_argument("dense_solve_ref: matrix is singular to working precision");
  Eigen::Map<const Eigen::VectorXd> vv(v.data(), long(v.size()));
  Eigen::VectorXd y = es.eigenvectors().transpose() * vv;
  for (long i = 0; i < y.size(); ++i) y(i) /= es.eigenvalues()(i);
  Eigen::VectorXd r = es.eigenvectors() * y;
  return VectorReal(r.data(), r.data() + r.size());
}

}  // namespace apx
