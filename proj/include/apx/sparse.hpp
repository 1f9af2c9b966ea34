#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "apx/vec.hpp"

namespace apx {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Symmetric sparse matrix. Each unordered index pair is stored once
// (upper triangle, row <= col) in a compressed row layout and mirrored
// during matvec, so symmetry is an invariant rather than a convention.
// Duplicate entries are coalesced by summing.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  SparseSymMatrix(std::size_t n, const std::vector<Triplet>& entries) : n_(n) {
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const auto& t : entries) {
      if (t.row >= n || t.col >= n)
        throw std::invalid_argument("SparseSymMatrix: index out of range");
      if (!std::isfinite(t.value))
        throw std::invalid_argument("SparseSymMatrix: non-finite value");
      auto key = std::minmax(t.row, t.col);
      acc[{key.first, key.second}] += t.value;
    }
    row_ptr_.assign(n + 1, 0);
    for (const auto& [ij, v] : acc) row_ptr_[ij.first + 1]++;
    for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] += row_ptr_[i];
    cols_.resize(acc.size());
    vals_.resize(acc.size());
    std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
    for (const auto& [ij, v] : acc) {
      std::size_t slot = fill[ij.first]++;
      cols_[slot] = ij.second;
      vals_[slot] = v;
    }
  }

  std::size_t dim() const { return n_; }
  std::size_t nnz() const { return vals_.size(); }

  // Stored (upper-triangle) entries, row-major.
  template <typename F>
  void for_each_stored(F&& f) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) f(i, cols_[k], vals_[k]);
  }

  double frobenius_scale() const {
    double s = 0.0;
    for (double v : vals_) s += v * v;
    return std::sqrt(s);
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;

  friend void matvec_into(const SparseSymMatrix&, std::span<const double>, std::span<double>,
                          double);
};

// y = scale * (A x). Fixed traversal order, so repeated calls are
// bit-identical. The scale factor realizes t A without materializing a
// scaled copy.
inline void matvec_into(const SparseSymMatrix& A, std::span<const double> x,
                        std::span<double> y, double s = 1.0) {
  if (x.size() != A.dim() || y.size() != A.dim())
    throw std::invalid_argument("matvec: dimension mismatch, matrix " + std::to_string(A.dim()) +
                                " vs vector " + std::to_string(x.size()));
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < A.n_; ++i) {
    for (std::size_t k = A.row_ptr_[i]; k < A.row_ptr_[i + 1]; ++k) {
      const std::size_t j = A.cols_[k];
      const double v = A.vals_[k];
      y[i] += v * x[j];
      if (j != i) y[j] += v * x[i];
    }
  }
  if (s != 1.0)
    for (double& t : y) t *= s;
}

inline VectorReal matvec(const SparseSymMatrix& A, std::span<const double> x, double s = 1.0) {
  VectorReal y(A.dim());
  matvec_into(A, x, y, s);
  return y;
}

inline SparseSymMatrix identity_matrix(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseSymMatrix(n, t);
}

inline SparseSymMatrix diagonal_matrix(std::span<const double> d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return SparseSymMatrix(d.size(), t);
}

// scale * A + shift * I, materialized once (used for the inner matrices
// of the rational exponential path).
inline SparseSymMatrix scaled_shifted(const SparseSymMatrix& A, double scale, double shift) {
  std::vector<Triplet> t;
  t.reserve(A.nnz() + A.dim());
  A.for_each_stored([&](std::size_t i, std::size_t j, double v) { t.push_back({i, j, v * scale}); });
  for (std::size_t i = 0; i < A.dim(); ++i) t.push_back({i, i, shift});
  return SparseSymMatrix(A.dim(), t);
}

}  // namespace apx
