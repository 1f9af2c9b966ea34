#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "apx/sparse.hpp"
#include "apx/vec.hpp"

namespace apx {

struct Edge {
  std::size_t u;
  std::size_t v;
  double w;
};

// Undirected weighted graph without self-loops or isolated vertices.
// Duplicate edges are coalesced by summing weights.
class WeightedGraph {
 public:
  WeightedGraph(std::size_t n, const std::vector<Edge>& edges) : n_(n), degree_(n, 0.0) {
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw std::invalid_argument("WeightedGraph: vertex out of range");
      if (e.u == e.v) throw std::invalid_argument("WeightedGraph: self-loop rejected");
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw std::invalid_argument("WeightedGraph: edge weight must be positive");
      acc[std::minmax(e.u, e.v)] += e.w;
    }
    edges_.reserve(acc.size());
    for (const auto& [uv, w] : acc) {
      edges_.push_back({uv.first, uv.second, w});
      degree_[uv.first] += w;
      degree_[uv.second] += w;
    }
    for (std::size_t i = 0; i < n_; ++i)
      if (!(degree_[i] > 0.0))
        throw std::invalid_argument("WeightedGraph: isolated vertex " + std::to_string(i));
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const VectorReal& degrees() const { return degree_; }
  double volume() const {
    double s = 0.0;
    for (double d : degree_) s += d;
    return s;
  }

  // Unit vector along D^{1/2} 1, the kernel direction of the normalized
  // Laplacian on connected graphs.
  VectorReal kernel_direction() const {
    VectorReal q(n_);
    for (std::size_t i = 0; i < n_; ++i) q[i] = std::sqrt(degree_[i]);
    scale(1.0 / norm2(q), q);
    return q;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  VectorReal degree_;
};

// W = D^{-1/2} A D^{-1/2}, the symmetrized walk matrix; all eigenvalues
// lie in [-1, 1].
inline SparseSymMatrix walk_matrix_sym(const WeightedGraph& g) {
  const auto& deg = g.degrees();
  std::vector<Triplet> t;
  t.reserve(g.num_edges());
  for (const auto& e : g.edges())
    t.push_back({e.u, e.v, e.w / std::sqrt(deg[e.u] * deg[e.v])});
  return SparseSymMatrix(g.num_vertices(), t);
}

// Normalized Laplacian I - D^{-1/2} A D^{-1/2}: PSD with kernel D^{1/2} 1.
inline SparseSymMatrix normalized_laplacian(const WeightedGraph& g) {
  const auto& deg = g.degrees();
  std::vector<Triplet> t;
  t.reserve(g.num_edges() + g.num_vertices());
  for (std::size_t i = 0; i < g.num_vertices(); ++i) t.push_back({i, i, 1.0});
  for (const auto& e : g.edges())
    t.push_back({e.u, e.v, -e.w / std::sqrt(deg[e.u] * deg[e.v])});
  return SparseSymMatrix(g.num_vertices(), t);
}

// Connected components by union-find; used for the disconnection fast path
// of the cut finder.
inline std::vector<std::size_t> component_labels(const WeightedGraph& g) {
  std::vector<std::size_t> parent(g.num_vertices());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.u), b = find(e.v);
    if (a != b) parent[a] = b;
  }
  std::vector<std::size_t> label(g.num_vertices());
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = find(i);
  return label;
}

}  // namespace apx
