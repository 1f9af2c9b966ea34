#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "apx/graph.hpp"
#include "apx/matfun.hpp"
#include "apx/vec.hpp"

namespace apx {

struct CutResult {
  std::vector<std::size_t> side;  // the smaller side of the cut, sorted
  double conductance = 0.0;
  long long sweep_index = 0;  // prefix length at which the best cut occurred
  VectorReal vector_used;
  double lambda_guess = 0.0;  // spectral-gap guess that produced it (0 = n/a)
};

// phi(S) = cut weight / min(vol S, vol S~).
inline double conductance(const WeightedGraph& g, const std::vector<std::size_t>& s) {
  const std::size_t n = g.num_vertices();
  if (s.empty() || s.size() >= n)
    throw std::invalid_argument("conductance: S must be a nonempty proper subset");
  std::vector<char> in(n, 0);
  for (auto v : s) {
    if (v >= n) throw std::invalid_argument("conductance: vertex out of range");
    in[v] = 1;
  }
  double cut = 0.0, vol = 0.0;
  for (const auto& e : g.edges())
    if (in[e.u] != in[e.v]) cut += e.w;
  for (auto v : s) vol += g.degrees()[v];
  double volc = g.volume() - vol;
  return cut / std::min(vol, volc);
}

// Best prefix cut of the vertices sorted by the D^{-1/2}-scaled embedding
// (stable tie-break by vertex id); all n-1 prefixes evaluated in one
// running-volume sweep.
inline CutResult sweep_cut(const WeightedGraph& g, const VectorReal& x) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n) throw std::invalid_argument("sweep_cut: dimension mismatch");
  VectorReal key(n);
  for (std::size_t i = 0; i < n; ++i) key[i] = x[i] / std::sqrt(g.degrees()[i]);
  double kmin = key[0], kmax = key[0];
  for (double k : key) {
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  if (!(kmax - kmin > 0.0)) throw std::invalid_argument("sweep_cut: constant embedding vector");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });

  // adjacency lists once, for incremental cut updates
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }

  const double total_vol = g.volume();
  std::vector<char> in(n, 0);
  double cut = 0.0, vol = 0.0;
  double best = 2.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t u = order[k];
    double w_in = 0.0;
    for (const auto& [nb, w] : adj[u])
      if (in[nb]) w_in += w;
    cut += g.degrees()[u] - 2.0 * w_in;
    vol += g.degrees()[u];
    in[u] = 1;
    double phi = cut / std::min(vol, total_vol - vol);
    if (phi < best) {
      best = phi;
      best_k = k + 1;
    }
  }

  CutResult r;
  r.sweep_index = static_cast<long long>(best_k);
  r.vector_used = x;
  std::vector<std::size_t> prefix(order.begin(), order.begin() + best_k);
  if (prefix.size() > n / 2) {
    std::vector<char> mark(n, 0);
    for (auto v : prefix) mark[v] = 1;
    r.side.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (!mark[v]) r.side.push_back(v);
  } else {
    r.side = std::move(prefix);
    std::sort(r.side.begin(), r.side.end());
  }
  r.conductance = conductance(g, r.side);
  return r;
}

namespace sparse_cut_constants {
// Empirical certificate constant: success means conductance <= 4 sqrt(lambda).
inline constexpr double cut_constant = 4.0;
}  // namespace sparse_cut_constants

// Sparse cut by accelerated power-method embedding (conductance
// O(sqrt(lambda)) with constant probability): random unit start orthogonal
// to the kernel direction, s-step walk compressed by power_apply, sweep
// cut of the result. lambda comes from the hint or a doubling schedule
// {1/2, 1/4, ..., 1/n^2}; the best sweep cut over the schedule is kept.
inline CutResult sparse_cut(const WeightedGraph& g, double lambda_hint, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("sparse_cut: need at least two vertices");

  // Disconnected input: report the exact disconnection cut (conductance 0).
  {
    auto label = component_labels(g);
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t v = 0; v < n; ++v) comps[label[v]].push_back(v);
    if (comps.size() > 1) {
      auto smallest = comps.begin();
      for (auto it = comps.begin(); it != comps.end(); ++it)
        if (it->second.size() < smallest->second.size()) smallest = it;
      CutResult r;
      r.side = smallest->second;
      r.conductance = 0.0;
      r.vector_used.assign(n, 0.0);
      for (auto v : r.side) r.vector_used[v] = 1.0;
      return r;
    }
  }

  std::vector<double> guesses;
  if (lambda_hint > 0.0) {
    guesses.push_back(std::min(lambda_hint, 0.5));
  } else {
    double floor_l = 1.0 / (double(n) * double(n));
    for (double l = 0.5; l >= floor_l; l /= 2.0) guesses.push_back(l);
  }

  // Lazy symmetrized walk (I + W)/2: spectrum in [0, 1], so the power
  // walk damps the negative end too (bipartite graphs put an eigenvalue
  // at -1 which plain W^s never attenuates). The spectral gap of the lazy
  // walk is lambda/2, which the step-count and error formulas use.
  auto M = scaled_shifted(walk_matrix_sym(g), 0.5, 0.5);
  VectorReal q = g.kernel_direction();

  CutResult best;
  best.conductance = 2.0;
  std::uint64_t sub_seed = seed;
  for (double lam : guesses) {
    ++sub_seed;
    VectorReal v = random_unit_vector(n, sub_seed);
    axpy(-dot(v, q), q, v);
    double vn = norm2(v);
    if (vn == 0.0) continue;
    scale(1.0 / vn, v);

    const double gap = lam / 2.0;
    long long s = static_cast<long long>(
        std::ceil(std::log(9.0 * double(n) / lam) / (2.0 * std::log(1.0 / (1.0 - gap)))));
    s = std::max<long long>(s, 1);
    double delta = std::sqrt(gap * std::pow(1.0 - gap, 2.0 * double(s)) * 2.0 / (9.0 * double(n)));
    delta = std::min(std::max(delta, 1e-14), 0.5);

    ApplyOptions opt;
    opt.seed = sub_seed;
    opt.check_norm = false;
    ApplyReport ar = power_apply(M, v, s, delta, opt);
    VectorReal& u = ar.result;
    axpy(-dot(u, q), q, u);  // re-project against kernel drift
    double un = norm2(u);
    if (un <= 1e-290) continue;
    scale(1.0 / un, u);
    CutResult c = sweep_cut(g, u);
    c.lambda_guess = lam;
    if (c.conductance < best.conductance) best = std::move(c);
  }
  if (best.side.empty()) throw std::runtime_error("sparse_cut: no usable embedding produced");
  return best;
}

}  // namespace apx
