#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace apx {

using VectorReal = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: size mismatch " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// Deterministic Gaussian sampler. std::normal_distribution's output sequence
// is implementation-defined, so seeded reproducibility uses a fixed
// Box-Muller transform over mt19937_64 draws instead.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  double uniform01() {
    // 53-bit mantissa draw in [0,1)
    return double(eng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline VectorReal random_unit_vector(std::size_t n, std::uint64_t seed) {
  GaussianSampler g(seed);
  VectorReal v(n);
  double nrm = 0.0;
  do {
    for (auto& x : v) x = g();
    nrm = norm2(v);
  } while (nrm == 0.0);
  scale(1.0 / nrm, v);
  return v;
}

}  // namespace apx
