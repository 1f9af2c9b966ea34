#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace apx {

// Thrown when the built-in grid certificate of a construction fails;
// never returned silently.
struct certificate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighted sum of decaying exponentials approximating 1/x on [eps, 1]:
//   (1-delta)/x <= sum_j w_j e^{-t_j x} <= (1+delta)/x,
// with w_j = h e^{jh} and t_j = e^{jh} for j = j_lo..j_hi. Obtained by
// trapezoidal discretization of 1/x = int e^{-x e^y + y} dy.
struct ExpSumApprox {
  struct Term {
    double w;
    double t;
  };
  std::vector<Term> terms;
  double eps = 0.0;
  double delta = 0.0;
  double h = 0.0;
  long long n_order = 0;  // Euler-Maclaurin order N behind the step-size choice
  long long j_lo = 0;
  long long j_hi = 0;

  std::size_t size() const { return terms.size(); }

  double eval(double x) const {
    double s = 0.0;
    for (const auto& [w, t] : terms) s += w * std::exp(-t * x);
    return s;
  }
};

namespace expsum_constants {
// Step-size schedule h = 1/(c_h N^2), N = ceil(c_n log(1/delta)). The grid
// certificate below is the binding contract; these values keep the term
// count well under the cubic polylog budget while the certificate holds
// across the working (eps, delta) range.
inline constexpr double c_n = 1.0;
inline constexpr double c_h = 1.0;
// Per-tail safety factor in the truncation indices (each tail gets a
// delta/c_trunc budget instead of the full delta).
inline constexpr double c_trunc = 2.0;
// Documented constant of the term-count invariant |terms| <= C log^3(1/(eps delta)).
inline constexpr double count_constant = 4.0;
// Certificate grid density.
inline constexpr int cert_grid_points = 10000;
}  // namespace expsum_constants

inline ExpSumApprox inverse_expsum(double eps, double delta) {
  namespace k = expsum_constants;
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("inverse_expsum: eps must lie in (0,1]");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("inverse_expsum: delta must lie in (0,1]");

  ExpSumApprox a;
  a.eps = eps;
  a.delta = delta;
  const double log1d = std::log(1.0 / delta);
  a.n_order = std::max<long long>(1, static_cast<long long>(std::ceil(k::c_n * log1d)));
  a.h = 1.0 / (k::c_h * double(a.n_order) * double(a.n_order));
  a.j_lo = static_cast<long long>(std::floor(-(1.0 / a.h) * std::log(k::c_trunc / delta)));
  a.j_hi = static_cast<long long>(
      std::ceil((1.0 / a.h) * std::log((k::c_trunc / eps) * std::max(log1d, 1.0))));
  if (a.j_hi < a.j_lo) a.j_hi = a.j_lo;

  a.terms.reserve(static_cast<std::size_t>(a.j_hi - a.j_lo + 1));
  for (long long j = a.j_lo; j <= a.j_hi; ++j) {
    double t = std::exp(double(j) * a.h);
    a.terms.push_back({a.h * t, t});
  }

  const double budget = k::count_constant * std::pow(std::log(1.0 / (eps * delta)), 3.0);
  if (double(a.terms.size()) > std::max(budget, 8.0))
    throw certificate_error("inverse_expsum: term count " + std::to_string(a.terms.size()) +
                            " exceeds cubic polylog budget");

  // Grid certificate: relative error within delta on a log-spaced grid of
  // [eps, 1] including both endpoints.
  const int n = k::cert_grid_points;
  const double llo = std::log(eps);
  for (int i = 0; i < n; ++i) {
    double x = std::exp(llo + (0.0 - llo) * double(i) / double(n - 1));
    if (i == 0) x = eps;
    if (i == n - 1) x = 1.0;
    double rel = std::fabs(a.eval(x) * x - 1.0);
    if (!(rel <= delta))
      throw certificate_error("inverse_expsum: certificate failed at x=" + std::to_string(x) +
                              " rel_err=" + std::to_string(rel) +
                              " (constants need retuning)");
  }
  return a;
}

}  // namespace apx
