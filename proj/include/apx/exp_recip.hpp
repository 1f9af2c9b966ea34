#pragma once

#include <cmath>
#include <stdexcept>

namespace apx {

// S_d(x) = sum_{k<=d} x^k / k!, the degree-d Taylor prefix of e^x,
// accumulated Horner-style: S = 1 + x/1 (1 + x/2 (... (1 + x/d))).
inline double taylor_exp_prefix(long long d, double x) {
  double s = 1.0;
  for (long long k = d; k >= 1; --k) s = s * (x / double(k)) + 1.0;
  return s;
}

// 1/S_d(x), the reciprocal-Taylor approximation to e^{-x} on [0, inf).
// Always in (0, 1] and >= e^{-x} there (S_d(x) <= e^x); uniform error
// decays like 2^{-d}.
inline double taylor_recip_eval(long long d, double x) {
  if (d < 0) throw std::invalid_argument("taylor_recip_eval: d must be >= 0");
  if (!(x >= 0.0)) throw std::invalid_argument("taylor_recip_eval: x must be >= 0");
  if (d == 0) return 1.0;
  double s = taylor_exp_prefix(d, x);
  if (std::isinf(s)) return 0.0;
  return 1.0 / s;
}

}  // namespace apx
