#pragma once

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace apx {

// Arbitrary-precision real with explicit working precision in bits,
// backed by MPFR (correctly rounded, round-to-nearest). Binary operations
// round to the larger of the two operand precisions.
class BigReal {
 public:
  static constexpr unsigned min_precision = 64;

  explicit BigReal(unsigned prec_bits = min_precision) {
    check_prec(prec_bits);
    mpfr_init2(v_, prec_bits);
    mpfr_set_zero(v_, 1);
  }
  BigReal(double x, unsigned prec_bits) {
    check_prec(prec_bits);
    mpfr_init2(v_, prec_bits);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  BigReal(long x, unsigned prec_bits) {
    check_prec(prec_bits);
    mpfr_init2(v_, prec_bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Exponent e with |x| in [2^{e-1}, 2^e); 0 for x = 0.
  long exponent2() const { return is_zero() ? 0 : mpfr_get_exp(v_); }

  std::string str(std::size_t digits = 30) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(joint_prec(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(joint_prec(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(joint_prec(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(joint_prec(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  BigReal operator-() const {
    BigReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  BigReal& operator+=(const BigReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator-=(const BigReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(const BigReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator/=(const BigReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  BigReal& mul_si(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
  BigReal& div_si(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  friend BigReal abs(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal exp(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal log(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal sqrt(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  // Exponential integral Ei; used as an independent cross-check of the
  // series-based E_j pipeline (E_1(x) = -Ei(-x)).
  friend BigReal eint(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_eint(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  static BigReal euler_gamma(unsigned prec_bits) {
    BigReal r(prec_bits);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }
  static BigReal pow2(long e, unsigned prec_bits) {
    BigReal r(prec_bits);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  BigReal rounded(unsigned prec_bits) const {
    check_prec(prec_bits);
    BigReal r(prec_bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  static void check_prec(unsigned p) {
    if (p < min_precision) throw std::invalid_argument("BigReal: precision must be >= 64 bits");
  }
  static unsigned joint_prec(const BigReal& a, const BigReal& b) {
    return std::max(a.precision(), b.precision());
  }

  mpfr_t v_;
};

}  // namespace apx
