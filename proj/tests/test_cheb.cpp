#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "apx/cheb.hpp"
#include "oracles.hpp"

using namespace apx;

TEST_CASE("cheb_eval basics", "[cheb]") {
  CHECK(cheb_eval(0, 0.3) == 1.0);
  CHECK(cheb_eval(7, std::cos(0.4)) == Approx(std::cos(7 * 0.4)).margin(1e-12));
  CHECK(cheb_eval(3, 2.0) == 26.0);  // T_2(2)=7, T_3(2)=2*2*7-2
  CHECK(cheb_eval(-5, 0.37) == cheb_eval(5, 0.37));
}

TEST_CASE("cheb trig identity and boundedness", "[cheb][property]") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> theta(0.0, 6.283185307179586);
  std::uniform_int_distribution<long long> deg(0, 50);
  for (int i = 0; i < 1000; ++i) {
    long long d = deg(eng);
    double th = theta(eng);
    CHECK(std::fabs(cheb_eval(d, std::cos(th)) - std::cos(double(d) * th)) <= 1e-10);
  }
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double x = xs(eng);
    CHECK(std::fabs(cheb_eval(deg(eng), x)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("Markov tightness: T_d'(1) = d^2 exactly", "[cheb]") {
  for (long long d = 0; d <= 30; ++d) CHECK(cheb_deriv_at_one(d) == double(d * d));
}

TEST_CASE("extremal approximation of x^d (degree d-1)", "[cheb]") {
  // x^d - 2^{1-d} T_d is degree d-1 and misses x^d by exactly 2^{1-d}.
  for (long long d = 1; d <= 12; ++d) {
    MonomialPoly td = cheb_monomial_coeffs(d);
    std::vector<double> approx(static_cast<std::size_t>(d), 0.0);
    const double s = std::pow(2.0, 1.0 - double(d));
    for (std::size_t i = 0; i + 1 < td.coeffs.size(); ++i) approx[i] = -s * td.coeffs[i];
    REQUIRE(td.coeffs.back() * s == 1.0);  // leading terms cancel exactly
    MonomialPoly p(approx);
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      double x = -1.0 + 2.0 * i / 4000.0;
      sup = std::max(sup, std::fabs(std::pow(x, double(d)) - p.eval(x)));
    }
    CHECK(sup == Approx(s).margin(1e-12));
  }
}

TEST_CASE("cheb_series_eval examples", "[cheb]") {
  ChebSeries one({1.0}, {-1.0, 1.0});
  CHECK(cheb_series_eval(one, 0.77) == 1.0);
  ChebSeries xsq({0.5, 0.0, 0.5}, {-1.0, 1.0});
  CHECK(cheb_series_eval(xsq, 0.3) == Approx(0.09).margin(1e-15));

  // p_{8,4} at 0.9 against the 2^8 sign-sequence enumeration
  ChebSeries p84 = monomial_cheb_coeffs(8, 4);
  CHECK(cheb_series_eval(p84, 0.9) == Approx(oracle::brute_force_psd(8, 4, 0.9)).margin(1e-12));
}

TEST_CASE("cheb_series_eval agrees with naive summation", "[cheb][property]") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t d = 1 + static_cast<std::size_t>(eng() % 30);
    std::vector<double> c(d + 1);
    for (auto& v : c) v = u(eng);
    ChebSeries s(c, {-2.0, 3.0});
    double x = -2.0 + 5.0 * std::generate_canonical<double, 53>(eng);
    double z = 2.0 * (x + 2.0) / 5.0 - 1.0;
    double naive = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) naive += c[j] * oracle::cheb_closed_form(long(j), z);
    CHECK(cheb_series_eval(s, x) == Approx(naive).margin(1e-12 * (1.0 + std::fabs(naive))));
  }
}

TEST_CASE("monomial_cheb_coeffs exact small cases", "[cheb]") {
  auto c22 = monomial_cheb_coeffs(2, 2);
  REQUIRE(c22.coeffs.size() == 3);
  CHECK(c22.coeffs[0] == 0.5);
  CHECK(c22.coeffs[2] == 0.5);

  auto c33 = monomial_cheb_coeffs(3, 3);
  CHECK(c33.coeffs[1] == 0.75);
  CHECK(c33.coeffs[3] == 0.25);

  auto c42 = monomial_cheb_coeffs(4, 2);
  CHECK(c42.coeffs[0] == 0.375);
  CHECK(c42.coeffs[2] == 0.5);
  // tail coefficient of T_4 is 1/8; sup error attained at +-1
  double sup = 0.0, at = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    double x = -1.0 + 2.0 * i / 10000.0;
    double e = std::fabs(cheb_series_eval(c42, x) - std::pow(x, 4.0));
    if (e > sup) {
      sup = e;
      at = x;
    }
  }
  CHECK(sup == Approx(0.125).margin(1e-12));
  CHECK(std::fabs(at) == Approx(1.0).margin(1e-9));
}

TEST_CASE("monomial_cheb_coeffs degenerate and error cases", "[cheb]") {
  auto c0 = monomial_cheb_coeffs(0, 5);
  REQUIRE(c0.coeffs.size() == 1);
  CHECK(c0.coeffs[0] == 1.0);
  CHECK_THROWS_AS(monomial_cheb_coeffs(-1, 3), std::invalid_argument);
  CHECK_THROWS_AS(monomial_cheb_coeffs(3, -1), std::invalid_argument);
}

TEST_CASE("exact-degree recovery: p_{s,s} = x^s", "[cheb][property]") {
  for (long long s : {1, 2, 3, 5, 8, 13, 21}) {
    ChebSeries c = monomial_cheb_coeffs(s, s);
    for (int i = 0; i <= 200; ++i) {
      double x = -1.0 + 2.0 * i / 200.0;
      CHECK(cheb_series_eval(c, x) == Approx(std::pow(x, double(s))).margin(1e-12));
    }
  }
}

TEST_CASE("compression bound of p_{s,d}", "[cheb][property]") {
  const double delta = 1e-4;
  for (long long s : {50, 500, 5000}) {
    long long d = static_cast<long long>(std::ceil(std::sqrt(2.0 * double(s) * std::log(2.0 / delta))));
    ChebSeries c = monomial_cheb_coeffs(s, d);
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      double x = -1.0 + 2.0 * i / 20000.0;
      sup = std::max(sup, std::fabs(cheb_series_eval(c, x) - std::pow(x, double(s))));
    }
    CHECK(sup <= delta);
  }
}

TEST_CASE("exp_poly_coeffs meets delta and matches exact-binomial oracle", "[cheb]") {
  const double b = 4.0, delta = 1e-6;
  ChebSeries r = exp_poly_coeffs(b, delta);

  // certificate on [0, b]
  double sup = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    double x = b * i / 10000.0;
    sup = std::max(sup, std::fabs(std::exp(-x) - cheb_series_eval(r, x)));
  }
  CHECK(sup <= delta);
  CHECK(std::fabs(cheb_series_eval(r, 0.0) - 1.0) <= delta);

  // Oracle: same weighted sum with exact rational binomial coefficients,
  // c_j = sum_i e^-l (-l)^i/i! * m_i 2^{-i} binom(i, (i+j)/2).
  const double lambda = b / 2.0;
  const long long d = r.degree();
  const long long t = apx::detail::poisson_tail_cutoff(lambda, delta / 2.0);
  std::vector<double> expect(static_cast<std::size_t>(d) + 1, 0.0);
  double w = std::exp(-lambda);
  for (long long i = 0; i <= t; ++i) {
    if (i > 0) w *= -lambda / double(i);
    for (long long j = i % 2; j <= std::min(i, d); j += 2) {
      double binom = 1.0;
      long long m = (i + j) / 2;
      for (long long q = 1; q <= m; ++q) binom = binom * double(i - m + q) / double(q);
      double coeff = (j == 0 ? 1.0 : 2.0) * std::pow(2.0, -double(i)) * binom;
      expect[static_cast<std::size_t>(j)] += w * coeff;
    }
  }
  for (std::size_t j = 0; j < expect.size(); ++j)
    CHECK(r.coeffs[j] == Approx(expect[j]).margin(1e-12));
}

TEST_CASE("exp_poly_coeffs validation", "[cheb]") {
  CHECK_THROWS_AS(exp_poly_coeffs(10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(exp_poly_coeffs(10.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(exp_poly_coeffs(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("ChebSeries and MonomialPoly invariants", "[cheb]") {
  CHECK_THROWS_AS(ChebSeries({}, {-1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChebSeries({1.0, std::nan("")}, {-1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChebSeries({1.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MonomialPoly(std::vector<double>{}), std::invalid_argument);
  ChebSeries s({1.0, 2.0, 0.0}, {-1.0, 1.0});
  CHECK(s.degree() == 2);  // trailing zeros count toward the reported degree
}
