#include <catch2/catch.hpp>

#include <cmath>

#include "apx/exp_recip.hpp"
#include "apx/expsum.hpp"

using namespace apx;

TEST_CASE("taylor_recip basics", "[recip]") {
  for (long long d : {0, 1, 5, 20}) CHECK(taylor_recip_eval(d, 0.0) == 1.0);
  CHECK_THROWS_AS(taylor_recip_eval(3, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(taylor_recip_eval(-1, 1.0), std::invalid_argument);
}

TEST_CASE("taylor_recip d=1 worst error about 0.204", "[recip]") {
  double sup = 0.0, at = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    double x = 50.0 * i / 100000.0;
    double e = std::fabs(1.0 / (1.0 + x) - std::exp(-x));
    if (e > sup) {
      sup = e;
      at = x;
    }
    CHECK(taylor_recip_eval(1, x) == 1.0 / (1.0 + x));
  }
  CHECK(sup == Approx(0.204).margin(5e-3));
  // stationary point of 1/(1+x) - e^{-x}: e^{-x}(1+x)^2 = 1
  CHECK(std::exp(-at) * (1.0 + at) * (1.0 + at) == Approx(1.0).margin(1e-3));
}

TEST_CASE("taylor_recip d=20 within 2^-20 on [0,200]", "[recip]") {
  double sup = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    double x = 200.0 * i / 100000.0;
    sup = std::max(sup, std::fabs(taylor_recip_eval(20, x) - std::exp(-x)));
  }
  CHECK(sup <= std::pow(2.0, -20.0));
}

TEST_CASE("taylor_recip one-sidedness and range", "[recip][property]") {
  for (long long d : {0, 1, 3, 7, 15, 31}) {
    for (int i = 0; i <= 2000; ++i) {
      double x = 400.0 * i / 2000.0;
      double v = taylor_recip_eval(d, x);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(v - std::exp(-x) >= -1e-15);
    }
  }
}

TEST_CASE("inverse_expsum certificate and structure", "[expsum]") {
  ExpSumApprox a = inverse_expsum(1e-2, 1e-2);
  CHECK(a.size() <= 2000);
  CHECK(static_cast<long long>(a.size()) == a.j_hi - a.j_lo + 1);

  // construction identity w_j = h t_j for every term, rates increasing
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.terms[i].w == a.h * a.terms[i].t);
    CHECK(a.terms[i].w > 0.0);
    CHECK(a.terms[i].t > 0.0);
    if (i > 0) CHECK(a.terms[i].t > a.terms[i - 1].t);
  }

  // grid certificate, recomputed here
  for (int i = 0; i <= 10000; ++i) {
    double x = std::exp(std::log(1e-2) * (1.0 - double(i) / 10000.0));
    CHECK(std::fabs(a.eval(x) * x - 1.0) <= 1e-2);
  }
}

TEST_CASE("inverse_expsum polylog scaling between settings", "[expsum]") {
  ExpSumApprox a2 = inverse_expsum(1e-2, 1e-2);
  ExpSumApprox a3 = inverse_expsum(1e-3, 1e-3);
  double lr = std::log(1e6) / std::log(1e4);
  CHECK(double(a3.size()) / double(a2.size()) <= lr * lr * lr * 2.0);

  double budget2 = expsum_constants::count_constant * std::pow(std::log(1e4), 3.0);
  CHECK(double(a2.size()) <= budget2);
}

TEST_CASE("inverse_expsum validation", "[expsum]") {
  CHECK_THROWS_AS(inverse_expsum(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(inverse_expsum(1e-2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(inverse_expsum(1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(inverse_expsum(1e-2, 1.5), std::invalid_argument);
}

TEST_CASE("inverse_expsum tolerant corner settings", "[expsum]") {
  // Near-trivial accuracy demands still produce a valid certificate.
  ExpSumApprox a = inverse_expsum(0.5, 0.5);
  for (int i = 0; i <= 100; ++i) {
    double x = 0.5 + 0.5 * i / 100.0;
    CHECK(std::fabs(a.eval(x) * x - 1.0) <= 0.5);
  }
}
