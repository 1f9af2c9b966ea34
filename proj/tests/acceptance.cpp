// Acceptance suite: twelve end-to-end criteria, one pass/fail line each.
// Usage: apx_acceptance [N]   (no argument = run all)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "apx/apx.hpp"
#include "oracles.hpp"

using namespace apx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void req(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof(b), "%.3g", v);
  return b;
}

double err2(const VectorReal& a, const VectorReal& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// 1. Best degree-(d-1) approximation to x^d misses by exactly 2^{1-d}.
Outcome criterion1() {
  Outcome o;
  for (long long d = 1; d <= 12; ++d) {
    MonomialPoly td = cheb_monomial_coeffs(d);
    const double s = std::pow(2.0, 1.0 - double(d));
    std::vector<double> ap(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i + 1 < td.coeffs.size(); ++i) ap[i] = -s * td.coeffs[i];
    MonomialPoly p(ap);
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      double x = -1.0 + 2.0 * i / 20000.0;
      sup = std::max(sup, std::fabs(std::pow(x, double(d)) - p.eval(x)));
    }
    o.req(std::fabs(sup - s) <= 1e-12, "d=" + std::to_string(d) + " sup=" + fmt(sup));
  }
  return o;
}

// 2. Monomial compression p_{s,d}: grid sup <= delta and the unrounded
// Chernoff bound holds pointwise.
Outcome criterion2() {
  Outcome o;
  const double delta = 1e-4;
  for (long long s : {50LL, 500LL, 5000LL}) {
    long long d =
        static_cast<long long>(std::ceil(std::sqrt(2.0 * double(s) * std::log(2.0 / delta))));
    ChebSeries c = monomial_cheb_coeffs(s, d);
    const double bound = 2.0 * std::exp(-double(d) * double(d) / (2.0 * double(s)));
    double sup = 0.0;
    bool pointwise = true;
    for (int i = 0; i <= 20000; ++i) {
      double x = -1.0 + 2.0 * i / 20000.0;
      double e = std::fabs(cheb_series_eval(c, x) - std::pow(x, double(s)));
      sup = std::max(sup, e);
      pointwise = pointwise && e <= bound;
    }
    o.req(sup <= delta, "s=" + std::to_string(s) + " sup=" + fmt(sup));
    o.req(pointwise, "s=" + std::to_string(s) + " unrounded bound violated");
  }
  return o;
}

// 3. exp polynomial on [0,b]: sup <= delta, degree within 3x of
// sqrt(max{b, log 1/delta} log(1/delta)).
Outcome criterion3() {
  Outcome o;
  for (double b : {10.0, 100.0}) {
    for (double delta : {1e-3, 1e-6}) {
      ChebSeries r = exp_poly_coeffs(b, delta);
      double sup = 0.0;
      for (int i = 0; i <= 20000; ++i) {
        double x = b * i / 20000.0;
        sup = std::max(sup, std::fabs(std::exp(-x) - cheb_series_eval(r, x)));
      }
      const double dref =
          std::sqrt(std::max(b, std::log(1.0 / delta)) * std::log(1.0 / delta));
      o.req(sup <= delta,
            "b=" + fmt(b) + " delta=" + fmt(delta) + " sup=" + fmt(sup));
      o.req(double(r.degree()) <= 3.0 * dref,
            "b=" + fmt(b) + " delta=" + fmt(delta) + " degree=" + std::to_string(r.degree()) +
                " limit=" + fmt(3.0 * dref));
    }
  }
  return o;
}

// 4. Reciprocal-Taylor: sup over [0, 10d] of |e^{-x} - 1/S_d| <= 4 * 2^{-d}.
Outcome criterion4() {
  Outcome o;
  for (long long d = 5; d <= 30; ++d) {
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      double x = 10.0 * double(d) * i / 20000.0;
      sup = std::max(sup, std::fabs(taylor_recip_eval(d, x) - std::exp(-x)));
    }
    o.req(sup <= 4.0 * std::pow(2.0, -double(d)), "d=" + std::to_string(d) + " sup=" + fmt(sup));
  }
  return o;
}

// 5. SSV rational through the full coefficient pipeline, plus the gamma_k
// quadrature cross-check at d=4.
Outcome criterion5() {
  Outcome o;
  for (long long d : {5LL, 10LL, 15LL, 20LL}) {
    SsvApprox s = ssv_build(d);
    const double bound = 8.0 * double(d) * std::pow(2.0, -double(d));
    double sup = std::fabs(s.eval(0.0) - 1.0);
    const double hi = 40.0 * double(d);
    for (int i = 0; i < 20000; ++i) {
      double x = std::exp(std::log(1e-4) + (std::log(hi) - std::log(1e-4)) * i / 19999.0);
      sup = std::max(sup, std::fabs(std::exp(-x) - s.eval(x)));
    }
    o.req(sup <= bound, "d=" + std::to_string(d) + " sup=" + fmt(sup) + " bound=" + fmt(bound));
  }
  auto g = ssv_gammas(4);
  for (int k = 0; k < 4; ++k) {
    double q = oracle::integrate(
        [k](double t) {
          double f = std::exp(-4.0 * (1.0 + t) / (1.0 - t));
          return -8.0 / ((1.0 - t) * (1.0 - t)) * f * oracle::legendre(k, t);
        },
        -1.0, 1.0 - 1e-6, 1e-14);
    o.req(std::fabs(g[static_cast<std::size_t>(k)] - q) <= 1e-10,
          "gamma_" + std::to_string(k) + " vs quadrature");
  }
  return o;
}

// 6. Sum of exponentials: relative error within delta on a 10^4-point log
// grid, term count growing at most cubically in log(1/(eps delta)).
Outcome criterion6() {
  Outcome o;
  std::vector<std::size_t> counts;
  for (double ed : {1e-2, 1e-3}) {
    ExpSumApprox a = inverse_expsum(ed, ed);
    counts.push_back(a.size());
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      double x = std::exp(std::log(ed) * (1.0 - double(i) / 9999.0));
      worst = std::max(worst, std::fabs(a.eval(x) * x - 1.0));
    }
    o.req(worst <= ed, "eps=delta=" + fmt(ed) + " rel=" + fmt(worst));
  }
  double lr = std::log(1e6) / std::log(1e4);
  o.req(double(counts[1]) / double(counts[0]) <= lr * lr * lr,
        "count growth " + std::to_string(counts[0]) + " -> " + std::to_string(counts[1]));
  o.note("terms " + std::to_string(counts[0]) + " and " + std::to_string(counts[1]));
  return o;
}

// 7. Walk simulation vs the direct repeated-matvec oracle, with exact
// matvec accounting.
Outcome criterion7() {
  Outcome o;
  const double delta = 1e-5;
  for (long long s : {100LL, 1000LL}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      std::size_t n = 120 + 60 * static_cast<std::size_t>(seed);
      auto g = oracle::random_connected_graph(n, 0.02, seed);
      auto W = walk_matrix_sym(g);
      VectorReal v = random_unit_vector(n, seed + 40);
      auto rep = power_apply(W, v, s, delta);
      VectorReal ref = v;
      for (long long i = 0; i < s; ++i) ref = matvec(W, ref);
      o.req(err2(rep.result, ref) <= delta,
            "s=" + std::to_string(s) + " err=" + fmt(err2(rep.result, ref)));
      long long d_expect =
          static_cast<long long>(std::ceil(std::sqrt(2.0 * double(s) * std::log(2.0 / delta))));
      o.req(rep.matvec_count == d_expect, "matvec count " + std::to_string(rep.matvec_count) +
                                              " != " + std::to_string(d_expect));
    }
  }
  return o;
}

// 8. CG sqrt(kappa) scaling on diagonal and grid-Laplacian families, and
// the >= 3x iteration win over gradient descent at kappa = 1e4.
Outcome criterion8() {
  Outcome o;
  const double delta = 1e-8;

  // diagonal family: Chebyshev-node spectrum filling [1/kappa, 1], the
  // density for which the sqrt(kappa) rate is tight
  auto diag_family = [&](double kappa, std::size_t n) {
    std::vector<double> d(n);
    const double a = 1.0 / kappa, b = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double th = (2.0 * double(i) + 1.0) * 3.14159265358979323846 / (2.0 * double(n));
      d[i] = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(th);
    }
    return diagonal_matrix(d);
  };
  std::vector<long long> cg_iters;
  long long gd_at_1e4 = 0;
  for (double kappa : {1e2, 1e4}) {
    const std::size_t n = 2500;
    auto A = diag_family(kappa, n);
    VectorReal xstar = random_unit_vector(n, 11);
    VectorReal v = matvec(A, xstar);
    SolverOptions opt;
    opt.kappa_hint = kappa;
    auto rep = cg_solve(A, v, delta, opt);
    o.req(rep.converged, "diag cg kappa=" + fmt(kappa) + " not converged");
    cg_iters.push_back(rep.iterations);
    VectorReal e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = rep.solution[i] - xstar[i];
    double anorm_err = std::sqrt(std::max(0.0, dot(e, matvec(A, e))));
    double anorm_x = std::sqrt(dot(xstar, matvec(A, xstar)));
    o.req(anorm_err <= delta * anorm_x, "diag kappa=" + fmt(kappa) + " A-norm error");
    if (kappa == 1e4) {
      auto gd = gd_solve(A, v, delta, opt);
      o.req(gd.converged, "gd kappa=1e4 not converged");
      gd_at_1e4 = gd.iterations;
    }
  }
  double dr = double(cg_iters[1]) / double(cg_iters[0]);
  o.req(dr >= 6.0 && dr <= 14.0, "diag iteration ratio " + fmt(dr));
  o.req(gd_at_1e4 >= 3 * cg_iters[1],
        "gd/cg = " + std::to_string(gd_at_1e4) + "/" + std::to_string(cg_iters[1]));

  // grid-Laplacian family: natural conditioning of the k x k Dirichlet
  // grid, kappa ~ 0.4 (k+1)^2: about 1e2 at k=15 and 1e4 at k=156
  auto grid_run = [&](std::size_t k) {
    double lmin = oracle::grid_laplacian_lambda_min(k, 0.0);
    double lmax = oracle::grid_laplacian_lambda_max(k, 0.0);
    double kappa_true = lmax / lmin;
    auto A = oracle::grid_laplacian(k, 0.0);
    const std::size_t n = k * k;
    VectorReal xstar = random_unit_vector(n, 13);
    VectorReal v = matvec(A, xstar);
    SolverOptions opt;
    opt.kappa_hint = kappa_true;
    auto rep = cg_solve(A, v, delta, opt);
    o.req(rep.converged, "grid cg kappa=" + fmt(kappa_true) + " not converged");
    VectorReal e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = rep.solution[i] - xstar[i];
    double anorm_err = std::sqrt(std::max(0.0, dot(e, matvec(A, e))));
    double anorm_x = std::sqrt(dot(xstar, matvec(A, xstar)));
    o.req(anorm_err <= delta * anorm_x, "grid kappa=" + fmt(kappa_true) + " A-norm error");
    return rep.iterations;
  };
  long long g1 = grid_run(15);
  long long g2 = grid_run(156);
  double gr = double(g2) / double(g1);
  o.req(gr >= 6.0 && gr <= 14.0, "grid iteration ratio " + fmt(gr));
  o.note("cg iters diag " + std::to_string(cg_iters[0]) + "/" + std::to_string(cg_iters[1]) +
         ", grid " + std::to_string(g1) + "/" + std::to_string(g2) + ", gd " +
         std::to_string(gd_at_1e4));
  return o;
}

// 9. Lanczos largest-eigenvalue estimation on random PSD ensembles.
Outcome criterion9() {
  Outcome o;
  const std::size_t n = 300;
  const int seeds = 40;
  std::vector<double> spectrum(n);
  for (std::size_t i = 0; i < n; ++i) spectrum[i] = double(i + 1) / double(n);
  auto A = diagonal_matrix(spectrum);  // dense uniform spectrum, lambda_1 = 1
  const double l1 = 1.0;

  std::vector<double> med_k;
  for (double delta : {0.04, 0.01}) {
    int ok = 0;
    std::vector<double> kneed;
    for (int seed = 0; seed < seeds; ++seed) {
      auto est = lanczos_lambda_max(A, delta, std::uint64_t(seed));
      o.req(est.value <= l1 + 1e-10, "mu exceeded lambda_1");
      if (est.value >= (1.0 - delta) * l1) ++ok;

      // required k: first leading submatrix of one deep decomposition whose
      // top Ritz value clears (1-delta) lambda_1
      auto L = lanczos_decomp(A, std::min<long long>(120, long(n) - 1), std::uint64_t(seed) + 1000);
      long long kneed_this = L.k;
      for (long long k = 1; k <= L.k; ++k) {
        std::vector<double> a(L.alpha.begin(), L.alpha.begin() + k + 1);
        std::vector<double> b(L.beta.begin(), L.beta.begin() + k);
        detail::tridiag_eig(a, b, nullptr);
        if (a.back() >= (1.0 - delta) * l1) {
          kneed_this = k;
          break;
        }
      }
      kneed.push_back(double(kneed_this));
    }
    o.req(ok * 2 >= seeds, "delta=" + fmt(delta) + " success " + std::to_string(ok) + "/" +
                               std::to_string(seeds));
    std::sort(kneed.begin(), kneed.end());
    med_k.push_back(kneed[kneed.size() / 2]);
  }
  double kr = med_k[1] / med_k[0];
  o.req(kr >= 2.0 * 0.6 && kr <= 2.0 * 1.4, "required-k ratio " + fmt(kr));
  o.note("median k " + fmt(med_k[0]) + " -> " + fmt(med_k[1]));
  return o;
}

// 10. exp(-A) v by the rational path vs the dense oracle; inner-solve count
// grows like log(1/delta).
Outcome criterion10() {
  Outcome o;
  std::vector<std::size_t> solves;
  for (double delta : {1e-4, 1e-6}) {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
      std::size_t n = 150 + 50 * static_cast<std::size_t>(seed % 2);
      auto g = oracle::random_connected_graph(n, 0.03, seed);
      auto A = scaled_shifted(normalized_laplacian(g), 1.0, 1.0);
      VectorReal v = random_unit_vector(n, seed + 5);
      auto rep = exp_apply_rational(A, v, delta);
      o.req(rep.converged, "inner solver not converged");
      auto ref = dense_expm_apply_ref(A, v);
      o.req(err2(rep.result, ref) <= delta,
            "delta=" + fmt(delta) + " err=" + fmt(err2(rep.result, ref)));
      if (seed == 1) solves.push_back(rep.inner_solve_iters.size());
    }
  }
  double ratio = double(solves[1]) / double(solves[0]);
  double logratio = std::log(1e6) / std::log(1e4);
  o.req(ratio >= logratio * 0.6 && ratio <= logratio * 1.4,
        "inner-solve ratio " + fmt(ratio) + " vs log ratio " + fmt(logratio));
  o.note("solves " + std::to_string(solves[0]) + " -> " + std::to_string(solves[1]));
  return o;
}

// 11. Inverse via exponentials vs the dense solve.
Outcome criterion11() {
  Outcome o;
  const double eps = 1e-2, delta = 1e-2;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    std::size_t n = 100 + 25 * static_cast<std::size_t>(seed % 3);
    auto A = oracle::random_spd_diag_dominant(n, eps, 1.0, seed);
    VectorReal v = random_unit_vector(n, seed + 9);
    auto rep = inverse_apply_via_exp(A, v, eps, delta);
    auto ref = dense_solve_ref(A, v);
    double rel = err2(rep.result, ref) / norm2(ref);
    o.req(rel <= 3.0 * delta, "n=" + std::to_string(n) + " rel=" + fmt(rel));
  }
  return o;
}

// 12. Sparse cut on dumbbell and cycle families; sweep equals brute force.
Outcome criterion12() {
  Outcome o;
  const int seeds = 60;
  struct Family {
    std::string name;
    WeightedGraph g;
  };
  std::vector<Family> graphs;
  graphs.push_back({"dumbbell20", oracle::dumbbell(10)});
  graphs.push_back({"cycle32", oracle::cycle(32)});
  graphs.push_back({"cycle64", oracle::cycle(64)});
  std::vector<double> cycle_medians;
  for (auto& fam : graphs) {
    double lam = dense_eigs_ref(normalized_laplacian(fam.g))[1];
    const double target = sparse_cut_constants::cut_constant * std::sqrt(lam);
    int ok = 0;
    std::vector<double> found;
    for (int seed = 0; seed < seeds; ++seed) {
      double c = sparse_cut(fam.g, 0.0, std::uint64_t(seed)).conductance;
      found.push_back(c);
      if (c <= target) ++ok;
    }
    o.req(ok * 3 >= seeds,
          fam.name + " success " + std::to_string(ok) + "/" + std::to_string(seeds));
    o.note(fam.name + " " + std::to_string(ok) + "/" + std::to_string(seeds) + " within " +
           fmt(target));
    std::sort(found.begin(), found.end());
    if (fam.name.rfind("cycle", 0) == 0) cycle_medians.push_back(found[found.size() / 2]);
  }
  // sqrt(lambda) ~ pi/n scaling between the cycle sizes: conductances halve
  double cyc_ratio = cycle_medians[0] / cycle_medians[1];
  o.req(cyc_ratio >= 1.0 && cyc_ratio <= 3.0, "cycle conductance ratio " + fmt(cyc_ratio));

  // sweep_cut equals the brute-force prefix minimum (n <= 50)
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = oracle::random_connected_graph(20 + 3 * seed, 0.12, seed);
    const std::size_t n = g.num_vertices();
    VectorReal x = random_unit_vector(n, seed * 17);
    auto r = sweep_cut(g, x);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double ka = x[a] / std::sqrt(g.degrees()[a]);
      double kb = x[b] / std::sqrt(g.degrees()[b]);
      if (ka != kb) return ka < kb;
      return a < b;
    });
    double best = 2.0;
    for (std::size_t k = 1; k < n; ++k) {
      std::vector<std::size_t> prefix(order.begin(), order.begin() + k);
      best = std::min(best, conductance(g, prefix));
    }
    o.req(std::fabs(r.conductance - best) <= 1e-14, "sweep != brute force");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::function<Outcome()>> crit{
      criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6,
      criterion7, criterion8, criterion9,  criterion10, criterion11, criterion12};
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (int i = 1; i <= int(crit.size()); ++i) {
    if (only != 0 && i != only) continue;
    Outcome o = crit[static_cast<std::size_t>(i - 1)]();
    std::printf("criterion %2d %s%s%s\n", i, o.pass ? "PASS" : "FAIL",
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures;
}
