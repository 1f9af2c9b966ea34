#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "apx/cut.hpp"
#include "apx/exp_recip.hpp"
#include "apx/io.hpp"
#include "apx/lanczos.hpp"
#include "apx/matfun.hpp"
#include "apx/solve.hpp"

namespace apx {

namespace cli_defaults {
inline constexpr double delta = 1e-6;
inline constexpr std::uint64_t seed = 20240101;
inline constexpr int curve_points = 10001;
}  // namespace cli_defaults

namespace detail {

struct CurveStats {
  double max_err = 0.0;
  double arg_max = 0.0;
};

template <typename F, typename G>
CurveStats write_curve(const std::string& path, F&& f, G&& approx,
                       const std::vector<double>& xs, const std::string& header_note) {
  CurveStats st;
  std::ofstream os;
  if (!path.empty()) {
    os.open(path);
    if (!os) throw io_error(path + ": cannot open for writing");
    os << "# " << header_note << "\n";
    os << "x,f(x),approx(x),abs_err\n";
  }
  for (double x : xs) {
    double fv = f(x), av = approx(x);
    double err = std::fabs(fv - av);
    if (err > st.max_err) {
      st.max_err = err;
      st.arg_max = x;
    }
    if (os) os << g17(x) << "," << g17(fv) << "," << g17(av) << "," << g17(err) << "\n";
  }
  return st;
}

inline std::vector<double> linear_grid(double a, double b, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = a + (b - a) * double(i) / double(n - 1);
  return xs;
}

inline std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> xs(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) xs[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
  xs.front() = a;
  xs.back() = b;
  return xs;
}

inline void report_header(std::ostream& os, const std::string& cmd, std::uint64_t seed,
                          double delta) {
  os << "# apx " << cmd << " seed=" << seed << " delta=" << g17(delta) << "\n";
}

}  // namespace detail

// Command-line surface. Returns the process exit code: 0 on
// success/certified, 1 on certificate or convergence failure, 2 on
// parse/validation errors.
inline int run_cli(std::vector<std::string> args) {
  using detail::g17;
  CLI::App app{"approximation-theory accelerated matrix primitives"};
  app.require_subcommand(1);

  std::uint64_t seed = cli_defaults::seed;
  app.add_option("--seed", seed, "RNG seed (reports are deterministic given the seed)");
  app.fallthrough();  // let subcommands pass --seed up to the app

  // ---- approx ------------------------------------------------------------
  auto* ap = app.add_subcommand("approx", "scalar approximation constructions");
  std::string ap_kind;
  ap->add_option("kind", ap_kind, "power | exp-poly | exp-recip | exp-ssv | inv-expsum")
      ->required();
  long long ap_s = 0, ap_d = 0;
  double ap_b = 10.0, ap_delta = cli_defaults::delta, ap_eps = 1e-2;
  std::string ap_coeffs, ap_curve;
  ap->add_option("--s", ap_s, "monomial power s");
  ap->add_option("--d", ap_d, "polynomial degree (0 = from delta)");
  ap->add_option("--b", ap_b, "interval endpoint for exp-poly");
  ap->add_option("--delta", ap_delta, "target uniform error");
  ap->add_option("--eps", ap_eps, "lower interval end for inv-expsum");
  ap->add_option("--coeffs-out", ap_coeffs, "coefficient output path");
  ap->add_option("--curve-out", ap_curve, "error-curve CSV output path");

  // ---- io-style commands ---------------------------------------------------
  std::string in_matrix, in_graph, in_rhs, in_v0, out_path, report_path;
  std::string solve_method = "cg", expv_method = "rational";
  bool one_based = false, dense_flag = false;
  double delta = cli_defaults::delta, eps = 1e-2, heat_s = 1.0, lambda_hint = 0.0;
  long long walk_s = 1, eig_r = 1;

  auto add_common = [&](CLI::App* c, bool graph_input) {
    if (graph_input) {
      c->add_option("--graph", in_graph, "edge-list graph file")->required();
      c->add_flag("--one-based", one_based, "edge list uses 1-based vertex ids");
    } else {
      c->add_option("--matrix", in_matrix, "Matrix Market file")->required();
    }
    c->add_option("--out", out_path, "primary output path");
    c->add_option("--report", report_path, "report output path");
  };

  auto* wk = app.add_subcommand("walk", "s-step random walk distribution");
  add_common(wk, true);
  wk->add_option("--v0", in_v0, "start distribution file")->required();
  wk->add_option("--s", walk_s, "number of steps")->required();
  wk->add_option("--delta", delta, "target error");

  auto* ht = app.add_subcommand("heat", "heat-kernel walk exp(-s L) v");
  add_common(ht, true);
  ht->add_option("--v0", in_v0, "start vector file")->required();
  ht->add_option("--s", heat_s, "walk length (real, >= 0)")->required();
  ht->add_option("--delta", delta, "target error");

  auto* sv = app.add_subcommand("solve", "SPD linear solve");
  add_common(sv, false);
  sv->add_option("--rhs", in_rhs, "right-hand side vector file")->required();
  sv->add_option("--delta", delta, "A-norm relative error target");
  sv->add_option("--method", solve_method, "cg | gd")
      ->check(CLI::IsMember({"cg", "gd"}));

  auto* eg = app.add_subcommand("eig", "largest eigenvalue estimation");
  add_common(eg, false);
  eg->add_option("--r", eig_r, "number of top eigenvalues");
  eg->add_option("--delta", delta, "relative accuracy");
  eg->add_flag("--dense", dense_flag, "dense reference eigensolve instead of Lanczos");

  auto* ev = app.add_subcommand("expv", "matrix exponential action exp(-A) v");
  add_common(ev, false);
  ev->add_option("--v", in_v0, "vector file")->required();
  ev->add_option("--delta", delta, "target error");
  ev->add_option("--method", expv_method, "poly | rational")
      ->check(CLI::IsMember({"poly", "rational"}));

  auto* iv = app.add_subcommand("inv", "A^{-1} v via sums of exponentials");
  add_common(iv, false);
  iv->add_option("--v", in_v0, "vector file")->required();
  iv->add_option("--eps", eps, "spectral lower bound");
  iv->add_option("--delta", delta, "target relative error");

  auto* ct = app.add_subcommand("cut", "sparse cut via accelerated walk embedding");
  add_common(ct, true);
  ct->add_option("--lambda", lambda_hint, "spectral gap hint (0 = doubling schedule)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("apx");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (ap->parsed()) {
      bool ok = true;
      double bound = 0.0;
      detail::CurveStats st;
      auto grid_note = "apx approx " + ap_kind + " seed=" + std::to_string(seed);
      if (ap_kind == "power") {
        if (ap_s <= 0) throw io_error("approx power: --s is required and positive");
        long long d = ap_d > 0 ? ap_d
                               : static_cast<long long>(std::ceil(
                                     std::sqrt(2.0 * double(ap_s) * std::log(2.0 / ap_delta))));
        ChebSeries c = monomial_cheb_coeffs(ap_s, d);
        if (!ap_coeffs.empty()) {
          auto f = detail::open_out(ap_coeffs);
          write_coeffs(f, c);
          f << "# " << grid_note << "\n";
        }
        bound = 2.0 * std::exp(-double(d) * double(d) / (2.0 * double(ap_s)));
        st = detail::write_curve(
            ap_curve, [&](double x) { return std::pow(x, double(ap_s)); },
            [&](double x) { return cheb_series_eval(c, x); },
            detail::linear_grid(-1.0, 1.0, cli_defaults::curve_points), grid_note);
        ok = st.max_err <= bound;
      } else if (ap_kind == "exp-poly") {
        ChebSeries c = exp_poly_coeffs(ap_b, ap_delta);
        if (!ap_coeffs.empty()) {
          auto f = detail::open_out(ap_coeffs);
          write_coeffs(f, c);
          f << "# " << grid_note << "\n";
        }
        bound = ap_delta;
        st = detail::write_curve(
            ap_curve, [](double x) { return std::exp(-x); },
            [&](double x) { return cheb_series_eval(c, x); },
            detail::linear_grid(0.0, ap_b, cli_defaults::curve_points), grid_note);
        ok = st.max_err <= bound;
      } else if (ap_kind == "exp-recip") {
        if (ap_d <= 0) throw io_error("approx exp-recip: --d is required and positive");
        std::vector<double> sd(std::size_t(ap_d) + 1);
        double fact = 1.0;
        for (long long k = 0; k <= ap_d; ++k) {
          if (k > 0) fact *= double(k);
          sd[std::size_t(k)] = 1.0 / fact;
        }
        MonomialPoly denom(sd);
        if (!ap_coeffs.empty()) {
          auto f = detail::open_out(ap_coeffs);
          write_coeffs(f, denom, 0.0, 10.0 * double(ap_d));
          f << "# " << grid_note << " (denominator S_d of 1/S_d)\n";
        }
        bound = 4.0 * std::pow(2.0, -double(ap_d));
        st = detail::write_curve(
            ap_curve, [](double x) { return std::exp(-x); },
            [&](double x) { return taylor_recip_eval(ap_d, x); },
            detail::linear_grid(0.0, 10.0 * double(ap_d), cli_defaults::curve_points), grid_note);
        ok = st.max_err <= bound;
      } else if (ap_kind == "exp-ssv") {
        if (ap_d <= 0) throw io_error("approx exp-ssv: --d is required and positive");
        SsvApprox s = ssv_build(ap_d);  // throws certificate_error on failure
        if (!ap_coeffs.empty()) {
          auto f = detail::open_out(ap_coeffs);
          write_coeffs(f, s.p_x, 0.0, ssv_constants::cert_x_span * double(ap_d));
          f << "# " << grid_note << " (numerator of p_d(x)/(1+x/d)^d)\n";
        }
        bound = s.error_bound;
        auto xs = detail::log_grid(1e-4, ssv_constants::cert_x_span * double(ap_d),
                                   cli_defaults::curve_points);
        xs.insert(xs.begin(), 0.0);
        st = detail::write_curve(
            ap_curve, [](double x) { return std::exp(-x); }, [&](double x) { return s.eval(x); },
            xs, grid_note);
        ok = st.max_err <= bound;
      } else if (ap_kind == "inv-expsum") {
        ExpSumApprox es = inverse_expsum(ap_eps, ap_delta);  // certificate inside
        if (!ap_coeffs.empty()) {
          auto f = detail::open_out(ap_coeffs);
          write_expsum(f, es);
          f << "# " << grid_note << "\n";
        }
        bound = ap_delta;
        st = detail::write_curve(
            ap_curve, [](double x) { return 1.0 / x; }, [&](double x) { return es.eval(x); },
            detail::log_grid(ap_eps, 1.0, cli_defaults::curve_points), grid_note);
        // the certificate is relative: |S(x) x - 1| <= delta
        double rel = 0.0;
        for (double x : detail::log_grid(ap_eps, 1.0, cli_defaults::curve_points))
          rel = std::max(rel, std::fabs(es.eval(x) * x - 1.0));
        st.max_err = rel;
        ok = rel <= ap_delta;
      } else {
        throw io_error("approx: unknown kind '" + ap_kind + "'");
      }
      std::cout << "certificate " << (ok ? "ok" : "FAILED") << ": max_err=" << g17(st.max_err)
                << " at x=" << g17(st.arg_max) << " bound=" << g17(bound) << "\n";
      return ok ? 0 : 1;
    }

    if (wk->parsed() || ht->parsed()) {
      WeightedGraph g = read_edge_list(in_graph, one_based);
      VectorReal v0 = read_vector(in_v0);
      ApplyOptions opt;
      opt.seed = seed;
      ApplyReport rep = wk->parsed() ? walk_distribution(g, v0, walk_s, delta, opt)
                                     : heat_kernel_apply(g, v0, heat_s, delta, opt);
      if (!out_path.empty()) write_vector(out_path, rep.result);
      if (!report_path.empty()) {
        auto f = detail::open_out(report_path);
        detail::report_header(f, wk->parsed() ? "walk" : "heat", seed, delta);
        write_report(f, rep);
      }
      return rep.converged ? 0 : 1;
    }

    if (sv->parsed()) {
      SparseSymMatrix A = read_matrix_market(in_matrix);
      VectorReal b = read_vector(in_rhs);
      if (b.size() != A.dim())
        throw io_error("solve: matrix " + in_matrix + " is " + std::to_string(A.dim()) +
                       "-dimensional but rhs " + in_rhs + " has " + std::to_string(b.size()) +
                       " entries");
      SolverOptions opt;
      opt.seed = seed;
      SolveReport rep =
          solve_method == "gd" ? gd_solve(A, b, delta, opt) : cg_solve(A, b, delta, opt);
      if (!out_path.empty()) write_vector(out_path, rep.solution);
      if (!report_path.empty()) {
        auto f = detail::open_out(report_path);
        detail::report_header(f, "solve " + solve_method, seed, delta);
        write_report(f, rep);
      }
      return rep.converged ? 0 : 1;
    }

    if (eg->parsed()) {
      SparseSymMatrix A = read_matrix_market(in_matrix);
      VectorReal eigs;
      if (dense_flag) {
        eigs = dense_eigs_ref(A);
      } else {
        auto tops = lanczos_top_r(A, eig_r, std::min(delta, 0.5), seed);
        for (const auto& e : tops) eigs.push_back(e.value);
      }
      if (!out_path.empty()) write_vector(out_path, eigs);
      if (!report_path.empty()) {
        auto f = detail::open_out(report_path);
        detail::report_header(f, dense_flag ? "eig dense" : "eig lanczos", seed, delta);
        f << "count=" << eigs.size() << "\n";
        for (double e : eigs) f << g17(e) << "\n";
      }
      return 0;
    }

    if (ev->parsed() || iv->parsed()) {
      SparseSymMatrix A = read_matrix_market(in_matrix);
      VectorReal v = read_vector(in_v0);
      if (v.size() != A.dim())
        throw io_error("expv/inv: matrix " + in_matrix + " is " + std::to_string(A.dim()) +
                       "-dimensional but vector " + in_v0 + " has " + std::to_string(v.size()) +
                       " entries");
      ApplyOptions opt;
      opt.seed = seed;
      ApplyReport rep;
      if (ev->parsed())
        rep = expv_method == "poly" ? exp_apply_poly(A, v, delta, opt)
                                    : exp_apply_rational(A, v, delta, opt);
      else
        rep = inverse_apply_via_exp(A, v, eps, delta, opt);
      if (!out_path.empty()) write_vector(out_path, rep.result);
      if (!report_path.empty()) {
        auto f = detail::open_out(report_path);
        detail::report_header(f, ev->parsed() ? "expv " + expv_method : "inv", seed, delta);
        write_report(f, rep);
      }
      return rep.converged ? 0 : 1;
    }

    if (ct->parsed()) {
      WeightedGraph g = read_edge_list(in_graph, one_based);
      CutResult r = sparse_cut(g, lambda_hint, seed);
      if (!out_path.empty()) {
        auto f = detail::open_out(out_path);
        write_cut(f, r);
      }
      if (!report_path.empty()) {
        auto f = detail::open_out(report_path);
        detail::report_header(f, "cut", seed, delta);
        write_cut(f, r);
      }
      std::cout << "conductance=" << g17(r.conductance) << " size=" << r.side.size() << "\n";
      return 0;
    }
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const certificate_error& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace apx
