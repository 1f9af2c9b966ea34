#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "apx/cheb.hpp"
#include "apx/cut.hpp"
#include "apx/expsum.hpp"
#include "apx/graph.hpp"
#include "apx/matfun.hpp"
#include "apx/solve.hpp"
#include "apx/sparse.hpp"

namespace apx {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// %.17g round-trips doubles exactly.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] inline void fail(const std::string& file, long line, const std::string& what) {
  throw io_error(file + ":" + std::to_string(line) + ": " + what);
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error(path + ": cannot open for reading");
  return f;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error(path + ": cannot open for writing");
  return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrix Market coordinate format, symmetric real.

inline void write_matrix_market(std::ostream& os, const SparseSymMatrix& A) {
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << A.dim() << " " << A.dim() << " " << A.nnz() << "\n";
  // lower triangle, 1-based
  A.for_each_stored([&](std::size_t i, std::size_t j, double v) {
    os << (j + 1) << " " << (i + 1) << " " << detail::g17(v) << "\n";
  });
}

inline void write_matrix_market(const std::string& path, const SparseSymMatrix& A) {
  auto f = detail::open_out(path);
  write_matrix_market(f, A);
}

inline SparseSymMatrix read_matrix_market(std::istream& is, const std::string& name = "<stream>") {
  std::string line;
  long lineno = 0;
  if (!std::getline(is, line)) detail::fail(name, 1, "empty file");
  ++lineno;
  {
    std::istringstream h(detail::lower(line));
    std::string banner, obj, fmt, field, sym;
    h >> banner >> obj >> fmt >> field >> sym;
    if (banner != "%%matrixmarket" || obj != "matrix" || fmt != "coordinate" || field != "real" ||
        sym != "symmetric")
      detail::fail(name, lineno,
                   "expected header '%%MatrixMarket matrix coordinate real symmetric'");
  }
  std::size_t rows = 0, cols = 0, nnz = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream s(line);
    if (!(s >> rows >> cols >> nnz)) detail::fail(name, lineno, "bad size line");
    break;
  }
  if (rows != cols) detail::fail(name, lineno, "matrix must be square");
  std::vector<Triplet> t;
  t.reserve(nnz);
  while (t.size() < nnz) {
    if (!std::getline(is, line)) detail::fail(name, lineno, "unexpected end of file");
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream s(line);
    long long i, j;
    double v;
    if (!(s >> i >> j >> v)) detail::fail(name, lineno, "bad entry line");
    if (i < 1 || j < 1 || i > (long long)rows || j > (long long)cols)
      detail::fail(name, lineno, "index out of range");
    t.push_back({std::size_t(i - 1), std::size_t(j - 1), v});
  }
  return SparseSymMatrix(rows, t);
}

inline SparseSymMatrix read_matrix_market(const std::string& path) {
  auto f = detail::open_in(path);
  return read_matrix_market(f, path);
}

// ---------------------------------------------------------------------------
// Edge list: one 'u v weight' per line, 0- or 1-based.

inline void write_edge_list(std::ostream& os, const WeightedGraph& g, bool one_based = false) {
  const std::size_t off = one_based ? 1 : 0;
  for (const auto& e : g.edges())
    os << (e.u + off) << " " << (e.v + off) << " " << detail::g17(e.w) << "\n";
}

inline WeightedGraph read_edge_list(std::istream& is, bool one_based = false,
                                    const std::string& name = "<stream>") {
  std::vector<Edge> edges;
  std::size_t maxv = 0;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line[0] == '%') continue;
    std::istringstream s(line);
    long long u, v;
    double w;
    if (!(s >> u >> v >> w)) detail::fail(name, lineno, "expected 'u v weight'");
    if (one_based) {
      if (u < 1 || v < 1) detail::fail(name, lineno, "vertex id below 1 in 1-based mode");
      --u;
      --v;
    }
    if (u < 0 || v < 0) detail::fail(name, lineno, "negative vertex id");
    edges.push_back({std::size_t(u), std::size_t(v), w});
    maxv = std::max({maxv, std::size_t(u), std::size_t(v)});
  }
  if (edges.empty()) detail::fail(name, lineno, "no edges");
  return WeightedGraph(maxv + 1, edges);
}

inline WeightedGraph read_edge_list(const std::string& path, bool one_based = false) {
  auto f = detail::open_in(path);
  return read_edge_list(f, one_based, path);
}

// ---------------------------------------------------------------------------
// Vectors: newline-separated decimals.

inline void write_vector(std::ostream& os, const VectorReal& v) {
  for (double x : v) os << detail::g17(x) << "\n";
}

inline void write_vector(const std::string& path, const VectorReal& v) {
  auto f = detail::open_out(path);
  write_vector(f, v);
}

inline VectorReal read_vector(std::istream& is, const std::string& name = "<stream>") {
  VectorReal v;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      v.push_back(std::stod(line));
    } catch (const std::exception&) {
      detail::fail(name, lineno, "bad number '" + line + "'");
    }
  }
  if (v.empty()) detail::fail(name, lineno, "empty vector");
  return v;
}

inline VectorReal read_vector(const std::string& path) {
  auto f = detail::open_in(path);
  return read_vector(f, path);
}

// ---------------------------------------------------------------------------
// Coefficient export: '# basis=chebyshev|monomial interval=a,b degree=d'
// then one coefficient per line.

inline void write_coeffs(std::ostream& os, const ChebSeries& s) {
  os << "# basis=chebyshev interval=" << detail::g17(s.interval.first) << ","
     << detail::g17(s.interval.second) << " degree=" << s.degree() << "\n";
  for (double c : s.coeffs) os << detail::g17(c) << "\n";
}

inline void write_coeffs(std::ostream& os, const MonomialPoly& p, double a = 0.0, double b = 0.0) {
  os << "# basis=monomial interval=" << detail::g17(a) << "," << detail::g17(b)
     << " degree=" << p.degree() << "\n";
  for (double c : p.coeffs) os << detail::g17(c) << "\n";
}

struct CoeffFile {
  std::string basis;
  double a = 0.0, b = 0.0;
  std::vector<double> coeffs;
};

inline CoeffFile read_coeffs(std::istream& is, const std::string& name = "<stream>") {
  CoeffFile out;
  std::string line;
  if (!std::getline(is, line)) detail::fail(name, 1, "empty coefficient file");
  long lineno = 1;
  {
    std::istringstream h(line);
    std::string hash, basis_kv, interval_kv, degree_kv;
    h >> hash >> basis_kv >> interval_kv >> degree_kv;
    if (hash != "#" || basis_kv.rfind("basis=", 0) != 0 || interval_kv.rfind("interval=", 0) != 0)
      detail::fail(name, 1, "bad coefficient header");
    out.basis = basis_kv.substr(6);
    std::string iv = interval_kv.substr(9);
    auto comma = iv.find(',');
    if (comma == std::string::npos) detail::fail(name, 1, "bad interval");
    out.a = std::stod(iv.substr(0, comma));
    out.b = std::stod(iv.substr(comma + 1));
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      out.coeffs.push_back(std::stod(line));
    } catch (const std::exception&) {
      detail::fail(name, lineno, "bad coefficient '" + line + "'");
    }
  }
  if (out.coeffs.empty()) detail::fail(name, lineno, "no coefficients");
  return out;
}

// ---------------------------------------------------------------------------
// ExpSumApprox: '# eps=..,delta=..,h=..' then 'j,w_j,t_j' lines.

inline void write_expsum(std::ostream& os, const ExpSumApprox& a) {
  os << "# eps=" << detail::g17(a.eps) << ",delta=" << detail::g17(a.delta)
     << ",h=" << detail::g17(a.h) << "\n";
  long long j = a.j_lo;
  for (const auto& t : a.terms) {
    os << j << "," << detail::g17(t.w) << "," << detail::g17(t.t) << "\n";
    ++j;
  }
}

inline ExpSumApprox read_expsum(std::istream& is, const std::string& name = "<stream>") {
  ExpSumApprox a;
  std::string line;
  if (!std::getline(is, line)) detail::fail(name, 1, "empty exponential-sum file");
  if (std::sscanf(line.c_str(), "# eps=%lf,delta=%lf,h=%lf", &a.eps, &a.delta, &a.h) != 3)
    detail::fail(name, 1, "bad exponential-sum header");
  long lineno = 1;
  bool first = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    long long j;
    double w, t;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &j, &w, &t) != 3)
      detail::fail(name, lineno, "bad term line");
    if (first) {
      a.j_lo = j;
      first = false;
    }
    a.j_hi = j;
    a.terms.push_back({w, t});
  }
  if (a.terms.empty()) detail::fail(name, lineno, "no terms");
  a.n_order = static_cast<long long>(std::llround(
      1.0 / std::sqrt(expsum_constants::c_h * a.h)));
  return a;
}

// ---------------------------------------------------------------------------
// Reports (line-oriented key=value plus CSV history blocks).

inline void write_report(std::ostream& os, const SolveReport& r) {
  os << "iterations=" << r.iterations << "\n";
  os << "converged=" << (r.converged ? 1 : 0) << "\n";
  os << "target_delta=" << detail::g17(r.target_delta) << "\n";
  os << "kappa_used=" << detail::g17(r.kappa_used) << "\n";
  os << "# residual_history\n";
  for (std::size_t i = 0; i < r.residual_history.size(); ++i)
    os << i << "," << detail::g17(r.residual_history[i]) << "\n";
}

inline void write_report(std::ostream& os, const ApplyReport& r) {
  os << "method=" << r.method << "\n";
  os << "certified_delta=" << detail::g17(r.certified_delta) << "\n";
  os << "matvec_count=" << r.matvec_count << "\n";
  os << "aux_matvecs=" << r.aux_matvecs << "\n";
  os << "degree=" << r.degree << "\n";
  os << "terms=" << r.terms << "\n";
  os << "converged=" << (r.converged ? 1 : 0) << "\n";
  os << "warn_spectrum=" << (r.warn_spectrum ? 1 : 0) << "\n";
  if (!r.inner_solve_iters.empty()) {
    os << "# inner_solve_iters\n";
    for (std::size_t i = 0; i < r.inner_solve_iters.size(); ++i)
      os << i << "," << r.inner_solve_iters[i] << "\n";
  }
}

inline void write_cut(std::ostream& os, const CutResult& r) {
  os << "conductance=" << detail::g17(r.conductance) << " size=" << r.side.size() << "\n";
  for (auto v : r.side) os << v << "\n";
}

}  // namespace apx
