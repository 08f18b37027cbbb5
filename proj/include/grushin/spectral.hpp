#pragma once

// Ground states of the modal operator -d^2/dx^2 + (n x)^2 on (-1, 1) with
// Dirichlet conditions, and the quantities derived from them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/grid.hpp"
#include "grushin/tridiag.hpp"

namespace grushin {

struct EigenPair {
  int n = 0;
  double lambda = 0.0;
  std::vector<double> v;  // samples on grid, v(0) = 1
  Grid1D grid;
};

inline SymTridiag modal_operator(int n, const Grid1D& g) {
  SymTridiag a;
  a.d.resize(g.count);
  const double ih2 = 1.0 / (g.h * g.h);
  for (int i = 0; i < g.count; ++i) {
    const double nx = n * g.node(i);
    a.d[i] = 2.0 * ih2 + nx * nx;
  }
  a.e = -ih2;
  return a;
}

inline double resolution_limit(int n) { return 0.2 / std::sqrt(std::max(n, 1)); }

// Spacing used for the spectral table: enough nodes across the Gaussian core.
inline double table_spacing(int n) { return std::min(1e-3, 0.05 / std::sqrt(std::max(n, 1))); }

inline EigenPair solve_mode_eigenpair(int n, const Grid1D& g) {
  if (n < 0) throw InputError("mode index must be nonnegative");
  if (g.count < 3 || g.count % 2 == 0) throw InputError("invalid grid");
  if (g.h > resolution_limit(n))
    throw ResolutionError("grid spacing " + std::to_string(g.h) + " cannot resolve mode " + std::to_string(n) +
                          " (need h <= " + std::to_string(resolution_limit(n)) + ")");
  const SymTridiag a = modal_operator(n, g);
  EigenPair p;
  p.n = n;
  p.grid = g;
  p.lambda = lowest_eigenvalue(a, 1e-12 * std::max(1, n));

  const TridiagFactor lu(a, p.lambda);
  std::vector<double> v(g.count, 1.0);
  for (int sweep = 0; sweep < 3; ++sweep) {
    lu.solve(v);
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError("inverse iteration broke down");
    for (double& x : v) x /= m;
  }
  // Exact evenness, then v(0) = 1.
  for (int i = 0; i < g.center(); ++i) {
    const double s = 0.5 * (v[i] + v[g.mirror(i)]);
    v[i] = s;
    v[g.mirror(i)] = s;
  }
  const double c = v[g.center()];
  if (!(std::abs(c) > 1e-8)) throw NumericalError("ground state vanishes at x = 0");
  for (double& x : v) x /= c;
  v[g.center()] = 1.0;
  for (double x : v)
    if (x < 0.0) throw NumericalError("ground state changes sign");
  p.v = std::move(v);
  return p;
}

// Trapezoidal rule; endpoint values are zero.
inline double mode_norm_sq(const EigenPair& p) {
  double s = 0.0;
  for (double x : p.v) s += x * x;
  return s * p.grid.h;
}

// max_i |(A - lambda) v|_i / max_i |v_i|
inline double eigen_residual(const EigenPair& p) {
  const SymTridiag a = modal_operator(p.n, p.grid);
  std::vector<double> av;
  tridiag_apply(a, p.v, av);
  double r = 0.0, m = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    r = std::max(r, std::abs(av[i] - p.lambda * p.v[i]));
    m = std::max(m, std::abs(p.v[i]));
  }
  return r / m;
}

// w_n(x) = e^{(1-eps) n x^2 / 2} v_n(x). Log-magnitude form for large exponents.
inline std::vector<double> w_profile(const EigenPair& p, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
  std::vector<double> w(p.v.size());
  const double k = (1.0 - eps) * p.n / 2.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = p.grid.node(static_cast<int>(i));
    const double v = p.v[i];
    if (k > 300.0) {
      w[i] = v == 0.0 ? 0.0 : std::copysign(std::exp(k * x * x + std::log(std::abs(v))), v);
    } else {
      w[i] = std::exp(k * x * x) * v;
    }
  }
  return w;
}

// Cubic Lagrange interpolation of the eigenfunction (zero Dirichlet data
// appended at +-1).
inline double eigen_value_at(const EigenPair& p, double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const Grid1D& g = p.grid;
  auto val = [&](int i) { return (i < 0 || i >= g.count) ? 0.0 : p.v[i]; };
  const double s = (x + 1.0) / g.h - 1.0;  // fractional node index
  int i0 = static_cast<int>(std::floor(s)) - 1;
  i0 = std::clamp(i0, -1, g.count - 3);
  double r = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (s - (i0 + b)) / static_cast<double>(a - b);
    r += l * val(i0 + a);
  }
  return r;
}

struct SpectralEntry {
  int n = 0;
  double lambda = 0.0;      // extrapolated
  double lambda_raw = 0.0;  // on the table grid, no extrapolation
  double rho = 0.0;
  double normsq = 0.0;
  double wmax = 0.0;
  double floor = 0.0;       // error estimate of lambda
  EigenPair pair;
};

struct SpectralOptions {
  bool extrapolate = true;  // combine grids h and h/2
  double max_spacing = 1e-3;
};

// Entries for n = first..N in mode order.
struct SpectralTable {
  double eps = 0.25;
  int first = 1;
  std::vector<SpectralEntry> entries;

  int max_mode() const { return first + static_cast<int>(entries.size()) - 1; }
  bool covers(int n) const { return n >= first && n <= max_mode(); }
  const SpectralEntry& at(int n) const {
    if (!covers(n)) throw InputError("spectral table does not cover mode " + std::to_string(n));
    return entries[n - first];
  }
  double lambda(int n) const { return at(n).lambda; }
  const EigenPair& pair(int n) const { return at(n).pair; }
};

inline SpectralEntry compute_entry(int n, double eps, const SpectralOptions& opt) {
  const Grid1D g = grid_for_spacing(std::min(opt.max_spacing, table_spacing(n)));
  SpectralEntry e;
  e.n = n;
  e.pair = solve_mode_eigenpair(n, g);
  e.lambda_raw = e.pair.lambda;
  if (opt.extrapolate) {
    const double fine = solve_mode_eigenpair(n, g.refined()).lambda;
    e.lambda = (4.0 * fine - e.lambda_raw) / 3.0;
    const double hn = g.h * std::max(n, 1);
    e.floor = std::max(hn * hn * hn * hn, 1e-12 * std::max(n, 1));
  } else {
    e.lambda = e.lambda_raw;
    e.floor = g.h * g.h * std::max(n, 1) * std::max(n, 1);
  }
  e.rho = e.lambda - n;
  e.normsq = mode_norm_sq(e.pair);
  double wm = 0.0;
  for (double w : w_profile(e.pair, eps)) wm = std::max(wm, std::abs(w));
  e.wmax = wm;
  return e;
}

inline SpectralTable build_spectral_table(int N, double eps = 0.25, const SpectralOptions& opt = {},
                                          int first = 1) {
  if (N < first) throw InputError("spectral table needs N >= " + std::to_string(first));
  if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
  SpectralTable t;
  t.eps = eps;
  t.first = first;
  for (int n = first; n <= N; ++n) t.entries.push_back(compute_entry(n, eps, opt));
  return t;
}

struct ResidualRow {
  enum class Flag { ok, exceeds, below_floor, not_checked };
  int n = 0;
  double rho = 0.0;
  double bound = 0.0;  // e^{-n/2}
  double floor = 0.0;
  Flag flag = Flag::not_checked;
};

inline std::vector<ResidualRow> residual_symbol(const SpectralTable& t) {
  std::vector<ResidualRow> rows;
  for (const auto& e : t.entries) {
    ResidualRow r;
    r.n = e.n;
    r.rho = e.rho;
    r.bound = std::exp(-e.n / 2.0);
    r.floor = e.floor;
    if (e.n >= 10) {
      if (r.bound < 10.0 * r.floor)
        r.flag = ResidualRow::Flag::below_floor;
      else
        r.flag = std::abs(r.rho) > r.bound ? ResidualRow::Flag::exceeds : ResidualRow::Flag::ok;
    }
    rows.push_back(r);
  }
  return rows;
}

inline const char* to_string(ResidualRow::Flag f) {
  switch (f) {
    case ResidualRow::Flag::ok: return "ok";
    case ResidualRow::Flag::exceeds: return "exceeds";
    case ResidualRow::Flag::below_floor: return "below numerical floor";
    default: return "not checked";
  }
}

}  // namespace grushin
