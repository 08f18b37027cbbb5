#pragma once

// Fictitious-control synthesis: controls on the two strips |x| > a are glued
// with the cutoff theta into one control supported near the path.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "grushin/control.hpp"
#include "grushin/dst.hpp"
#include "grushin/errors.hpp"
#include "grushin/geometry.hpp"
#include "grushin/solver.hpp"

namespace grushin {

enum class Side { left, right };

struct StripControl {
  Side side = Side::left;
  double a = 0.0;
  Region region;
  HumResult hum;
  std::vector<ModalState> states;   // k = 0..K
  std::vector<ModalState> sources;  // step sources, k = 0..K-1 (already restricted to the strip)
  bool below_critical_time = false;

  double dt() const { return hum.basis ? hum.basis->h : 0.0; }
};

// omega_left = (-1,-a) x (0,pi), omega_right = (a,1) x (0,pi).
inline StripControl strip_control(Side side, double a, double T, const ModalState& f0, const Grid2D& grid,
                                  const HumOptions& opt = {}) {
  if (!(a >= 0.0 && a < 1.0)) throw InputError("a must lie in [0, 1)");
  StripControl sc;
  sc.side = side;
  sc.a = a;
  sc.below_critical_time = !(T > a * a / 2.0);
  sc.region = side == Side::left ? make_strip(-1.0, -a, grid) : make_strip(a, 1.0, grid);
  sc.hum = hum_control(sc.region, T, f0, f0.modes, opt);
  // Record the step sources while re-running, so the glue sees exactly what
  // the solver applied.
  SourceField rec;
  if (!sc.hum.source.empty()) {
    rec.step_source = [&](int k, double t0, double t1, ModalState& out) {
      sc.hum.source.step_source(k, t0, t1, out);
      sc.sources.push_back(out);
    };
  }
  evolve_observed(f0, T, rec, opt.dt, [&](int, const ModalState& s) { sc.states.push_back(s); });
  if (sc.hum.source.empty()) sc.sources.assign(sc.states.size() - 1, ModalState(f0.modes, f0.grid));
  return sc;
}

struct GluedSolution {
  Trajectory f;                    // glued state projected on the solver modes
  std::vector<ModalState> source;  // projected glued control per step
  CutoffField theta;
  Grid2D grid;
  double initial_norm = 0.0;
  double terminal_norm = 0.0;
  double control_norm = 0.0;       // L2((0,T) x Omega) of the grid control
  std::size_t support_violations = 0;
  double max_outside = 0.0;        // largest |u| outside omega_0
  int first_violation_i = -1, first_violation_j = -1;
  double pde_residual = 0.0;
  double f0_mismatch = 0.0;        // max |f(0) - f0|
};

namespace detail {

// Central-difference derivatives of theta on the grid nodes.
struct ThetaDerivatives {
  std::vector<double> t, tx, ty, lap;  // theta, d_x, d_y, d_xx + x^2 d_yy
};

inline ThetaDerivatives theta_derivatives(const CutoffField& cf) {
  const Grid2D& g = cf.grid;
  const double hx = g.x.h, hy = g.hy();
  ThetaDerivatives d;
  d.t.resize(g.size());
  d.tx.resize(g.size());
  d.ty.resize(g.size());
  d.lap.resize(g.size());
  for (int i = 0; i < g.x.count; ++i) {
    const double x = g.x.node(i);
    for (int j = 0; j < g.ny; ++j) {
      const auto k = g.index(i, j);
      const double c = cf.theta(i, j);
      const double xm = cf.theta(i - 1, j), xp = cf.theta(i + 1, j);
      const double ym = cf.theta(i, j - 1), yp = cf.theta(i, j + 1);
      d.t[k] = c;
      d.tx[k] = (xp - xm) / (2.0 * hx);
      d.ty[k] = (yp - ym) / (2.0 * hy);
      d.lap[k] = (xp - 2.0 * c + xm) / (hx * hx) + x * x * (yp - 2.0 * c + ym) / (hy * hy);
    }
  }
  return d;
}

// (f_r - f_l) L theta + 2 d_x(f_r - f_l) d_x theta + 2 x^2 d_y(f_r - f_l) d_y theta
inline void correction(const GridField& diff, const ThetaDerivatives& td, GridField& out) {
  const Grid2D& g = diff.grid;
  const double hx = g.x.h, hy = g.hy();
  auto val = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= g.x.count || j >= g.ny) return 0.0;
    return diff.at(i, j);
  };
  for (int i = 0; i < g.x.count; ++i) {
    const double x = g.x.node(i);
    for (int j = 0; j < g.ny; ++j) {
      const auto k = g.index(i, j);
      if (td.tx[k] == 0.0 && td.ty[k] == 0.0 && td.lap[k] == 0.0) {
        out.values[k] = 0.0;
        continue;
      }
      const double gx = (val(i + 1, j) - val(i - 1, j)) / (2.0 * hx);
      const double gy = (val(i, j + 1) - val(i, j - 1)) / (2.0 * hy);
      out.values[k] = diff.values[k] * td.lap[k] + 2.0 * gx * td.tx[k] + 2.0 * x * x * gy * td.ty[k];
    }
  }
}

}  // namespace detail

// Discrete residual of df/dt - d_xx f - x^2 d_yy f - u in L2((0,T) x Omega), with
// the solver's stencils: CN time averaging, three-point x differences, exact
// sine-mode y derivatives.
inline double verify_pde_residual(const GluedSolution& sol) {
  const auto& st = sol.f.states;
  if (st.size() < 2 || sol.source.size() + 1 != st.size()) throw InputError("glued trajectory incomplete");
  const double dt = sol.f.dt;
  const Grid1D& g = st[0].grid;
  const int modes = st[0].modes;
  std::vector<SymTridiag> ops;
  for (int n = 1; n <= modes; ++n) ops.push_back(modal_operator(n, g));
  double acc = 0.0;
  std::vector<double> a0, a1;
  for (std::size_t k = 0; k + 1 < st.size(); ++k) {
    for (int n = 1; n <= modes; ++n) {
      const std::vector<double> f0(st[k].mode(n), st[k].mode(n) + g.count);
      const std::vector<double> f1(st[k + 1].mode(n), st[k + 1].mode(n) + g.count);
      tridiag_apply(ops[n - 1], f0, a0);
      tridiag_apply(ops[n - 1], f1, a1);
      const double* s = sol.source[k].mode(n);
      for (int i = 0; i < g.count; ++i) {
        const double r = (f1[i] - f0[i]) / dt + 0.5 * (a0[i] + a1[i]) - s[i];
        acc += r * r;
      }
    }
  }
  return std::sqrt(acc * g.h * std::numbers::pi / 2.0 * dt);
}

// f = theta f_l + (1 - theta) f_r and the control of the fictitious-control
// method; theta must live on `grid`, whose x-grid is the solver grid.
inline GluedSolution glue(const StripControl& left, const StripControl& right, const CutoffField& theta,
                          const ModalState& f0) {
  const Grid2D& g = theta.grid;
  if (left.states.size() != right.states.size()) throw InputError("strip trajectories differ in length");
  if (left.states.empty()) throw InputError("empty strip trajectory");
  const int modes = left.states[0].modes;
  if (left.states[0].grid.count != g.x.count || right.states[0].grid.count != g.x.count)
    throw InputError("cutoff grid and solver grid differ");
  const std::size_t K = left.states.size() - 1;
  const SineTransform dst(g.ny);
  const auto td = detail::theta_derivatives(theta);

  GluedSolution sol;
  sol.theta = theta;
  sol.grid = g;
  sol.f.dt = left.dt();
  sol.initial_norm = l2_norm(f0);

  GridField fl, fr, diff(g), corr_prev(g), corr_next(g), glued(g), u(g), sl, sr;
  auto load = [&](std::size_t k) {
    fl = to_grid(left.states[k], g, dst);
    fr = to_grid(right.states[k], g, dst);
    for (std::size_t p = 0; p < g.size(); ++p) {
      diff.values[p] = fr.values[p] - fl.values[p];
      glued.values[p] = td.t[p] * fl.values[p] + (1.0 - td.t[p]) * fr.values[p];
    }
    sol.f.states.push_back(to_modal(glued, modes, dst, left.states[k].t));
  };
  load(0);
  detail::correction(diff, td, corr_prev);
  for (int n = 1; n <= modes; ++n)
    for (int i = 0; i < g.x.count; ++i)
      sol.f0_mismatch = std::max(sol.f0_mismatch, std::abs(sol.f.states[0].at(n, i) - f0.at(n, i)));

  double unorm = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    load(k + 1);
    detail::correction(diff, td, corr_next);
    sl = to_grid(left.sources[k], g, dst);
    sr = to_grid(right.sources[k], g, dst);
    for (int i = 0; i < g.x.count; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const auto p = g.index(i, j);
        const double v = td.t[p] * sl.values[p] + (1.0 - td.t[p]) * sr.values[p] +
                         0.5 * (corr_prev.values[p] + corr_next.values[p]);
        u.values[p] = v;
        unorm += v * v;
        if (v != 0.0 && !theta.in_tube(i, j)) {
          if (sol.support_violations == 0) {
            sol.first_violation_i = i;
            sol.first_violation_j = j;
          }
          ++sol.support_violations;
          sol.max_outside = std::max(sol.max_outside, std::abs(v));
        }
      }
    sol.source.push_back(to_modal(u, modes, dst, left.states[k].t));
    std::swap(corr_prev, corr_next);
  }
  sol.control_norm = std::sqrt(unorm * g.cell_area() * sol.f.dt);
  sol.terminal_norm = l2_norm(sol.f.states.back());
  sol.pde_residual = verify_pde_residual(sol);
  return sol;
}

struct GluingRun {
  StripControl left, right;
  GluedSolution glued;
  double a = 0.0;
};

// Full pipeline on one grid: strips from the critical abscissa of the path,
// the cutoff of its eps-tube, then the glue.
inline GluingRun run_gluing(const Path& path, double eps, double T, const ModalState& f0, const Grid2D& grid,
                            const HumOptions& opt = {}) {
  if (grid.x.count != f0.grid.count) throw InputError("grid and initial state differ in x");
  GluingRun run;
  run.a = critical_abscissa(path);
  const CutoffField theta = build_cutoff(path, eps, grid);
  run.left = strip_control(Side::left, run.a, T, f0, grid, opt);
  run.right = strip_control(Side::right, run.a, T, f0, grid, opt);
  run.glued = glue(run.left, run.right, theta, f0);
  return run;
}

}  // namespace grushin
