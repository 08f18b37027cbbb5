#pragma once

// Crank-Nicolson evolution of the y-sine modes of
//   (d/dt - d^2/dx^2 - x^2 d^2/dy^2) f = u,  Dirichlet on the boundary of (-1,1)x(0,pi).

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "grushin/dst.hpp"
#include "grushin/errors.hpp"
#include "grushin/grid.hpp"
#include "grushin/spectral.hpp"
#include "grushin/tridiag.hpp"

namespace grushin {

// f(t,x,y) = sum_{n=1..N} f_n(t,x) sin(n y); data[(n-1)*count + i] = f_n(x_i).
struct ModalState {
  double t = 0.0;
  int modes = 0;
  Grid1D grid;
  std::vector<double> data;

  ModalState() = default;
  ModalState(int n_modes, const Grid1D& g, double time = 0.0)
      : t(time), modes(n_modes), grid(g), data(static_cast<std::size_t>(n_modes) * g.count, 0.0) {}

  double* mode(int n) { return data.data() + static_cast<std::size_t>(n - 1) * grid.count; }
  const double* mode(int n) const { return data.data() + static_cast<std::size_t>(n - 1) * grid.count; }
  double& at(int n, int i) { return mode(n)[i]; }
  double at(int n, int i) const { return mode(n)[i]; }

  void check_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) throw NumericalError("non-finite modal amplitude at t = " + std::to_string(t));
  }
};

// L2(Omega) norm squared: sum_n (pi/2) int f_n^2 dx.
inline double l2_norm_sq(const ModalState& s) {
  double acc = 0.0;
  for (double v : s.data) acc += v * v;
  return acc * s.grid.h * std::numbers::pi / 2.0;
}

inline double l2_norm(const ModalState& s) { return std::sqrt(l2_norm_sq(s)); }

// V(Omega) energy: sum_n (pi/2) int (|d_x f_n|^2 + n^2 x^2 f_n^2) dx.
inline double energy_norm_sq(const ModalState& s) {
  const Grid1D& g = s.grid;
  double acc = 0.0;
  for (int n = 1; n <= s.modes; ++n) {
    const double* f = s.mode(n);
    double grad = 0.0, pot = 0.0;
    for (int i = 0; i <= g.count; ++i) {
      const double a = i > 0 ? f[i - 1] : 0.0;
      const double b = i < g.count ? f[i] : 0.0;
      grad += (b - a) * (b - a);
    }
    for (int i = 0; i < g.count; ++i) {
      const double x = g.node(i);
      pot += static_cast<double>(n) * n * x * x * f[i] * f[i];
    }
    acc += grad / g.h + pot * g.h;
  }
  return acc * std::numbers::pi / 2.0;
}

// Field on a Grid2D, x-major with y contiguous.
struct GridField {
  Grid2D grid;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(const Grid2D& g) : grid(g), values(g.size(), 0.0) {}
  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

inline ModalState to_modal(const GridField& f, int n_modes, const SineTransform& dst, double t = 0.0) {
  ModalState s(n_modes, f.grid.x, t);
  std::vector<double> c(n_modes);
  for (int i = 0; i < f.grid.x.count; ++i) {
    dst.analyze(&f.values[f.grid.index(i, 0)], c.data(), n_modes);
    for (int n = 1; n <= n_modes; ++n) s.at(n, i) = c[n - 1];
  }
  return s;
}

inline GridField to_grid(const ModalState& s, const Grid2D& g, const SineTransform& dst) {
  if (g.x.count != s.grid.count) throw InputError("x grids differ");
  GridField f(g);
  std::vector<double> c(s.modes);
  for (int i = 0; i < g.x.count; ++i) {
    for (int n = 1; n <= s.modes; ++n) c[n - 1] = s.at(n, i);
    dst.synthesize(c.data(), s.modes, &f.values[g.index(i, 0)]);
  }
  return f;
}

// Source seen by the stepper: the step-averaged modal source on [t_k, t_{k+1}].
struct SourceField {
  std::function<void(int step, double t0, double t1, ModalState& out)> step_source;

  bool empty() const { return !step_source; }

  static SourceField none() { return {}; }

  // Pointwise-in-time modal closure, averaged by the trapezoidal rule.
  static SourceField modal(std::function<void(double t, ModalState& out)> fn) {
    SourceField s;
    auto f = std::make_shared<std::function<void(double, ModalState&)>>(std::move(fn));
    s.step_source = [f](int, double t0, double t1, ModalState& out) {
      ModalState b = out;
      (*f)(t0, out);
      (*f)(t1, b);
      for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] = 0.5 * (out.data[k] + b.data[k]);
    };
    return s;
  }

  // Pointwise-in-time field on the 2D grid; sine-transformed in y each call.
  static SourceField grid(const Grid2D& g, std::function<void(double t, GridField& out)> fn) {
    auto f = std::make_shared<std::function<void(double, GridField&)>>(std::move(fn));
    auto dst = std::make_shared<SineTransform>(g.ny);
    return modal([f, dst, g](double t, ModalState& out) {
      GridField field(g);
      (*f)(t, field);
      out = to_modal(field, out.modes, *dst, t);
    });
  }
};

// One Crank-Nicolson step of d/dt f_n = -(A_n) f_n + s_n with
// A_n = -D_xx + n^2 x^2.
class ModeStepper {
 public:
  ModeStepper(int n, const Grid1D& g, double dt) : n_(n), dt_(dt), a_(modal_operator(n, g)) {
    if (!(dt > 0.0)) throw InputError("time step must be positive");
    SymTridiag lhs;
    lhs.d.resize(a_.d.size());
    for (std::size_t i = 0; i < a_.d.size(); ++i) lhs.d[i] = 1.0 + 0.5 * dt * a_.d[i];
    lhs.e = 0.5 * dt * a_.e;
    factor_ = TridiagFactor(lhs, 0.0);
  }

  void step(double* f, const double* source) const {
    const int m = static_cast<int>(a_.d.size());
    std::vector<double> r(m);
    for (int i = 0; i < m; ++i) {
      double af = a_.d[i] * f[i];
      if (i > 0) af += a_.e * f[i - 1];
      if (i + 1 < m) af += a_.e * f[i + 1];
      r[i] = f[i] - 0.5 * dt_ * af + (source ? dt_ * source[i] : 0.0);
    }
    factor_.solve(r);
    std::copy(r.begin(), r.end(), f);
  }

  int mode() const { return n_; }

 private:
  int n_;
  double dt_;
  SymTridiag a_;
  TridiagFactor factor_;
};

inline std::vector<double> step_mode(const std::vector<double>& f, int n, const Grid1D& g, double dt,
                                     const std::vector<double>& source) {
  ModeStepper st(n, g, dt);
  std::vector<double> out = f;
  st.step(out.data(), source.empty() ? nullptr : source.data());
  return out;
}

struct Trajectory {
  double dt = 0.0;
  std::vector<ModalState> states;  // states[k] at t = k dt
};

// Receives every state k = 0..steps.
using StateObserver = std::function<void(int k, const ModalState& s)>;

inline int step_count(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw InputError("T and dt must be positive");
  return std::max(1, static_cast<int>(std::lround(T / dt)));
}

// Evolves f0 to T with steps of T / round(T/dt); calls obs on every state.
inline ModalState evolve_observed(const ModalState& f0, double T, const SourceField& source, double dt,
                                  const StateObserver& obs) {
  const int K = step_count(T, dt);
  const double h = T / K;
  std::vector<ModeStepper> steppers;
  steppers.reserve(f0.modes);
  for (int n = 1; n <= f0.modes; ++n) steppers.emplace_back(n, f0.grid, h);
  ModalState f = f0;
  ModalState s(f0.modes, f0.grid);
  if (obs) obs(0, f);
  for (int k = 0; k < K; ++k) {
    const double t0 = f0.t + k * h, t1 = f0.t + (k + 1) * h;
    if (!source.empty()) {
      std::fill(s.data.begin(), s.data.end(), 0.0);
      source.step_source(k, t0, t1, s);
      if (s.modes != f.modes || s.grid.count != f.grid.count) throw InputError("source and state grids differ");
    }
    for (int n = 1; n <= f.modes; ++n) steppers[n - 1].step(f.mode(n), source.empty() ? nullptr : s.mode(n));
    f.t = t1;
    f.check_finite();
    if (obs) obs(k + 1, f);
  }
  return f;
}

inline Trajectory evolve(const ModalState& f0, double T, const SourceField& source, double dt) {
  Trajectory tr;
  tr.dt = T / step_count(T, dt);
  evolve_observed(f0, T, source, dt, [&](int, const ModalState& s) { tr.states.push_back(s); });
  return tr;
}

}  // namespace grushin
