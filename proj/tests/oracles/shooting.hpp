#pragma once

// Test-only oracle: ground-state eigenvalue of -v'' + (n x)^2 v = lambda v on
// (-1, 1), v(+-1) = 0, by shooting from x = 0 with even data and bisecting on
// the sign of v(1). Independent of the finite-difference code under test.

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

using State = std::array<double, 2>;

// v(1) for trial lambda, v(0) = 1, v'(0) = 0.
inline double shoot(int n, double lambda, int steps = 20000, std::vector<double>* samples = nullptr) {
  namespace ode = boost::numeric::odeint;
  const double nn = static_cast<double>(n) * n;
  auto rhs = [&](const State& s, State& ds, double x) {
    ds[0] = s[1];
    ds[1] = (nn * x * x - lambda) * s[0];
  };
  ode::runge_kutta4<State> stepper;
  State s{1.0, 0.0};
  const double dx = 1.0 / steps;
  if (samples) samples->assign(1, 1.0);
  for (int k = 0; k < steps; ++k) {
    stepper.do_step(rhs, s, k * dx, dx);
    if (samples) samples->push_back(s[0]);
  }
  return s[0];
}

inline double ground_state_eigenvalue(int n, int steps = 20000) {
  double lo = n == 0 ? 1.0 : n - 1.0;
  double hi = n + 3.0;
  for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1, n); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shoot(n, mid, steps) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenfunction samples at x = k/steps, k = 0..steps, normalized v(0) = 1.
inline std::vector<double> ground_state_profile(int n, double lambda, int steps = 20000) {
  std::vector<double> v;
  shoot(n, lambda, steps, &v);
  return v;
}

}  // namespace oracle
