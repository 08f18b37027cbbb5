#pragma once

// Symmetric tridiagonal kernels: Sturm counts, lowest-eigenvalue bisection,
// LDL^T solves.

#include <cmath>
#include <limits>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

// Diagonal d, constant off-diagonal e.
struct SymTridiag {
  std::vector<double> d;
  double e = 0.0;

  int size() const { return static_cast<int>(d.size()); }
  double norm_inf() const {
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v) + 2.0 * std::abs(e));
    return m;
  }
};

// Number of eigenvalues strictly below sigma.
inline int sturm_count(const SymTridiag& a, double sigma) {
  const double e2 = a.e * a.e;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < a.size(); ++i) {
    q = a.d[i] - sigma - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

// Smallest eigenvalue by bisection to an absolute interval width of tol.
inline double lowest_eigenvalue(const SymTridiag& a, double tol) {
  double lo = std::numeric_limits<double>::infinity();
  for (double v : a.d) lo = std::min(lo, v - 2.0 * std::abs(a.e));
  double hi = lo + 1.0;
  while (sturm_count(a, hi) < 1) hi = lo + 2.0 * (hi - lo);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(a, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// LDL^T factorization of a - sigma I, reused across solves.
class TridiagFactor {
 public:
  TridiagFactor() = default;
  TridiagFactor(const SymTridiag& a, double sigma) : e_(a.e), piv_(a.d.size()) {
    const double floor = std::numeric_limits<double>::epsilon() * std::max(a.norm_inf(), 1.0);
    for (std::size_t i = 0; i < piv_.size(); ++i) {
      double q = a.d[i] - sigma - (i > 0 ? e_ * e_ / piv_[i - 1] : 0.0);
      if (!std::isfinite(q)) throw NumericalError("tridiagonal factorization produced a non-finite pivot");
      if (std::abs(q) < floor) q = q < 0.0 ? -floor : floor;
      piv_[i] = q;
    }
  }

  int size() const { return static_cast<int>(piv_.size()); }

  // Solves in place.
  void solve(std::vector<double>& b) const {
    const std::size_t n = piv_.size();
    for (std::size_t i = 1; i < n; ++i) b[i] -= e_ / piv_[i - 1] * b[i - 1];
    b[n - 1] /= piv_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - e_ * b[i + 1]) / piv_[i];
  }

 private:
  double e_ = 0.0;
  std::vector<double> piv_;
};

// y = a x
inline void tridiag_apply(const SymTridiag& a, const std::vector<double>& x, std::vector<double>& y) {
  const int n = a.size();
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    double s = a.d[i] * x[i];
    if (i > 0) s += a.e * x[i - 1];
    if (i + 1 < n) s += a.e * x[i + 1];
    y[i] = s;
  }
}

}  // namespace grushin
