#pragma once

// Test-only oracle: L2 norm of a polynomial on the disk |z| < R by a tensor
// rule in polar coordinates. Gauss-Legendre in r, trapezoid in angle; both are
// exact for |p|^2 r once the node counts exceed the degree.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

inline double disk_l2_quadrature(const std::vector<std::complex<double>>& c, double R) {
  const int deg = static_cast<int>(c.size()) - 1;
  const int m = 2 * deg + 8;
  auto ring = [&](double r) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      const std::complex<double> z = std::polar(r, 2.0 * std::numbers::pi * k / m);
      std::complex<double> p = 0.0;
      for (int i = deg; i >= 0; --i) p = p * z + c[i];
      s += std::norm(p);
    }
    return s * 2.0 * std::numbers::pi / m * r;
  };
  const double v = boost::math::quadrature::gauss<double, 40>::integrate(ring, 0.0, R);
  return std::sqrt(v);
}

// Integral over (0, T) of e^{-a t}, by composite Gauss-Legendre.
inline double exp_integral(double a, double T, int panels = 64) {
  double s = 0.0;
  const double w = T / panels;
  for (int p = 0; p < panels; ++p)
    s += boost::math::quadrature::gauss<double, 10>::integrate([&](double t) { return std::exp(-a * t); }, p * w,
                                                              (p + 1) * w);
  return s;
}

}  // namespace oracle
