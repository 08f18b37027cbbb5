#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "grushin/errors.hpp"

namespace grushin {

// Interior nodes of a uniform grid on (-1, 1). Odd count so x = 0 is a node.
struct Grid1D {
  int count = 0;
  double h = 0.0;

  double node(int i) const { return -1.0 + (i + 1) * h; }
  int center() const { return count / 2; }
  int mirror(int i) const { return count - 1 - i; }
  // Grid with every other node inserted (spacing h/2).
  Grid1D refined() const { return Grid1D{2 * count + 1, h / 2.0}; }
};

inline Grid1D make_grid(int count) {
  if (count < 3 || count % 2 == 0)
    throw InputError("grid node count must be odd and at least 3, got " + std::to_string(count));
  return Grid1D{count, 2.0 / (count + 1)};
}

// Coarsest grid of the family with spacing <= hmax.
inline Grid1D grid_for_spacing(double hmax) {
  if (!(hmax > 0.0 && hmax <= 1.0)) throw InputError("grid spacing must lie in (0, 1]");
  int intervals = static_cast<int>(std::ceil(2.0 / hmax - 1e-9));
  if (intervals % 2 == 1) ++intervals;
  return make_grid(std::max(intervals - 1, 3));
}

// Tensor grid over (-1,1) x (0,pi): Grid1D in x, interior sine nodes in y.
struct Grid2D {
  Grid1D x;
  int ny = 0;

  double hy() const { return std::numbers::pi / (ny + 1); }
  double y(int j) const { return (j + 1) * hy(); }
  double cell_area() const { return x.h * hy(); }
  std::size_t size() const { return static_cast<std::size_t>(x.count) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }
};

inline Grid2D make_grid2d(int nx, int ny) {
  if (ny < 1) throw InputError("y node count must be positive");
  return Grid2D{make_grid(nx), ny};
}

}  // namespace grushin
