#pragma once

// Control regions on Omega = (-1,1) x (0,pi), paths, corridors and the
// cutoff used to glue two strip controls.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/grid.hpp"

namespace grushin {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

// Polyline from the bottom edge y = 0 to the top edge y = pi.
struct Path {
  std::vector<Point> samples;

  double distance(Point p) const {
    double d = std::numeric_limits<double>::infinity();
    if (samples.size() == 1) return std::hypot(p.x - samples[0].x, p.y - samples[0].y);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
      d = std::min(d, segment_distance(p, samples[i], samples[i + 1]));
    return d;
  }

  double max_gap() const {
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
      g = std::max(g, std::hypot(samples[i + 1].x - samples[i].x, samples[i + 1].y - samples[i].y));
    return g;
  }

  // Same path with vertical segments of length `len` added below and above.
  Path extended(double len) const {
    Path p;
    p.samples.push_back({samples.front().x, samples.front().y - len});
    p.samples.insert(p.samples.end(), samples.begin(), samples.end());
    p.samples.push_back({samples.back().x, samples.back().y + len});
    return p;
  }
};

inline void validate_path(const Path& p) {
  if (p.samples.size() < 2) throw InputError("a path needs at least two samples");
  const double tol = 1e-12;
  const Point a = p.samples.front(), b = p.samples.back();
  if (std::abs(a.y) > tol || !(std::abs(a.x) < 1.0)) throw InputError("path must start on (-1,1) x {0}");
  if (std::abs(b.y - std::numbers::pi) > tol || !(std::abs(b.x) < 1.0))
    throw InputError("path must end on (-1,1) x {pi}");
  for (const Point& s : p.samples)
    if (!(std::abs(s.x) <= 1.0 && s.y >= -tol && s.y <= std::numbers::pi + tol))
      throw InputError("path leaves the closed rectangle");
}

inline Path vertical_path(double x, int samples = 65) {
  Path p;
  for (int k = 0; k < samples; ++k) p.samples.push_back({x, std::numbers::pi * k / (samples - 1)});
  return p;
}

inline double critical_abscissa(const Path& p) {
  double a = 0.0;
  for (const Point& s : p.samples) a = std::max(a, std::abs(s.x));
  return a;
}

// Function of y sampled at y_k = k pi / (m - 1), linearly interpolated.
struct YProfile {
  std::vector<double> values;

  double operator()(double y) const {
    const int m = static_cast<int>(values.size());
    if (m == 1) return values[0];
    const double s = std::clamp(y / std::numbers::pi, 0.0, 1.0) * (m - 1);
    const int k = std::min(static_cast<int>(s), m - 2);
    const double t = s - k;
    return (1.0 - t) * values[k] + t * values[k + 1];
  }
  double y_at(int k) const {
    return values.size() == 1 ? 0.0 : std::numbers::pi * k / (static_cast<double>(values.size()) - 1);
  }
};

inline void validate_corridor(const YProfile& g1, const YProfile& g2) {
  if (g1.values.empty() || g1.values.size() != g2.values.size())
    throw InputError("corridor profiles must be nonempty and sampled alike");
  for (std::size_t k = 0; k < g1.values.size(); ++k) {
    if (!(g1.values[k] > -1.0 && g2.values[k] < 1.0)) throw InputError("corridor profiles must lie in (-1, 1)");
    if (!(g1.values[k] < g2.values[k]))
      throw InputError("invalid corridor: gamma1 >= gamma2 at sample " + std::to_string(k));
  }
}

// max(max gamma2^-, max gamma1^+)
inline double corridor_critical_a(const YProfile& g1, const YProfile& g2) {
  validate_corridor(g1, g2);
  double a = 0.0;
  for (std::size_t k = 0; k < g1.values.size(); ++k)
    a = std::max({a, std::max(0.0, -g2.values[k]), std::max(0.0, g1.values[k])});
  return a;
}

// Midline of the corridor with both edges clamped to [-(a+eps), a+eps].
inline Path corridor_midline(const YProfile& g1, const YProfile& g2, double eps, int samples = 257) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  const double a = corridor_critical_a(g1, g2);
  Path p;
  for (int k = 0; k < samples; ++k) {
    const double y = std::numbers::pi * k / (samples - 1);
    const double lo = std::max(g1(y), -a - eps), hi = std::min(g2(y), a + eps);
    p.samples.push_back({0.5 * (lo + hi), y});
  }
  return p;
}

// Cubic Bezier chain through the sketch of a path that wanders left to
// x ~ -a and ends right of center, rescaled so its critical abscissa is a.
inline Path sketch_path(double a, int per_segment = 64) {
  using P = std::array<double, 2>;
  // Control points in sketch coordinates: x in [-2,2], y in [0,1].
  const std::vector<std::array<P, 4>> segs = {
      {P{-1, 0}, P{-1.4332, 0.2846}, P{-1.4225, 0.299}, P{-1.4743, 0.4381}},
      {P{-1.4743, 0.4381}, P{-1.5265, 0.6283}, P{-1.4179, 0.7119}, P{-1.337, 0.6876}},
      {P{-1.337, 0.6876}, P{-1.2643, 0.6719}, P{-1.1059, 0.5927}, P{-0.817, 0.4359}},
      {P{-0.817, 0.4359}, P{-0.5284, 0.2964}, P{-0.4264, 0.2928}, P{-0.1871, 0.2626}},
      {P{-0.1871, 0.2626}, P{0.1021, 0.2333}, P{0.2273, 0.2458}, P{0.4758, 0.4386}},
      {P{0.4758, 0.4386}, P{0.6298, 0.5679}, P{0.7454, 0.7164}, P{0.9, 1}}};
  std::vector<P> raw;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& c = segs[s];
    for (int i = (s == 0 ? 0 : 1); i <= per_segment; ++i) {
      const double t = static_cast<double>(i) / per_segment, u = 1.0 - t;
      P q{};
      for (int d = 0; d < 2; ++d)
        q[d] = u * u * u * c[0][d] + 3 * u * u * t * c[1][d] + 3 * u * t * t * c[2][d] + t * t * t * c[3][d];
      raw.push_back(q);
    }
  }
  double m = 0.0;
  for (const P& q : raw) m = std::max(m, std::abs(q[0]));
  Path p;
  for (const P& q : raw) p.samples.push_back({q[0] * a / m, q[1] * std::numbers::pi});
  p.samples.front().y = 0.0;
  p.samples.back().y = std::numbers::pi;
  return p;
}

// Corridor with right edge x = -a and a wavy left edge between -1 and -a.
inline std::pair<YProfile, YProfile> wavy_corridor(double a, int samples = 129) {
  if (!(a > 0.0 && a < 1.0)) throw InputError("a must lie in (0, 1)");
  YProfile g1, g2;
  for (int k = 0; k < samples; ++k) {
    const double y = std::numbers::pi * k / (samples - 1);
    g1.values.push_back(-0.5 * (1.0 + a) + 0.25 * (1.0 - a) * std::sin(2.0 * y));
    g2.values.push_back(-a);
  }
  return {g1, g2};
}

// ---------------------------------------------------------------------------

struct Region {
  enum class Kind { strip, two_strips, corridor, rectangle_complement, path_neighborhood, explicit_mask };

  Kind kind = Kind::strip;
  double lo = -1.0, hi = 1.0;             // strip
  double a = 0.0;                         // two strips: |x| > a
  YProfile gamma1, gamma2;                // corridor
  double half_w = 0.0, yc = 0.0, half_h = 0.0;  // rectangle {|x| < half_w, |y - yc| < half_h} removed
  Path path;                              // path neighborhood
  double eps = 0.0;
  Grid2D grid;
  std::vector<std::uint8_t> mask;

  // Open-set predicate; explicit masks answer by nearest node.
  bool contains(double x, double y) const {
    if (!(x > -1.0 && x < 1.0 && y > 0.0 && y < std::numbers::pi)) return false;
    switch (kind) {
      case Kind::strip: return x > lo && x < hi;
      case Kind::two_strips: return std::abs(x) > a;
      case Kind::corridor: return x > gamma1(y) && x < gamma2(y);
      case Kind::rectangle_complement: return !(std::abs(x) <= half_w && std::abs(y - yc) <= half_h);
      case Kind::path_neighborhood: return path.distance({x, y}) < eps;
      case Kind::explicit_mask: {
        const int i = std::clamp(static_cast<int>(std::lround((x + 1.0) / grid.x.h - 1.0)), 0, grid.x.count - 1);
        const int j = std::clamp(static_cast<int>(std::lround(y / grid.hy() - 1.0)), 0, grid.ny - 1);
        return mask[grid.index(i, j)] != 0;
      }
    }
    return false;
  }

  bool in_mask(int i, int j) const { return mask[grid.index(i, j)] != 0; }

  std::size_t count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)); }

  double measure() const { return static_cast<double>(count()) * grid.cell_area(); }
};

inline const char* to_string(Region::Kind k) {
  switch (k) {
    case Region::Kind::strip: return "strip";
    case Region::Kind::two_strips: return "two-strips";
    case Region::Kind::corridor: return "corridor";
    case Region::Kind::rectangle_complement: return "rectangle-complement";
    case Region::Kind::path_neighborhood: return "path-neighborhood";
    default: return "explicit-mask";
  }
}

// Mask of the predicate at node centers.
inline Region rasterize(Region r, const Grid2D& g) {
  if (r.kind == Region::Kind::explicit_mask) {
    if (g.x.count != r.grid.x.count || g.ny != r.grid.ny) {
      Region out = r;
      out.grid = g;
      out.mask.assign(g.size(), 0);
      for (int i = 0; i < g.x.count; ++i)
        for (int j = 0; j < g.ny; ++j) out.mask[g.index(i, j)] = r.contains(g.x.node(i), g.y(j)) ? 1 : 0;
      return out;
    }
    return r;
  }
  r.grid = g;
  r.mask.assign(g.size(), 0);
  for (int i = 0; i < g.x.count; ++i)
    for (int j = 0; j < g.ny; ++j) r.mask[g.index(i, j)] = r.contains(g.x.node(i), g.y(j)) ? 1 : 0;
  return r;
}

inline Region make_strip(double lo, double hi, const Grid2D& g) {
  if (!(lo >= -1.0 && lo < hi && hi <= 1.0)) throw InputError("strip bounds must satisfy -1 <= lo < hi <= 1");
  Region r;
  r.kind = Region::Kind::strip;
  r.lo = lo;
  r.hi = hi;
  return rasterize(r, g);
}

inline Region make_two_strips(double a, const Grid2D& g) {
  if (!(a >= 0.0 && a < 1.0)) throw InputError("two-strips needs 0 <= a < 1");
  Region r;
  r.kind = Region::Kind::two_strips;
  r.a = a;
  return rasterize(r, g);
}

inline Region make_corridor(const YProfile& g1, const YProfile& g2, const Grid2D& g) {
  validate_corridor(g1, g2);
  Region r;
  r.kind = Region::Kind::corridor;
  r.gamma1 = g1;
  r.gamma2 = g2;
  return rasterize(r, g);
}

inline Region make_rectangle_complement(double half_w, double yc, double half_h, const Grid2D& g) {
  if (!(half_w > 0.0 && half_h > 0.0)) throw InputError("rectangle half sizes must be positive");
  Region r;
  r.kind = Region::Kind::rectangle_complement;
  r.half_w = half_w;
  r.yc = yc;
  r.half_h = half_h;
  return rasterize(r, g);
}

// omega_0 = {z in Omega : dist(z, path) < eps}
inline Region make_path_neighborhood(const Path& p, double eps, const Grid2D& g) {
  validate_path(p);
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  Region r;
  r.kind = Region::Kind::path_neighborhood;
  r.path = p;
  r.eps = eps;
  return rasterize(r, g);
}

inline Region make_explicit_mask(const Grid2D& g, std::vector<std::uint8_t> mask) {
  if (mask.size() != g.size()) throw InputError("mask size does not match the grid");
  Region r;
  r.kind = Region::Kind::explicit_mask;
  r.grid = g;
  for (auto& m : mask) m = m ? 1 : 0;
  r.mask = std::move(mask);
  return r;
}

// Largest a such that {(x, y0) : |x| < a} misses the closure of the region,
// read off the mask row nearest y0 with a half-cell margin.
inline double segment_clearance(const Region& r, double y0) {
  const Grid2D& g = r.grid;
  if (!(y0 > 0.0 && y0 < std::numbers::pi)) throw InputError("y0 must lie in (0, pi)");
  const int j = std::clamp(static_cast<int>(std::lround(y0 / g.hy() - 1.0)), 0, g.ny - 1);
  double c = 1.0;
  for (int i = 0; i < g.x.count; ++i)
    if (r.in_mask(i, j)) c = std::min(c, std::abs(g.x.node(i)) - 0.5 * g.x.h);
  return std::max(c, 0.0);
}

// P5 image, one row per y node (top row y near pi), 255 inside.
inline void write_pgm(const Region& r, const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write " + file);
  const Grid2D& g = r.grid;
  out << "P5\n" << g.x.count << " " << g.ny << "\n255\n";
  std::vector<unsigned char> row(g.x.count);
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.x.count; ++i) row[i] = r.in_mask(i, j) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

// ---------------------------------------------------------------------------
// Cutoff: mollified indicator of the part of Omega right of the path.

struct CutoffField {
  Grid2D grid;
  Path path;         // extended path
  double eps = 0.0;
  double a = 0.0;    // critical abscissa of the original path
  // theta on the grid padded by one node on each side (ghost values follow the
  // vertical extension of the path).
  std::vector<double> padded;
  std::vector<std::uint8_t> gradient_support;
  std::vector<std::uint8_t> tube;  // omega_0 on the grid

  double theta(int i, int j) const { return padded[static_cast<std::size_t>(i + 1) * (grid.ny + 2) + (j + 1)]; }

  std::vector<double> values() const {
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.x.count; ++i)
      for (int j = 0; j < grid.ny; ++j) v[grid.index(i, j)] = theta(i, j);
    return v;
  }

  bool in_gradient_support(int i, int j) const { return gradient_support[grid.index(i, j)] != 0; }
  bool in_tube(int i, int j) const { return tube[grid.index(i, j)] != 0; }
};

namespace detail {

// Closed polygon: the extended path, then around the right side of Omega.
inline std::vector<Point> right_polygon(const Path& ext) {
  std::vector<Point> poly = ext.samples;
  poly.push_back({3.0, ext.samples.back().y});
  poly.push_back({3.0, ext.samples.front().y});
  return poly;
}

// x-intervals of the polygon interior on the line at height y (even-odd rule).
inline std::vector<std::pair<double, double>> polygon_row(const std::vector<Point>& poly, double y) {
  std::vector<double> xs;
  for (std::size_t i = 0, k = poly.size() - 1; i < poly.size(); k = i++) {
    const Point a = poly[i], b = poly[k];
    if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> iv;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) iv.push_back({xs[i], xs[i + 1]});
  return iv;
}

inline bool inside_rows(const std::vector<std::pair<double, double>>& iv, double x) {
  for (const auto& [a, b] : iv)
    if (x > a && x < b) return true;
  return false;
}

// int_{ua}^{ub} (alpha - u^2/R^2)^4 du
inline double bump_row_integral(double alpha, double R, double ua, double ub) {
  static constexpr double binom[5] = {1, 4, 6, 4, 1};
  auto F = [&](double u) {
    double s = 0.0, up = u, ap = alpha * alpha * alpha * alpha, rp = 1.0;
    const double u2 = u * u, r2 = R * R;
    for (int k = 0; k <= 4; ++k) {
      s += binom[k] * (k % 2 ? -1.0 : 1.0) * ap * up / ((2 * k + 1) * rp);
      up *= u2;
      rp *= r2;
      ap = alpha > 0.0 ? ap / alpha : 0.0;
    }
    return s;
  };
  return F(ub) - F(ua);
}

}  // namespace detail

inline double bump_profile(double r, double R) {
  const double s = r / R;
  if (s >= 1.0) return 0.0;
  const double t = 1.0 - s * s;
  return t * t * t * t;
}

// theta = indicator of the right component, mollified by the bump
// (1 - (r/R)^2)^4 with R = eps/2. The indicator is rasterized by flood fill;
// the convolution integrates the polygonal indicator row by row (closed form in
// x, rows every hy/8 in y), so theta is smooth at grid scale.
inline CutoffField build_cutoff(const Path& path, double eps, const Grid2D& g) {
  validate_path(path);
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  for (const Point& s : path.samples)
    if (std::abs(s.x) + eps >= 1.0) throw GeometryError("the eps-tube around the path leaves Omega horizontally");
  if (path.max_gap() >= eps / 2.0) throw InputError("path samples farther apart than the mollifier radius");
  // A node outside the tube must not see a varying neighbor.
  if (std::max(g.x.h, g.hy()) > eps / 2.0)
    throw ResolutionError("grid spacing above eps/2: discrete gradient of theta would leave the tube");

  CutoffField cf;
  cf.grid = g;
  cf.eps = eps;
  cf.a = critical_abscissa(path);
  cf.path = path.extended(2.0 * eps);
  const double hx = g.x.h, hy = g.hy();
  const double R = eps / 2.0;

  // Node grid padded by one ghost layer on each side.
  const int px = g.x.count + 2, py = g.ny + 2;
  auto pidx = [&](int i, int j) { return static_cast<std::size_t>(i + 1) * py + (j + 1); };
  auto xi = [&](int i) { return g.x.node(i); };
  auto yj = [&](int j) { return g.y(j); };
  std::vector<double> dist(static_cast<std::size_t>(px) * py);
  std::vector<std::uint8_t> wall(dist.size(), 0);
  std::vector<std::int8_t> chi(dist.size(), -1);
  const double thick = 0.51 * std::max(hx, hy);
  for (int i = -1; i <= g.x.count; ++i)
    for (int j = -1; j <= g.ny; ++j) {
      const double d = cf.path.distance({xi(i), yj(j)});
      dist[pidx(i, j)] = d;
      if (d <= thick) wall[pidx(i, j)] = 1;
    }
  auto fill = [&](int i0, int j0, std::int8_t label) {
    if (wall[pidx(i0, j0)]) throw GeometryError("flood-fill seed lies on the path");
    std::vector<std::pair<int, int>> stack{{i0, j0}};
    while (!stack.empty()) {
      auto [i, j] = stack.back();
      stack.pop_back();
      if (i < -1 || j < -1 || i > g.x.count || j > g.ny) continue;
      const auto k = pidx(i, j);
      if (wall[k] || chi[k] == label) continue;
      if (chi[k] != -1) throw GeometryError("path does not separate Omega: flood fill reached both sides");
      chi[k] = label;
      stack.push_back({i + 1, j});
      stack.push_back({i - 1, j});
      stack.push_back({i, j + 1});
      stack.push_back({i, j - 1});
    }
  };
  fill(g.x.count, -1, 1);  // right of the path, on the bottom edge
  fill(-1, -1, 0);
  const auto poly = detail::right_polygon(cf.path);
  for (int i = -1; i <= g.x.count; ++i)
    for (int j = -1; j <= g.ny; ++j) {
      auto& c = chi[pidx(i, j)];
      const bool right = detail::inside_rows(detail::polygon_row(poly, yj(j)), xi(i));
      if (c == -1)
        c = right ? 1 : 0;
      else if ((c == 1) != right)
        throw GeometryError("flood fill and polygon side test disagree; path sampling too coarse");
    }

  // Fine rows at multiples of hy/8; node rows are multiples of hy.
  const int sub = 8;
  const double dy = hy / sub;
  const int reach = static_cast<int>(std::ceil(R / dy));
  const int m_lo = -sub - reach, m_hi = (g.ny + 1) * sub + reach;
  std::vector<std::vector<std::pair<double, double>>> rows(m_hi - m_lo + 1);
  for (int m = m_lo; m <= m_hi; ++m) rows[m - m_lo] = detail::polygon_row(poly, m * dy);
  double mass = 0.0;
  for (int o = -reach; o <= reach; ++o) {
    const double alpha = 1.0 - (o * dy) * (o * dy) / (R * R);
    if (alpha <= 0.0) continue;
    const double c = R * std::sqrt(alpha);
    mass += detail::bump_row_integral(alpha, R, -c, c);
  }

  cf.padded.assign(static_cast<std::size_t>(px) * py, 0.0);
  for (int i = -1; i <= g.x.count; ++i)
    for (int j = -1; j <= g.ny; ++j) {
      const auto k = pidx(i, j);
      if (dist[k] >= R) {
        cf.padded[k] = chi[k];
        continue;
      }
      const double x = xi(i);
      const int mj = (j + 1) * sub;
      double v = 0.0;
      for (int o = -reach; o <= reach; ++o) {
        const double alpha = 1.0 - (o * dy) * (o * dy) / (R * R);
        if (alpha <= 0.0) continue;
        const double c = R * std::sqrt(alpha);
        for (const auto& [a, b] : rows[mj + o - m_lo]) {
          const double lo = std::max(a, x - c), hi = std::min(b, x + c);
          if (hi > lo) v += detail::bump_row_integral(alpha, R, lo - x, hi - x);
        }
      }
      cf.padded[k] = std::clamp(v / mass, 0.0, 1.0);
    }

  cf.gradient_support.assign(g.size(), 0);
  cf.tube.assign(g.size(), 0);
  for (int i = 0; i < g.x.count; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double t = cf.theta(i, j);
      const bool flat = cf.theta(i - 1, j) == t && cf.theta(i + 1, j) == t && cf.theta(i, j - 1) == t &&
                        cf.theta(i, j + 1) == t;
      cf.gradient_support[g.index(i, j)] = flat ? 0 : 1;
      cf.tube[g.index(i, j)] = path.distance({g.x.node(i), g.y(j)}) < eps ? 1 : 0;
    }
  return cf;
}

// Nodes where the gradient is nonzero outside omega_0.
inline std::size_t cutoff_support_violations(const CutoffField& cf) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < cf.gradient_support.size(); ++k)
    if (cf.gradient_support[k] && !cf.tube[k]) ++n;
  return n;
}

}  // namespace grushin
