#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "grushin/geometry.hpp"

using namespace grushin;

namespace {

YProfile constant(double v, int m = 17) { return YProfile{std::vector<double>(m, v)}; }

}  // namespace

TEST(Geometry, CriticalAbscissa) {
  EXPECT_EQ(critical_abscissa(vertical_path(0.0)), 0.0);
  Path p;
  const int m = 101;
  for (int k = 0; k < m; ++k) {
    const double s = static_cast<double>(k) / (m - 1);
    p.samples.push_back({-0.7 * std::sin(std::numbers::pi * s), std::numbers::pi * s});
  }
  EXPECT_NEAR(critical_abscissa(p), 0.7, 1e-12);
  EXPECT_NEAR(critical_abscissa(sketch_path(0.488)), 0.488, 1e-12);
}

TEST(Geometry, CorridorCriticalA) {
  EXPECT_EQ(corridor_critical_a(constant(-0.3), constant(0.3)), 0.0);
  EXPECT_NEAR(corridor_critical_a(constant(0.2), constant(0.8)), 0.2, 1e-15);
  YProfile g1 = constant(-0.9, 33), g2 = constant(-0.1, 33);
  g2.values[16] = -0.5;
  EXPECT_NEAR(corridor_critical_a(g1, g2), 0.5, 1e-15);
  EXPECT_NEAR(corridor_critical_a(constant(-0.6), constant(-0.2)), 0.2, 1e-15);
  EXPECT_THROW(corridor_critical_a(constant(0.3), constant(0.3)), InputError);
  const auto [w1, w2] = wavy_corridor(0.4);
  EXPECT_NEAR(corridor_critical_a(w1, w2), 0.4, 1e-15);
}

TEST(Geometry, MidlineStaysWithinAPlusEps) {
  for (double eps : {0.05, 0.1, 0.2}) {
    for (auto [lo, hi] : {std::pair{-0.6, -0.2}, std::pair{-0.95, 0.3}, std::pair{0.1, 0.7}}) {
      const YProfile g1 = constant(lo), g2 = constant(hi);
      EXPECT_LE(critical_abscissa(corridor_midline(g1, g2, eps)), corridor_critical_a(g1, g2) + eps + 1e-12);
    }
    const auto [w1, w2] = wavy_corridor(0.4);
    EXPECT_LE(critical_abscissa(corridor_midline(w1, w2, eps)), 0.4 + eps + 1e-12);
  }
}

TEST(Geometry, MaskFollowsOpenPredicate) {
  const Grid2D g = make_grid2d(39, 21);
  const Region r = make_strip(-0.5, 0.5, g);
  for (int i = 0; i < g.x.count; ++i)
    for (int j = 0; j < g.ny; ++j) EXPECT_EQ(r.in_mask(i, j), r.contains(g.x.node(i), g.y(j)));
  // x = +-0.5 are nodes of this grid and lie on the boundary.
  EXPECT_NEAR(g.x.node(9), -0.5, 1e-12);
  EXPECT_FALSE(r.in_mask(9, 3));
  EXPECT_TRUE(r.in_mask(10, 3));
}

TEST(Geometry, SegmentClearance) {
  const Grid2D g = make_grid2d(801, 401);
  const Region full = make_strip(-1.0, 1.0, g);
  for (double y0 : {0.3, 1.5, 2.9}) EXPECT_EQ(segment_clearance(full, y0), 0.0);
  const Region rc = make_rectangle_complement(0.6, 1.0, 0.1, g);
  EXPECT_NEAR(segment_clearance(rc, 1.0), 0.6, g.x.h);
  const Region ts = make_two_strips(0.5, g);
  for (double y0 : {0.2, 1.0, 3.0}) EXPECT_NEAR(segment_clearance(ts, y0), 0.5, g.x.h);
}

TEST(Geometry, ClearanceShrinksAsRegionGrows) {
  const Grid2D g = make_grid2d(201, 101);
  double prev = 1.0;
  for (double a : {0.8, 0.6, 0.4, 0.2, 0.0}) {
    const double c = segment_clearance(make_two_strips(a, g), 1.0);
    EXPECT_LE(c, prev);
    prev = c;
  }
  EXPECT_GE(segment_clearance(make_rectangle_complement(0.6, 1.0, 0.3, g), 1.0),
            segment_clearance(make_rectangle_complement(0.3, 1.0, 0.3, g), 1.0));
}

TEST(Geometry, PgmExport) {
  const Grid2D g = make_grid2d(21, 11);
  const Region r = make_two_strips(0.5, g);
  const auto file = (std::filesystem::temp_directory_path() / "grushin_mask_test.pgm").string();
  write_pgm(r, file);
  std::ifstream in(file, std::ios::binary);
  std::string magic;
  int w = 0, h = 0, mx = 0;
  in >> magic >> w >> h >> mx;
  in.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 21);
  EXPECT_EQ(h, 11);
  EXPECT_EQ(mx, 255);
  std::vector<unsigned char> px(21 * 11);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  EXPECT_EQ(in.gcount(), 21 * 11);
  EXPECT_EQ(px[0], 255);   // x = -0.909
  EXPECT_EQ(px[10], 0);    // x = 0
  std::filesystem::remove(file);
}

TEST(Geometry, VerticalPathCutoffIsSmoothedStep) {
  const Grid2D g = make_grid2d(399, 129);
  const CutoffField cf = build_cutoff(vertical_path(-0.5), 0.1, g);
  for (int i = 0; i < g.x.count; ++i) {
    const double x = g.x.node(i);
    for (int j = 0; j < g.ny; ++j) {
      const double t = cf.theta(i, j);
      if (x <= -0.55) EXPECT_EQ(t, 0.0);
      if (x >= -0.45) EXPECT_EQ(t, 1.0);
      EXPECT_NEAR(t, cf.theta(i, 0), 1e-12);
    }
  }
  // Monotone in x across the layer, 1/2 on the path.
  for (int i = 1; i < g.x.count; ++i) EXPECT_GE(cf.theta(i, 40), cf.theta(i - 1, 40));
  EXPECT_NEAR(g.x.node(99), -0.5, 1e-12);
  EXPECT_NEAR(cf.theta(99, 40), 0.5, 1e-9);
  EXPECT_EQ(cutoff_support_violations(cf), 0u);
}

TEST(Geometry, SketchPathCutoff) {
  const Grid2D g = make_grid2d(201, 201);
  const double eps = 0.15;
  const Path p = sketch_path(0.488);
  const CutoffField cf = build_cutoff(p, eps, g);
  const double a = cf.a;
  EXPECT_NEAR(a, 0.488, 1e-12);
  EXPECT_EQ(cutoff_support_violations(cf), 0u);
  for (int i = 0; i < g.x.count; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double x = g.x.node(i), t = cf.theta(i, j);
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, 1.0);
      if (cf.in_tube(i, j)) continue;
      if (x < -a) EXPECT_EQ(t, 0.0);
      if (x > a) EXPECT_EQ(t, 1.0);
      if (p.extended(2 * eps).distance({x, g.y(j)}) > eps / 2.0) EXPECT_TRUE(t == 0.0 || t == 1.0);
    }
}

TEST(Geometry, CutoffIsDeterministic) {
  const Grid2D g = make_grid2d(101, 65);
  const CutoffField a = build_cutoff(sketch_path(0.5), 0.15, g), b = build_cutoff(sketch_path(0.5), 0.15, g);
  EXPECT_EQ(a.padded, b.padded);
  EXPECT_EQ(a.gradient_support, b.gradient_support);
}

TEST(Geometry, CutoffErrors) {
  const Grid2D g = make_grid2d(201, 129);
  EXPECT_THROW(build_cutoff(vertical_path(0.95), 0.1, g), GeometryError);
  EXPECT_THROW(build_cutoff(vertical_path(0.0), 0.1, make_grid2d(41, 21)), ResolutionError);
  EXPECT_THROW(build_cutoff(vertical_path(0.0, 5), 0.1, g), InputError);
  Path half;
  half.samples = {{0.0, 0.0}, {0.0, 1.0}};
  EXPECT_THROW(build_cutoff(half, 0.1, g), InputError);
}

TEST(Geometry, PathNeighborhoodMatchesTube) {
  const Grid2D g = make_grid2d(101, 65);
  const Path p = sketch_path(0.488);
  const Region r = make_path_neighborhood(p, 0.15, g);
  for (int i = 0; i < g.x.count; ++i)
    for (int j = 0; j < g.ny; ++j)
      EXPECT_EQ(r.in_mask(i, j), p.distance({g.x.node(i), g.y(j)}) < 0.15);
  EXPECT_GT(r.measure(), 0.0);
}
