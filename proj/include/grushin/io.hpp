#pragma once

// CSV, binary snapshot and manifest output.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "grushin/complexplane.hpp"
#include "grushin/control.hpp"
#include "grushin/dst.hpp"
#include "grushin/errors.hpp"
#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"

namespace grushin::io {

inline std::ofstream open_out(const std::string& file, bool binary = false) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InputError("cannot write " + file);
  out << std::setprecision(17);
  return out;
}

inline void write_spectral_csv(const SpectralTable& t, const std::string& file) {
  auto out = open_out(file);
  out << "n,lambda,rho,normsq,wmax\n";
  for (const auto& e : t.entries) out << e.n << ',' << e.lambda << ',' << e.rho << ',' << e.normsq << ',' << e.wmax << '\n';
}

inline void write_cost_csv(const CostCurve& c, const std::string& file) {
  auto out = open_out(file);
  out << "T,N,C,classification\n";
  for (const auto& s : c.samples) {
    Trend tr = Trend::inconclusive;
    for (const auto& [T, t] : c.trend)
      if (T == s.T) tr = t;
    out << s.T << ',' << s.N << ',';
    if (s.observable)
      out << s.C;
    else
      out << "inf";
    out << ',' << to_string(tr) << '\n';
  }
}

inline void write_ratio_csv(const RatioReport& r, const std::string& file) {
  auto out = open_out(file);
  out << "k,degree,l2_disk,linf_U,ratio\n";
  for (const auto& row : r.rows)
    out << row.k << ',' << row.degree << ',' << row.l2_disk << ',' << row.linf_U << ',' << row.ratio << '\n';
}

// Boundary samples carry weight 0; area samples their quadrature weight.
inline void write_domain_csv(const PlanarDomain& d, const std::string& file) {
  auto out = open_out(file);
  out << "re,im,weight\n";
  for (cplx z : d.boundary) out << z.real() << ',' << z.imag() << ",0\n";
  for (std::size_t i = 0; i < d.area_points.size(); ++i)
    out << d.area_points[i].real() << ',' << d.area_points[i].imag() << ',' << d.area_weights[i] << '\n';
}

inline void put_le(std::ostream& out, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

// Little-endian doubles: N, x-count, y-count, t, then f on the 2D grid (x-major).
inline void write_snapshot(const ModalState& s, int ny, const std::string& file) {
  auto out = open_out(file, true);
  const Grid2D g{s.grid, ny};
  const SineTransform dst(ny);
  const GridField f = to_grid(s, g, dst);
  put_le(out, s.modes);
  put_le(out, s.grid.count);
  put_le(out, ny);
  put_le(out, s.t);
  for (double v : f.values) put_le(out, v);
}

struct Snapshot {
  int modes = 0, nx = 0, ny = 0;
  double t = 0.0;
  std::vector<double> values;
};

inline Snapshot read_snapshot(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot read " + file);
  auto get = [&]() {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw InputError("truncated snapshot " + file);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    double v;
    std::memcpy(&v, &u, sizeof v);
    return v;
  };
  Snapshot s;
  s.modes = static_cast<int>(get());
  s.nx = static_cast<int>(get());
  s.ny = static_cast<int>(get());
  s.t = get();
  s.values.resize(static_cast<std::size_t>(s.nx) * s.ny);
  for (double& v : s.values) v = get();
  return s;
}

inline void write_norms_csv(const std::vector<ModalState>& states, const std::string& file) {
  auto out = open_out(file);
  out << "t,l2,energy\n";
  for (const auto& s : states) out << s.t << ',' << l2_norm(s) << ',' << std::sqrt(energy_norm_sq(s)) << '\n';
}

}  // namespace grushin::io
