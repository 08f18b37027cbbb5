#pragma once

// Planar domains of the negative result (U, K, D_x, disks), polynomial norms
// on them, and the pole-pushing Runge family.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/mpcomplex.hpp"
#include "grushin/spectral.hpp"

namespace grushin {

using cplx = std::complex<double>;

namespace detail {

inline double wrap_angle(double t) {
  t = std::remainder(t, 2.0 * std::numbers::pi);
  return t;
}

inline double segment_distance(cplx z, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double s = len2 > 0 ? ((z - a) * std::conj(ab)).real() / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(z - (a + s * ab));
}

}  // namespace detail

// {r_in <= |z| <= r_out, angle within half_width of center}; half_width >= pi
// means the full annulus.
struct AnnularSector {
  double r_in = 0.0;
  double r_out = 1.0;
  double center = 0.0;
  double half_width = std::numbers::pi;

  bool full() const { return half_width >= std::numbers::pi; }

  bool contains(cplx z, double tol = 1e-12) const {
    const double r = std::abs(z);
    if (r < r_in - tol || r > r_out + tol) return false;
    if (full() || r <= tol) return full() || r_in <= tol;
    return std::abs(detail::wrap_angle(std::arg(z) - center)) <= half_width + tol / std::max(r, tol);
  }

  double distance(cplx z) const {
    const double r = std::abs(z);
    const bool in_angle =
        full() || r == 0.0 || std::abs(detail::wrap_angle(std::arg(z) - center)) <= half_width;
    if (in_angle) return std::max({r_in - r, r - r_out, 0.0});
    const cplx e1 = std::polar(1.0, center - half_width);
    const cplx e2 = std::polar(1.0, center + half_width);
    return std::min(detail::segment_distance(z, r_in * e1, r_out * e1),
                    detail::segment_distance(z, r_in * e2, r_out * e2));
  }

  double area() const {
    const double ang = full() ? 2.0 * std::numbers::pi : 2.0 * half_width;
    return 0.5 * ang * (r_out * r_out - r_in * r_in);
  }

  double boundary_length() const {
    const double ang = full() ? 2.0 * std::numbers::pi : 2.0 * half_width;
    return ang * (r_in + r_out) + (full() ? 0.0 : 2.0 * (r_out - r_in));
  }

  // Points along the boundary with spacing about `step`.
  std::vector<cplx> boundary_points(double step) const {
    std::vector<cplx> pts;
    const double ang = full() ? 2.0 * std::numbers::pi : 2.0 * half_width;
    const double lo = full() ? 0.0 : center - half_width;
    auto arc = [&](double radius) {
      if (radius <= 0.0) return;
      const int n = std::max(2, static_cast<int>(std::ceil(ang * radius / step)));
      const int last = full() ? n - 1 : n;
      for (int i = 0; i <= last; ++i) pts.push_back(std::polar(radius, lo + ang * i / n));
    };
    arc(r_out);
    arc(r_in);
    if (!full()) {
      const int n = std::max(2, static_cast<int>(std::ceil((r_out - r_in) / step)));
      for (double th : {center - half_width, center + half_width}) {
        for (int i = 1; i < n; ++i) pts.push_back(std::polar(r_in + (r_out - r_in) * i / n, th));
      }
    }
    return pts;
  }
};

struct PlanarDomain {
  enum class Kind { disk, ring_sector_union_U, ring_union_K, partial_ring_Dx };

  Kind kind = Kind::disk;
  double y0 = 0.0;
  double delta = 0.0;
  double a_prime = 0.0;
  double eps = 0.0;
  double T = 0.0;
  double x = 0.0;
  double radius = 1.0;

  std::vector<AnnularSector> pieces;
  std::vector<cplx> boundary;
  std::vector<cplx> area_points;
  std::vector<double> area_weights;

  // Membership in the closure.
  bool contains(cplx z, double tol = 1e-12) const {
    for (const auto& p : pieces)
      if (p.contains(z, tol)) return true;
    return false;
  }

  // Distance from z to the closure.
  double distance(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) d = std::min(d, p.distance(z));
    return d;
  }

  double outer_radius() const {
    double r = 0.0;
    for (const auto& p : pieces) r = std::max(r, p.r_out);
    return r;
  }

  double area() const {
    double s = 0.0;
    for (double w : area_weights) s += w;
    return s;
  }

  bool interior(cplx z, double eta) const {
    for (int i = 0; i < 8; ++i)
      if (!contains(z + std::polar(eta, std::numbers::pi * i / 4.0), 0.0)) return false;
    return true;
  }

  // Every boundary sample is joined to 0 by a segment that stays in the domain.
  bool star_shaped(int samples_per_ray = 100) const {
    if (!contains(0.0)) return false;
    for (cplx z : boundary)
      for (int i = 1; i <= samples_per_ray; ++i)
        if (!contains(z * (static_cast<double>(i) / samples_per_ray), 1e-9)) return false;
    return true;
  }
};

struct SamplingOptions {
  int boundary_count = 4096;
  int area_count = 2048;
};

namespace detail {

// Sunflower point set on the disk of radius R, kept where `domain` holds.
inline void fill_area_samples(PlanarDomain& dom, int count) {
  const double R = dom.outer_radius();
  double area = 0.0;
  for (const auto& p : dom.pieces) area += p.area();  // upper bound, overlaps counted twice
  const double frac = std::clamp(area / (std::numbers::pi * R * R), 1e-3, 1.0);
  int trial = static_cast<int>(std::ceil(count / frac)) + 16;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int attempt = 0; attempt < 12; ++attempt) {
    dom.area_points.clear();
    for (int i = 0; i < trial; ++i) {
      const cplx z = std::polar(R * std::sqrt((i + 0.5) / trial), golden * i);
      if (dom.contains(z, 0.0)) dom.area_points.push_back(z);
    }
    if (static_cast<int>(dom.area_points.size()) >= count) break;
    trial = static_cast<int>(trial * 1.3) + 1;
  }
  const double cell = std::numbers::pi * R * R / trial;
  dom.area_weights.assign(dom.area_points.size(), cell);
}

inline void fill_boundary_samples(PlanarDomain& dom, int count) {
  double total = 0.0;
  for (const auto& p : dom.pieces) total += p.boundary_length();
  const double step = total / count;
  dom.boundary.clear();
  const double eta = 1e-9;
  for (const auto& p : dom.pieces)
    for (cplx z : p.boundary_points(step))
      if (!dom.interior(z, eta)) dom.boundary.push_back(z);
}

inline void finish_domain(PlanarDomain& dom, const SamplingOptions& opt) {
  fill_boundary_samples(dom, opt.boundary_count);
  fill_area_samples(dom, opt.area_count);
}

// Angular pieces of {||arg z| - y0| >= w}: one around 0, one around pi.
inline void add_wedge_complement(PlanarDomain& dom, double r_in, double r_out, double y0, double w) {
  const double h0 = y0 - w;
  const double h1 = std::numbers::pi - y0 - w;
  if (h0 > 0.0) dom.pieces.push_back({r_in, r_out, 0.0, h0});
  if (h1 > 0.0) dom.pieces.push_back({r_in, r_out, std::numbers::pi, h1});
}

}  // namespace detail

inline PlanarDomain build_disk(double radius, const SamplingOptions& opt = {}) {
  if (!(radius > 0.0)) throw InputError("disk radius must be positive");
  PlanarDomain dom;
  dom.kind = PlanarDomain::Kind::disk;
  dom.radius = radius;
  dom.pieces.push_back({0.0, radius, 0.0, std::numbers::pi});
  detail::finish_domain(dom, opt);
  return dom;
}

inline double u_inner_radius(double a_prime, double eps) {
  return std::exp(-(1.0 - 2.0 * eps) * a_prime * a_prime / 2.0);
}

inline PlanarDomain build_U(double y0, double delta, double a_prime, double eps,
                            const SamplingOptions& opt = {}) {
  if (!(y0 > 0.0 && y0 < std::numbers::pi)) throw InputError("y0 must lie in (0, pi)");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (!(a_prime > 0.0 && a_prime < 1.0)) throw InputError("a' must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
  PlanarDomain dom;
  dom.kind = PlanarDomain::Kind::ring_sector_union_U;
  dom.y0 = y0;
  dom.delta = delta;
  dom.a_prime = a_prime;
  dom.eps = eps;
  const double r_in = u_inner_radius(a_prime, eps);
  dom.pieces.push_back({0.0, r_in, 0.0, std::numbers::pi});
  detail::add_wedge_complement(dom, 0.0, 1.0, y0, delta / 2.0);
  if (dom.pieces.size() == 1)
    throw GeometryError("U reduces to its inner disk: the excluded wedge covers every direction");
  detail::finish_domain(dom, opt);
  if (!dom.star_shaped()) throw GeometryError("U failed the star-shapedness check");
  return dom;
}

// D_x: moduli between e^{-T-(1-eps)x^2/2} and e^{-(1-eps)x^2/2}; full ring when
// |x| > a', otherwise the directions with ||arg z| - y0| >= delta.
inline PlanarDomain build_Dx(double x, double T, double y0, double delta, double a_prime, double eps,
                             const SamplingOptions& opt = {}) {
  if (!(std::abs(x) <= 1.0)) throw InputError("x must lie in [-1, 1]");
  if (!(T > 0.0)) throw InputError("T must be positive");
  PlanarDomain dom;
  dom.kind = PlanarDomain::Kind::partial_ring_Dx;
  dom.x = x;
  dom.T = T;
  dom.y0 = y0;
  dom.delta = delta;
  dom.a_prime = a_prime;
  dom.eps = eps;
  const double s = (1.0 - eps) * x * x / 2.0;
  const double r_in = std::exp(-T - s), r_out = std::exp(-s);
  if (std::abs(x) > a_prime)
    dom.pieces.push_back({r_in, r_out, 0.0, std::numbers::pi});
  else
    detail::add_wedge_complement(dom, r_in, r_out, y0, delta);
  if (dom.pieces.empty()) throw GeometryError("D_x is empty for these parameters");
  detail::finish_domain(dom, opt);
  return dom;
}

// K: closure of the union of the D_x over x in [-1, 1].
inline PlanarDomain build_K(double T, double y0, double delta, double a_prime, double eps,
                            const SamplingOptions& opt = {}) {
  if (!(T > 0.0)) throw InputError("T must be positive");
  PlanarDomain dom;
  dom.kind = PlanarDomain::Kind::ring_union_K;
  dom.T = T;
  dom.y0 = y0;
  dom.delta = delta;
  dom.a_prime = a_prime;
  dom.eps = eps;
  const double sa = (1.0 - eps) * a_prime * a_prime / 2.0;
  dom.pieces.push_back({std::exp(-T - (1.0 - eps) / 2.0), std::exp(-sa), 0.0, std::numbers::pi});
  detail::add_wedge_complement(dom, std::exp(-T - sa), 1.0, y0, delta);
  detail::finish_domain(dom, opt);
  return dom;
}

// ---------------------------------------------------------------------------
// Polynomial norms. Coefficient i multiplies z^i.

// L2 norm on D(0, e^{-T}) from monomial orthogonality. Works in log space so
// coefficients far beyond double range are fine.
inline double poly_norm_L2_disk_log(const std::vector<double>& log_abs_coeffs, double T) {
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(log_abs_coeffs.size());
  for (std::size_t i = 0; i < log_abs_coeffs.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    terms[i] = std::log(std::numbers::pi / n) + 2.0 * log_abs_coeffs[i] - 2.0 * n * T;
    mx = std::max(mx, terms[i]);
  }
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return 0.5 * (mx + std::log(s));
}

inline double poly_norm_L2_disk(const std::vector<cplx>& coeffs, double T) {
  std::vector<double> la(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) la[i] = std::log(std::abs(coeffs[i]));
  return std::exp(poly_norm_L2_disk_log(la, T));
}

inline cplx horner(const std::vector<cplx>& coeffs, cplx z) {
  cplx s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * z + *it;
  return s;
}

inline double poly_norm_Linf(const std::vector<cplx>& coeffs, const PlanarDomain& dom) {
  double m = 0.0;
  for (cplx z : dom.boundary) m = std::max(m, std::abs(horner(coeffs, z)));
  for (cplx z : dom.area_points) m = std::max(m, std::abs(horner(coeffs, z)));
  return m;
}

// ---------------------------------------------------------------------------
// Runge family by pole pushing.

struct RungeOptions {
  double rho = 0.37;          // chain step as a fraction of the clearance to U
  double stop_radius = 1.1;   // last center lies outside this radius
  double tol = 1e-4;          // absolute accuracy target of each member on U
  double max_ratio = 0.9;     // largest admissible re-expansion ratio
  int max_degree = 32768;
  int max_links = 400;
  mpfr_prec_t bits = 256;     // starting precision, raised automatically
};

struct RungeMember {
  int k = 0;
  cplx pole;                                  // the pole this member approximates
  std::vector<mp::Complex> exact;             // coefficients of p~_k (z^i)
  std::vector<double> log_abs;                // log|coefficient|
  double error_bound = 0.0;                   // bound of |p~_k - 1/(z - pole)| on U
  int pole_order = 0;                         // length of the pushed expansion
  mpfr_prec_t bits = 0;
  int degree() const { return static_cast<int>(exact.size()) - 1; }
};

struct PolyFamily {
  cplx z0;
  int shift = 0;  // p_k = z^shift * p~_k
  double rho = 0.0;
  std::vector<cplx> centers;
  std::vector<double> link_ratios;
  std::vector<RungeMember> members;

  int degree(int k) const { return members.at(k).degree() + shift; }

  // Coefficients of p_k (leading `shift` entries are zero), rounded to double.
  std::vector<cplx> coefficients(int k) const {
    const auto& m = members.at(k);
    std::vector<cplx> c(shift, cplx(0.0));
    for (const auto& a : m.exact) c.push_back(a.to_double());
    return c;
  }

  std::vector<double> log_abs_coefficients(int k) const {
    std::vector<double> c(shift, -std::numeric_limits<double>::infinity());
    const auto& m = members.at(k);
    c.insert(c.end(), m.log_abs.begin(), m.log_abs.end());
    return c;
  }
};

namespace detail {

struct PushStats {
  double dropped = 0.0;   // accumulated bound of discarded terms on U
  double log_max_term = -std::numeric_limits<double>::infinity();
};

// alpha[p] multiplies (z - from)^{-p}; returns the coefficients for (z - to)^{-p}.
inline std::vector<mp::Complex> push_pole(const std::vector<mp::Complex>& alpha, cplx from, cplx to,
                                          double s_from, double s_to, double tol_term,
                                          mpfr_prec_t bits, PushStats& st) {
  mp::Scratch sc(bits);
  mp::Complex d(bits), tmp(bits);
  {
    mp::Complex f(from, bits), t(to, bits);
    d.set(f);
    t.negate();
    d.add(t);
  }
  const double ld = std::log(std::abs(from - to));
  const double ls_to = std::log(s_to), ls_from = std::log(s_from);
  const double q = std::abs(from - to) / s_to;
  const double ltol = std::log(tol_term);
  std::vector<mp::Complex> out;
  out.reserve(alpha.size() * 2);
  auto slot = [&](std::size_t i) -> mp::Complex& {
    while (out.size() <= i) out.emplace_back(bits);
    return out[i];
  };
  for (std::size_t p = 1; p < alpha.size(); ++p) {
    if (alpha[p].is_zero()) continue;
    const double la = alpha[p].log_abs();
    if (la - p * ls_from < ltol) {
      st.dropped += std::exp(la - p * ls_from);
      continue;
    }
    tmp.set(alpha[p]);
    double lt = la;
    for (std::size_t m = 0;; ++m) {
      slot(p + m).add(tmp);
      st.log_max_term = std::max(st.log_max_term, lt - (p + m) * ls_to);
      const double r = static_cast<double>(p + m) / (m + 1) * q;
      const double lnext = lt + std::log(static_cast<double>(p + m) / (m + 1)) + ld;
      const double bound_next = lnext - (p + m + 1) * ls_to;
      if (r < 1.0 && bound_next - std::log1p(-r) < ltol) {
        st.dropped += std::exp(bound_next - std::log1p(-r));
        break;
      }
      tmp.mul(d, sc.a, sc.b);
      tmp.mul_ratio(p + m, m + 1);
      lt = lnext;
    }
  }
  return out;
}

// Taylor coefficients at 0 of sum alpha[p] (z - c)^{-p}, accurate on |z| <= 1.
inline std::vector<mp::Complex> taylor_at_zero(const std::vector<mp::Complex>& alpha, cplx c,
                                               double tol_term, int max_degree, mpfr_prec_t bits,
                                               PushStats& st) {
  mp::Scratch sc(bits);
  mp::Complex inv_neg_c(bits), inv_c(bits), pw(bits), u(bits);
  {
    mp::Complex mc(-c, bits);
    inv_neg_c.set_reciprocal(mc, sc.a, sc.b);
    inv_c.set(inv_neg_c);
    inv_c.negate();
  }
  const double lc = std::log(std::abs(c));
  const double ltol = std::log(tol_term);
  // Degree needed: per-p tail of the binomial series on the unit circle.
  std::vector<double> la(alpha.size(), -std::numeric_limits<double>::infinity());
  int degree = 0;
  for (std::size_t p = 1; p < alpha.size(); ++p) {
    if (alpha[p].is_zero()) continue;
    la[p] = alpha[p].log_abs();
    double lt = la[p] - p * lc;
    for (int m = 0;; ++m) {
      const double r = static_cast<double>(p + m) / (m + 1) / std::abs(c);
      const double lnext = lt + std::log(static_cast<double>(p + m) / (m + 1)) - lc;
      if (r < 1.0 && lnext - std::log1p(-r) < ltol) {
        degree = std::max(degree, m);
        st.dropped += std::exp(lnext - std::log1p(-r));
        break;
      }
      lt = lnext;
      if (m > max_degree) throw NumericalError("Runge member exceeds the degree cap");
    }
  }
  std::vector<mp::Complex> a;
  a.reserve(degree + 1);
  for (int m = 0; m <= degree; ++m) a.emplace_back(bits);
  pw.set(cplx(1.0));
  for (std::size_t p = 1; p < alpha.size(); ++p) {
    pw.mul(inv_neg_c, sc.a, sc.b);
    if (alpha[p].is_zero()) continue;
    u.set(alpha[p]);
    u.mul(pw, sc.a, sc.b);
    for (int m = 0; m <= degree; ++m) {
      a[m].add(u);
      u.mul(inv_c, sc.a, sc.b);
      u.mul_ratio(p + m, m + 1);
    }
  }
  return a;
}

}  // namespace detail

// Chain of centers from z0 outward along its ray; each step is rho times the
// current clearance to U.
inline std::vector<cplx> pole_chain(cplx z0, const PlanarDomain& U, double rho, double stop_radius,
                                    int max_links) {
  std::vector<cplx> c{z0};
  const cplx dir = z0 / std::abs(z0);
  while (std::abs(c.back()) < stop_radius) {
    const double d = U.distance(c.back());
    if (!(d > 0.0)) throw GeometryError("pole chain touches U");
    c.push_back(c.back() + rho * d * dir);
    if (static_cast<int>(c.size()) > max_links + 1) throw NumericalError("pole chain too long; increase rho");
  }
  return c;
}

inline PolyFamily runge_family(cplx z0, int kmax, int N, const PlanarDomain& U, RungeOptions opt = {}) {
  if (z0 == cplx(0.0)) throw InputError("z0 must be nonzero");
  if (kmax < 0) throw InputError("kmax must be nonnegative");
  if (U.contains(z0) || !(U.distance(z0) > 0.0))
    throw GeometryError("z0 is adherent to U; the family would be bounded");
  PolyFamily fam;
  fam.z0 = z0;
  fam.shift = N + 1;
  fam.rho = opt.rho;
  fam.centers = pole_chain(z0, U, opt.rho, opt.stop_radius, opt.max_links);
  const int J = static_cast<int>(fam.centers.size()) - 1;
  for (int j = 0; j < J; ++j) {
    const double q = std::abs(fam.centers[j + 1] - fam.centers[j]) / U.distance(fam.centers[j + 1]);
    fam.link_ratios.push_back(q);
    if (q >= opt.max_ratio) {
      const double suggest = opt.rho * 0.8 * opt.max_ratio / q;
      throw NumericalError("pole chain step too aggressive (ratio " + std::to_string(q) +
                           "); try rho <= " + std::to_string(suggest));
    }
  }
  const int kcount = std::min(kmax, J);
  mpfr_prec_t bits = opt.bits;
  for (int k = 0; k <= kcount; ++k) {
    const int start = J - k;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 6) throw NumericalError("Runge family: precision escalation did not settle");
      RungeMember mem;
      mem.k = k;
      mem.pole = fam.centers[start];
      mem.bits = bits;
      detail::PushStats st;
      std::vector<mp::Complex> alpha;
      alpha.emplace_back(bits);
      alpha.emplace_back(cplx(1.0), bits);
      for (int j = start; j < J; ++j)
        alpha = detail::push_pole(alpha, fam.centers[j], fam.centers[j + 1], U.distance(fam.centers[j]),
                                  U.distance(fam.centers[j + 1]), opt.tol, bits, st);
      mem.pole_order = static_cast<int>(alpha.size()) - 1;
      mem.exact = detail::taylor_at_zero(alpha, fam.centers[J], opt.tol, opt.max_degree, bits, st);
      double lmax = st.log_max_term;
      for (const auto& a : mem.exact) {
        mem.log_abs.push_back(a.log_abs());
        lmax = std::max(lmax, mem.log_abs.back());
      }
      mem.error_bound = st.dropped;
      // Cancellation headroom: magnitudes of order e^lmax must still resolve tol.
      const double need = (lmax - std::log(opt.tol)) / std::log(2.0) + 32.0;
      if (need > static_cast<double>(bits)) {
        bits = static_cast<mpfr_prec_t>(std::ceil(need / 64.0) * 64.0) + 64;
        continue;
      }
      fam.members.push_back(std::move(mem));
      break;
    }
  }
  return fam;
}

// Value of p_k(z), using extended precision when the coefficients cancel.
class RungeEvaluator {
 public:
  RungeEvaluator(const PolyFamily& fam, int k) : fam_(fam), k_(k) {
    const auto& m = fam.members.at(k);
    double lsum = -std::numeric_limits<double>::infinity();
    for (double l : m.log_abs) lsum = std::max(lsum, l);
    lsum += std::log(static_cast<double>(m.log_abs.size()) + 1.0);
    use_double_ = lsum < std::log(1e4);
    if (use_double_) {
      for (const auto& a : m.exact) dcoef_.push_back(a.to_double());
    } else {
      bits_ = static_cast<mpfr_prec_t>(lsum / std::log(2.0)) + 96;
      bits_ = std::min(bits_, m.bits);
      for (const auto& a : m.exact) {
        mcoef_.emplace_back(bits_);
        mpfr_set(mcoef_.back().re(), a.re(), MPFR_RNDN);
        mpfr_set(mcoef_.back().im(), a.im(), MPFR_RNDN);
      }
    }
  }

  // p~_k(z)
  cplx tilde(cplx z) const {
    if (use_double_) return horner(dcoef_, z);
    mp::Scratch sc(bits_);
    mp::Complex s(bits_), zz(z, bits_);
    for (auto it = mcoef_.rbegin(); it != mcoef_.rend(); ++it) s.mul_add(zz, *it, sc.a, sc.b);
    return s.to_double();
  }

  cplx operator()(cplx z) const { return std::pow(z, fam_.shift) * tilde(z); }

  bool extended() const { return !use_double_; }

 private:
  const PolyFamily& fam_;
  int k_;
  bool use_double_ = true;
  mpfr_prec_t bits_ = 53;
  std::vector<cplx> dcoef_;
  std::vector<mp::Complex> mcoef_;
};

inline double member_norm_Linf(const PolyFamily& fam, int k, const PlanarDomain& dom) {
  RungeEvaluator ev(fam, k);
  double m = 0.0;
  for (cplx z : dom.boundary) m = std::max(m, std::abs(ev(z)));
  for (cplx z : dom.area_points) m = std::max(m, std::abs(ev(z)));
  return m;
}

inline double member_norm_L2_disk(const PolyFamily& fam, int k, double T) {
  return std::exp(poly_norm_L2_disk_log(fam.log_abs_coefficients(k), T));
}

struct RatioRow {
  int k = 0;
  int degree = 0;
  double l2_disk = 0.0;
  double linf_U = 0.0;
  double ratio = 0.0;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  bool exceeded_tenfold = false;
  int first_tenfold = -1;
};

inline RatioReport ratio_divergence_test(const PolyFamily& fam, double T, const PlanarDomain& U) {
  RatioReport rep;
  for (std::size_t k = 0; k < fam.members.size(); ++k) {
    RatioRow r;
    r.k = static_cast<int>(k);
    r.degree = fam.degree(static_cast<int>(k));
    r.l2_disk = member_norm_L2_disk(fam, r.k, T);
    r.linf_U = member_norm_Linf(fam, r.k, U);
    r.ratio = r.l2_disk / r.linf_U;
    rep.rows.push_back(r);
    if (!rep.exceeded_tenfold && r.ratio > 10.0 * rep.rows.front().ratio) {
      rep.exceeded_tenfold = true;
      rep.first_tenfold = r.k;
    }
  }
  return rep;
}

// Pole for the negative-result demonstration: direction y0, modulus halfway (in
// log scale) between the disk radius e^{-T} and the inner radius of U, so it
// sits in D(0, e^{-T}) and away from U whenever T < (1 - 2 eps) a'^2 / 2.
inline cplx separating_pole(double T, double y0, double a_prime, double eps) {
  const double s = (1.0 - 2.0 * eps) * a_prime * a_prime / 2.0;
  if (!(T < s)) throw InputError("T must be below (1 - 2 eps) a'^2 / 2 for a pole between the disk and U");
  return std::polar(std::exp(-(T + s) / 2.0), y0);
}

// sup over U of |z^{N+1} / (z - z0)|, the limit the family should respect.
inline double runge_target_sup(cplx z0, int N, const PlanarDomain& U) {
  double m = 0.0;
  auto f = [&](cplx z) { return std::abs(std::pow(z, N + 1) / (z - z0)); };
  for (cplx z : U.boundary) m = std::max(m, f(z));
  for (cplx z : U.area_points) m = std::max(m, f(z));
  return m;
}

struct MultiplierReport {
  double constant = 0.0;             // largest ratio observed
  std::vector<double> running_max;   // after each trial
  bool stabilized = false;           // no growth above 5% over the last half
};

// Random trials of |sum a_n w_n(x) e^{-rho_n tau} z^{n-1}|_{K} / |sum a_n z^{n-1}|_{V}
// with n in (N, N + 60], x in (-1, 1), tau in [0, T].
inline MultiplierReport multiplier_inequality_check(const SpectralTable& table, double eps, double T, int N,
                                                    const PlanarDomain& K, const PlanarDomain& V, int trials,
                                                    unsigned long long seed = 1) {
  constexpr int width = 60;
  if (!V.star_shaped()) throw GeometryError("V must be star-shaped with respect to 0");
  if (!table.covers(N + 1) || !table.covers(N + width))
    throw InputError("spectral table must cover modes N+1 .. N+60");
  if (trials < 1) throw InputError("trials must be positive");
  auto samples = [](const PlanarDomain& d) {
    std::vector<cplx> z = d.boundary;
    z.insert(z.end(), d.area_points.begin(), d.area_points.end());
    return z;
  };
  const std::vector<cplx> zk = samples(K), zv = samples(V);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), sym(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  auto sup = [](const std::vector<cplx>& c, const std::vector<cplx>& pts) {
    double m = 0.0;
    for (cplx z : pts) m = std::max(m, std::abs(horner(c, z)));
    return m;
  };
  MultiplierReport rep;
  std::vector<cplx> a(N + width, 0.0), b(N + width, 0.0);
  for (int t = 0; t < trials; ++t) {
    const double x = sym(rng) * 0.999;
    const double tau = unit(rng) * T;
    // A random number of active modes, so sparse and dense draws both occur.
    const int active = 1 + static_cast<int>(unit(rng) * width);
    std::fill(a.begin(), a.end(), cplx(0.0));
    for (int j = 0; j < active; ++j) {
      const int n = N + 1 + static_cast<int>(unit(rng) * width);
      a[n - 1] += cplx(gauss(rng), gauss(rng));
    }
    for (int n = N + 1; n <= N + width; ++n) {
      const auto& e = table.at(n);
      const double w = std::exp((1.0 - eps) * n * x * x / 2.0) * eigen_value_at(e.pair, x);
      b[n - 1] = a[n - 1] * w * std::exp(-e.rho * tau);
    }
    const double rhs = sup(a, zv);
    const double r = rhs > 0.0 ? sup(b, zk) / rhs : 0.0;
    rep.constant = std::max(rep.constant, r);
    rep.running_max.push_back(rep.constant);
  }
  const double mid = rep.running_max[rep.running_max.size() / 2];
  rep.stabilized = rep.constant <= 1.05 * mid;
  return rep;
}

}  // namespace grushin
