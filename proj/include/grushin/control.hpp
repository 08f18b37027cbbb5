#pragma once

// Observability Gramians on control regions, the truncated observability
// constant C_N(T), minimal-time scans and penalized HUM controls.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "grushin/dst.hpp"
#include "grushin/errors.hpp"
#include "grushin/geometry.hpp"
#include "grushin/grid.hpp"
#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"

namespace grushin {

// ---------------------------------------------------------------------------
// Region rows as unions of x-intervals.

using Interval = std::pair<double, double>;

namespace detail {

// Edge between an inside node xi and an outside node xo, by bisection on the
// predicate; explicit masks use the cell midpoint.
inline double refine_edge(const Region& r, double xi, double xo, double y) {
  if (r.kind == Region::Kind::explicit_mask) return 0.5 * (xi + xo);
  double a = xi, b = xo;
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (a + b);
    (r.contains(m, y) ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// The part of row j inside the region; runs of masked nodes with edges located
// between nodes, or at -1 / 1.
inline std::vector<Interval> row_intervals(const Region& r, int j) {
  const Grid2D& g = r.grid;
  const double y = g.y(j);
  std::vector<Interval> out;
  int i = 0;
  while (i < g.x.count) {
    if (!r.in_mask(i, j)) {
      ++i;
      continue;
    }
    const int start = i;
    while (i < g.x.count && r.in_mask(i, j)) ++i;
    const int stop = i - 1;
    const double lo = start == 0 ? -1.0 : detail::refine_edge(r, g.x.node(start), g.x.node(start - 1), y);
    const double hi = stop == g.x.count - 1 ? 1.0 : detail::refine_edge(r, g.x.node(stop), g.x.node(stop + 1), y);
    out.push_back({lo, hi});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gram matrices of the ground-state ansatz sum a_n v_n(x) e^{-lambda_n t} sin(ny).

enum class TimeModel { continuous, crank_nicolson };

struct GramPair {
  int N = 0;
  double T = 0.0;
  TimeModel model = TimeModel::continuous;
  double dt = 0.0;
  Eigen::VectorXd M;  // diagonal of M_T
  Eigen::MatrixXd G;
};

namespace detail {

// Cumulative trapezoid of v_n v_m on a common fine grid.
class PairIntegrals {
 public:
  PairIntegrals(const SpectralTable& t, int N) : N_(N) {
    for (int n = 1; n <= N; ++n)
      if (!t.covers(n)) throw InputError("spectral table does not cover mode " + std::to_string(n));
    g_ = t.pair(1).grid;
    for (int n = 2; n <= N; ++n)
      if (t.pair(n).grid.h < g_.h) g_ = t.pair(n).grid;
    const int c = g_.count;
    std::vector<std::vector<double>> v(N + 1, std::vector<double>(c + 2, 0.0));
    for (int n = 1; n <= N; ++n) {
      const EigenPair& p = t.pair(n);
      for (int i = 0; i < c; ++i)
        v[n][i + 1] = (p.grid.count == c) ? p.v[i] : eigen_value_at(p, g_.node(i));
    }
    prod_.resize(index(N, N) + 1);
    cum_.resize(index(N, N) + 1);
    for (int n = 1; n <= N; ++n)
      for (int m = n; m <= N; ++m) {
        auto& pr = prod_[index(n, m)];
        auto& cu = cum_[index(n, m)];
        pr.resize(c + 2);
        cu.resize(c + 2);
        for (int k = 0; k < c + 2; ++k) pr[k] = v[n][k] * v[m][k];
        cu[0] = 0.0;
        for (int k = 1; k < c + 2; ++k) cu[k] = cu[k - 1] + 0.5 * g_.h * (pr[k - 1] + pr[k]);
      }
  }

  double integral(int n, int m, double a, double b) const {
    if (n > m) std::swap(n, m);
    const std::size_t id = index(n, m);
    return at(id, b) - at(id, a);
  }

 private:
  std::size_t index(int n, int m) const {
    return static_cast<std::size_t>(n - 1) * N_ + (m - 1);
  }
  double at(std::size_t id, double x) const {
    const auto& pr = prod_[id];
    const auto& cu = cum_[id];
    const int last = static_cast<int>(cu.size()) - 1;
    const double s = std::clamp((x + 1.0) / g_.h, 0.0, static_cast<double>(last));
    const int k = std::min(static_cast<int>(s), last - 1);
    const double t = s - k;
    const double pk = pr[k], px = pr[k] + t * (pr[k + 1] - pr[k]);
    return cu[k] + 0.5 * t * g_.h * (pk + px);
  }

  int N_;
  Grid1D g_;
  std::vector<std::vector<double>> prod_, cum_;
};

}  // namespace detail

// S[n,m] = int_omega v_n v_m sin(ny) sin(my): exact row intervals in x, the
// grid rows in y.
inline Eigen::MatrixXd spatial_gram(const Region& r, int N, const SpectralTable& t) {
  if (N < 1) throw InputError("N must be positive");
  if (r.mask.size() != r.grid.size()) throw InputError("region is not rasterized");
  if (N > r.grid.ny) throw InputError("more modes than y nodes in the region grid");
  const detail::PairIntegrals pi(t, N);
  const Grid2D& g = r.grid;
  const double hy = g.hy();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> s(N + 1);
  for (int j = 0; j < g.ny; ++j) {
    const auto iv = row_intervals(r, j);
    if (iv.empty()) continue;
    for (int n = 1; n <= N; ++n) s[n] = std::sin(n * g.y(j));
    for (int n = 1; n <= N; ++n)
      for (int m = n; m <= N; ++m) {
        const double w = hy * s[n] * s[m];
        if (w == 0.0) continue;
        double x = 0.0;
        for (const auto& [a, b] : iv) x += pi.integral(n, m, a, b);
        S(n - 1, m - 1) += w * x;
      }
  }
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < n; ++m) S(n, m) = S(m, n);
  return S;
}

// CN amplification (1 - a)/(1 + a) and gain dt/(1 + a), a = lambda dt / 2.
inline double cn_ratio(double lambda, double dt) {
  const double a = 0.5 * lambda * dt;
  return (1.0 - a) / (1.0 + a);
}

inline double time_factor(double ln, double lm, double T, TimeModel model, double dt) {
  if (model == TimeModel::continuous) {
    const double s = ln + lm;
    return -std::expm1(-s * T) / s;
  }
  const int K = step_count(T, dt);
  const double h = T / K;
  const double rn = cn_ratio(ln, h), rm = cn_ratio(lm, h);
  const double q = rn * rm;
  const double geo = std::abs(1.0 - q) < 1e-14 ? K : (1.0 - std::pow(q, K)) / (1.0 - q);
  return h / ((1.0 + 0.5 * ln * h) * (1.0 + 0.5 * lm * h)) * geo;
}

inline GramPair gram_from_spatial(const Eigen::MatrixXd& S, double T, const SpectralTable& t,
                                  TimeModel model = TimeModel::continuous, double dt = 1e-3) {
  if (!(T > 0.0)) throw InputError("T must be positive");
  const int N = static_cast<int>(S.rows());
  GramPair gp;
  gp.N = N;
  gp.T = T;
  gp.model = model;
  gp.dt = dt;
  gp.M.resize(N);
  gp.G.resize(N, N);
  for (int n = 1; n <= N; ++n) {
    const double l = t.lambda(n);
    const double decay =
        model == TimeModel::continuous ? std::exp(-2.0 * l * T) : std::pow(cn_ratio(l, T / step_count(T, dt)), 2 * step_count(T, dt));
    gp.M(n - 1) = std::numbers::pi / 2.0 * t.at(n).normsq * decay;
    for (int m = 1; m <= N; ++m) gp.G(n - 1, m - 1) = S(n - 1, m - 1) * time_factor(l, t.lambda(m), T, model, dt);
  }
  return gp;
}

inline GramPair assemble_gram(const Region& r, double T, int N, const SpectralTable& t,
                              TimeModel model = TimeModel::continuous, double dt = 1e-3) {
  return gram_from_spatial(spatial_gram(r, N, t), T, t, model, dt);
}

// Leading n x n block.
inline GramPair truncate(const GramPair& g, int n) {
  if (n < 1 || n > g.N) throw InputError("truncation outside 1..N");
  GramPair out = g;
  out.N = n;
  out.M = g.M.head(n);
  out.G = g.G.topLeftCorner(n, n);
  return out;
}

struct ObsCost {
  double C = std::numeric_limits<double>::infinity();
  bool observable = false;
  double min_eig = 0.0;  // smallest eigenvalue of G
  double floor = 0.0;    // 1e-14 trace(G)
};

// Largest generalized eigenvalue of (M_T, G) after whitening G.
inline ObsCost obs_cost(const GramPair& g) {
  ObsCost r;
  const double tr = g.G.trace();
  r.floor = 1e-14 * tr;
  if (!(tr > 0.0)) return r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.G);
  if (es.info() != Eigen::Success) throw NumericalError("Gram eigen-decomposition failed");
  r.min_eig = es.eigenvalues()(0);
  if (r.min_eig <= r.floor) return r;
  const Eigen::MatrixXd W = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd B = W.transpose() * g.M.asDiagonal() * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(B, Eigen::EigenvaluesOnly);
  r.C = eb.eigenvalues()(B.rows() - 1);
  r.observable = true;
  return r;
}

// ---------------------------------------------------------------------------
// Minimal-time scan.

enum class Trend { growing, saturating, inconclusive, unobservable };

inline const char* to_string(Trend t) {
  switch (t) {
    case Trend::growing: return "growing";
    case Trend::saturating: return "saturating";
    case Trend::unobservable: return "unobservable";
    default: return "inconclusive";
  }
}

struct CostSample {
  double T = 0.0;
  int N = 0;
  double C = 0.0;
  bool observable = false;
};

struct CostCurve {
  std::vector<CostSample> samples;
  std::vector<std::pair<double, Trend>> trend;  // per T
  std::vector<double> ratio;                    // C_{N_last} / C_{N_first} per T
  double transition_lo = std::numeric_limits<double>::quiet_NaN();  // last T classified growing
  double transition_hi = std::numeric_limits<double>::quiet_NaN();  // first saturating T after it
  bool ordered = true;  // no saturating T below a growing one

  bool brackets(double t) const { return transition_lo < t && t < transition_hi; }
};

inline Trend classify(double ratio, bool observable, double grow = 10.0, double saturate = 2.0) {
  if (!observable) return Trend::unobservable;
  if (ratio > grow) return Trend::growing;
  if (ratio < saturate) return Trend::saturating;
  return Trend::inconclusive;
}

inline CostCurve min_time_scan(const Region& r, const std::vector<double>& T_grid, std::vector<int> N_list,
                               const SpectralTable& t) {
  if (T_grid.empty() || N_list.empty()) throw InputError("empty scan grid");
  for (std::size_t k = 1; k < T_grid.size(); ++k)
    if (!(T_grid[k] > T_grid[k - 1])) throw InputError("T grid must be ascending");
  std::sort(N_list.begin(), N_list.end());
  const Eigen::MatrixXd S = spatial_gram(r, N_list.back(), t);
  CostCurve cc;
  for (double T : T_grid) {
    const GramPair full = gram_from_spatial(S, T, t);
    std::vector<ObsCost> cs;
    for (int N : N_list) {
      cs.push_back(obs_cost(truncate(full, N)));
      cc.samples.push_back({T, N, cs.back().C, cs.back().observable});
    }
    const bool obs = cs.front().observable && cs.back().observable;
    const double ratio = obs ? cs.back().C / cs.front().C : std::numeric_limits<double>::infinity();
    cc.ratio.push_back(ratio);
    cc.trend.push_back({T, classify(ratio, obs)});
  }
  double lo = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [T, tr] : cc.trend)
    if (tr == Trend::growing || tr == Trend::unobservable) lo = T;
  cc.transition_lo = lo;
  for (const auto& [T, tr] : cc.trend) {
    if (tr != Trend::saturating) continue;
    if (!std::isnan(lo) && T < lo) {
      cc.ordered = false;
      continue;
    }
    cc.transition_hi = T;
    break;
  }
  if (std::isnan(cc.transition_lo)) cc.transition_lo = 0.0;
  return cc;
}

// ---------------------------------------------------------------------------
// Penalized HUM on the solver's discretization.
//
// The control is u^k = 1_omega w^k with w^k = sum_l b_l r_l^{K-1-k}/(1+a_l) q_l,
// where q_l runs over the lowest L eigenvectors of each discrete modal
// operator. This is the adjoint-solution form of the optimal control, so
// (G + reg I) b = -Q^T R^K f0 with G the Gram of these adjoint solutions.

struct HumOptions {
  double reg = 1e-14;
  int basis_per_mode = 0;  // 0: all x-eigenvectors when the region does not depend on y, else 32
  double dt = 1e-3;
};

struct HumBasis {
  int modes = 0;
  int L = 0;
  int steps = 0;
  double h = 0.0;  // time step
  Grid2D grid;
  bool y_independent = false;
  std::vector<double> x_mask;  // used when y_independent
  std::vector<std::uint8_t> mask;
  std::vector<Eigen::MatrixXd> Q;   // per mode: count x L, orthonormal in the modal L2 product
  std::vector<Eigen::VectorXd> mu;  // per mode: L eigenvalues
  // Gram: one L x L block per mode when the region does not depend on y
  // (modes decouple), otherwise a single dense block over all modes.
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::VectorXd b;  // stacked mode-major coefficients
  Eigen::VectorXd c;  // Q^T R^K f0

  int dim() const { return modes * L; }
  double gain(int n, int l, int k) const {
    const double a = 0.5 * mu[n - 1](l) * h;
    return std::pow((1.0 - a) / (1.0 + a), steps - 1 - k) / (1.0 + a);
  }
  Eigen::VectorXd apply_gram(const Eigen::VectorXd& v) const {
    if (!y_independent) return blocks[0] * v;
    Eigen::VectorXd out(v.size());
    for (int n = 0; n < modes; ++n) out.segment(n * L, L) = blocks[n] * v.segment(n * L, L);
    return out;
  }
  double gram(int p, int q) const {
    if (!y_independent) return blocks[0](p, q);
    if (p / L != q / L) return 0.0;
    return blocks[p / L](p % L, q % L);
  }
};

struct HumResult {
  SourceField source;
  std::shared_ptr<HumBasis> basis;
  ModalState terminal;
  double initial_norm = 0.0;
  double terminal_norm = 0.0;
  double control_norm = 0.0;
  double predicted_terminal = 0.0;  // ||c + G b|| within the basis
  double gram_condition = 0.0;

  double relative_residual() const { return initial_norm > 0.0 ? terminal_norm / initial_norm : terminal_norm; }
};

namespace detail {

inline bool mask_y_independent(const Region& r) {
  const Grid2D& g = r.grid;
  for (int i = 0; i < g.x.count; ++i)
    for (int j = 1; j < g.ny; ++j)
      if (r.in_mask(i, j) != r.in_mask(i, 0)) return false;
  return true;
}

// s = 1_omega w for modal states on the region grid.
inline void apply_mask(const HumBasis& hb, const SineTransform& dst, const ModalState& w, ModalState& s) {
  const int c = hb.grid.x.count;
  if (hb.y_independent) {
    for (int n = 1; n <= w.modes; ++n)
      for (int i = 0; i < c; ++i) s.at(n, i) = hb.x_mask[i] * w.at(n, i);
    return;
  }
  const int M = hb.grid.ny;
  std::vector<double> coef(w.modes), vals(M), out(w.modes);
  for (int i = 0; i < c; ++i) {
    for (int n = 1; n <= w.modes; ++n) coef[n - 1] = w.at(n, i);
    dst.synthesize(coef.data(), w.modes, vals.data());
    for (int j = 0; j < M; ++j)
      if (!hb.mask[hb.grid.index(i, j)]) vals[j] = 0.0;
    dst.analyze(vals.data(), out.data(), w.modes);
    for (int n = 1; n <= w.modes; ++n) s.at(n, i) = out[n - 1];
  }
}

inline void adjoint_field(const HumBasis& hb, int k, ModalState& w) {
  Eigen::VectorXd coef(hb.L);
  for (int n = 1; n <= hb.modes; ++n) {
    for (int l = 0; l < hb.L; ++l) coef(l) = hb.gain(n, l, k) * hb.b((n - 1) * hb.L + l);
    Eigen::Map<Eigen::VectorXd>(w.mode(n), hb.grid.x.count) = hb.Q[n - 1] * coef;
  }
}

inline double cn_geometric(double rr, int steps) {
  return std::abs(1.0 - rr) < 1e-15 ? steps : (1.0 - std::pow(rr, steps)) / (1.0 - rr);
}

}  // namespace detail

// Region must be rasterized on a grid whose x-grid equals f0.grid.
inline HumResult hum_control(const Region& region, double T, const ModalState& f0, int N,
                             const HumOptions& opt = {}) {
  if (!(opt.reg > 0.0)) throw InputError("reg must be positive");
  if (N != f0.modes) throw InputError("N must equal the number of modes of f0");
  const Grid2D& g = region.grid;
  if (g.x.count != f0.grid.count || g.x.h != f0.grid.h) throw InputError("region grid and state grid differ in x");
  if (N > g.ny) throw InputError("more modes than y nodes");
  const int count = g.x.count;

  auto hb = std::make_shared<HumBasis>();
  hb->modes = N;
  hb->grid = g;
  hb->mask = region.mask;
  hb->steps = step_count(T, opt.dt);
  hb->h = T / hb->steps;
  hb->y_independent = detail::mask_y_independent(region);
  int L = opt.basis_per_mode;
  if (L <= 0) L = hb->y_independent ? count : 32;
  L = std::min(L, count);
  hb->L = L;
  if (hb->y_independent) {
    hb->x_mask.resize(count);
    for (int i = 0; i < count; ++i) hb->x_mask[i] = region.in_mask(i, 0) ? 1.0 : 0.0;
  }
  const double hx = g.x.h, hy = g.hy();
  const double wnorm = std::sqrt(std::numbers::pi / 2.0 * hx);
  for (int n = 1; n <= N; ++n) {
    const SymTridiag a = modal_operator(n, g.x);
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(a.d.data(), count);
    Eigen::VectorXd e = Eigen::VectorXd::Constant(count - 1, a.e);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("modal eigen-decomposition failed");
    hb->mu.push_back(es.eigenvalues().head(L));
    hb->Q.push_back(es.eigenvectors().leftCols(L) / wnorm);
  }
  const int D = N * L;
  Eigen::VectorXd r(D), gain(D);
  for (int n = 1; n <= N; ++n)
    for (int l = 0; l < L; ++l) {
      const int p = (n - 1) * L + l;
      const double a = 0.5 * hb->mu[n - 1](l) * hb->h;
      r(p) = (1.0 - a) / (1.0 + a);
      gain(p) = 1.0 / (1.0 + a);
    }
  // <q_p, 1_omega q_l> times the CN time factor, block by block.
  auto time_block = [&](int n, int m, const Eigen::MatrixXd& blk) {
    Eigen::MatrixXd out(L, L);
    for (int p = 0; p < L; ++p)
      for (int q = 0; q < L; ++q) {
        const int P = (n - 1) * L + p, Q = (m - 1) * L + q;
        out(p, q) = blk(p, q) * hb->h * gain(P) * gain(Q) * detail::cn_geometric(r(P) * r(Q), hb->steps);
      }
    return out;
  };
  Eigen::VectorXd wx(count);
  if (hb->y_independent) {
    for (int n = 1; n <= N; ++n) {
      double s = 0.0;
      for (int j = 0; j < g.ny; ++j) s += std::sin(n * g.y(j)) * std::sin(n * g.y(j));
      for (int i = 0; i < count; ++i) wx(i) = hx * hy * s * hb->x_mask[i];
      const Eigen::MatrixXd blk = hb->Q[n - 1].transpose() * wx.asDiagonal() * hb->Q[n - 1];
      hb->blocks.push_back(time_block(n, n, blk));
    }
  } else {
    hb->blocks.assign(1, Eigen::MatrixXd::Zero(D, D));
    for (int n = 1; n <= N; ++n)
      for (int m = n; m <= N; ++m) {
        for (int i = 0; i < count; ++i) {
          double s = 0.0;
          for (int j = 0; j < g.ny; ++j)
            if (region.in_mask(i, j)) s += std::sin(n * g.y(j)) * std::sin(m * g.y(j));
          wx(i) = hx * hy * s;
        }
        if (wx.isZero(0.0)) continue;
        const Eigen::MatrixXd blk = time_block(n, m, hb->Q[n - 1].transpose() * wx.asDiagonal() * hb->Q[m - 1]);
        hb->blocks[0].block((n - 1) * L, (m - 1) * L, L, L) = blk;
        if (m != n) hb->blocks[0].block((m - 1) * L, (n - 1) * L, L, L) = blk.transpose();
      }
  }
  hb->c.resize(D);
  for (int n = 1; n <= N; ++n) {
    const Eigen::Map<const Eigen::VectorXd> fn(f0.mode(n), count);
    const Eigen::VectorXd proj = (std::numbers::pi / 2.0 * hx) * (hb->Q[n - 1].transpose() * fn);
    for (int l = 0; l < L; ++l) {
      const int p = (n - 1) * L + l;
      hb->c(p) = std::pow(r(p), hb->steps) * proj(l);
    }
  }
  hb->b.resize(D);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t k = 0; k < hb->blocks.size(); ++k) {
    const Eigen::MatrixXd& Gk = hb->blocks[k];
    const int off = hb->y_independent ? static_cast<int>(k) * L : 0;
    const int len = static_cast<int>(Gk.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gk);
    if (es.info() != Eigen::Success) throw NumericalError("HUM Gram eigen-decomposition failed");
    lo = std::min(lo, es.eigenvalues()(0));
    hi = std::max(hi, es.eigenvalues()(len - 1));
    // (G + reg I)^{-1} through the eigenbasis; G is PSD up to rounding.
    const Eigen::VectorXd lam = es.eigenvalues().array().max(0.0) + opt.reg;
    hb->b.segment(off, len) =
        -es.eigenvectors() * (es.eigenvectors().transpose() * hb->c.segment(off, len)).cwiseQuotient(lam);
  }

  HumResult res;
  res.basis = hb;
  res.gram_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd Gb = hb->apply_gram(hb->b);
  res.control_norm = std::sqrt(std::max(0.0, hb->b.dot(Gb)));
  res.predicted_terminal = (hb->c + Gb).norm();
  auto dst = std::make_shared<SineTransform>(g.ny);
  res.source.step_source = [hb, dst](int k, double, double, ModalState& out) {
    ModalState w(out.modes, out.grid);
    detail::adjoint_field(*hb, k, w);
    detail::apply_mask(*hb, *dst, w, out);
  };
  if (hb->b.isZero(0.0)) res.source = SourceField::none();
  res.initial_norm = l2_norm(f0);
  res.terminal = evolve_observed(f0, T, res.source, opt.dt, nullptr);
  res.terminal_norm = l2_norm(res.terminal);
  return res;
}

// Objective of the penalized problem in basis coordinates.
inline double hum_objective(const HumBasis& hb, const Eigen::VectorXd& b, double reg) {
  const Eigen::VectorXd Gb = hb.apply_gram(b);
  return 0.5 * b.dot(Gb) + 0.5 / reg * (hb.c + Gb).squaredNorm();
}

// Gram pair of the ground-state basis functions under the CN time model, as
// seen by the HUM discretization (M_n = r_n^{2K}, unit norms).
inline GramPair hum_ground_gram(const HumBasis& hb, double T) {
  GramPair gp;
  gp.N = hb.modes;
  gp.T = T;
  gp.model = TimeModel::crank_nicolson;
  gp.dt = hb.h;
  gp.M.resize(hb.modes);
  gp.G.resize(hb.modes, hb.modes);
  for (int n = 1; n <= hb.modes; ++n) {
    const double a = 0.5 * hb.mu[n - 1](0) * hb.h;
    gp.M(n - 1) = std::pow((1.0 - a) / (1.0 + a), 2 * hb.steps);
    for (int m = 1; m <= hb.modes; ++m) gp.G(n - 1, m - 1) = hb.gram((n - 1) * hb.L, (m - 1) * hb.L);
  }
  return gp;
}

}  // namespace grushin
