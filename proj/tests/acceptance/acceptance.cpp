// Acceptance run: one PASS/FAIL line per criterion. An optional list of
// criterion numbers restricts the run.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grushin/complexplane.hpp"
#include "grushin/control.hpp"
#include "grushin/geometry.hpp"
#include "grushin/gluing.hpp"
#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"
#include "oracles/disk_quadrature.hpp"
#include "oracles/shooting.hpp"

using namespace grushin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<double> t_range(double a, double step, double b) {
  std::vector<double> v;
  for (int k = 0; a + k * step <= b + 1e-9; ++k) v.push_back(std::round((a + k * step) * 1e9) / 1e9);
  return v;
}

// Criterion 1
Outcome spectral_fidelity() {
  const int modes[] = {0, 1, 5, 10, 20, 40};
  std::vector<double> lam;
  const auto t0 = Clock::now();
  for (int n : modes) lam.push_back(compute_entry(n, 0.25, {}).lambda);
  const double runtime = seconds_since(t0);
  double worst = 0.0;
  std::ostringstream d;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double ref = oracle::ground_state_eigenvalue(modes[i], 40000);
    worst = std::max(worst, std::abs(lam[i] - ref));
  }
  const double e0 = std::abs(lam[0] - std::numbers::pi * std::numbers::pi / 4.0);
  Outcome o;
  o.pass = worst <= 1e-6 && e0 <= 1e-8 && runtime <= 10.0;
  o.detail = fmt("max |lambda - oracle| = %.2e, |lambda_0 - pi^2/4| = %.2e, runtime %.2f s", worst, e0, runtime);
  return o;
}

// Criterion 2
Outcome asymptotics() {
  const auto t = build_spectral_table(40);
  bool ok = true;
  double worst_rho = 0.0;
  int floored = 0;
  for (const auto& r : residual_symbol(t)) {
    if (r.n < 10 || r.n > 20) continue;
    if (r.flag == ResidualRow::Flag::below_floor) {
      ++floored;
      continue;
    }
    worst_rho = std::max(worst_rho, std::abs(r.rho) / r.bound);
    if (r.flag != ResidualRow::Flag::ok) ok = false;
  }
  double lo = 1e9, hi = 0.0;
  for (int n = 20; n <= 40; ++n) {
    const double s = t.at(n).normsq * std::sqrt(static_cast<double>(n));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  ok = ok && lo >= 1.68 && hi <= 1.87;
  return {ok, fmt("max |rho_n| e^{n/2} = %.3f over checked n (%d below floor), |v_n|^2 sqrt(n) in [%.4f, %.4f]",
                  worst_rho, floored, lo, hi)};
}

// grow_until / saturate_from < 0 skip the per-T classification checks.
Outcome scan(const Region& r, double Tstar, double grow_until, double saturate_from, double budget) {
  const auto t0 = Clock::now();
  const auto table = build_spectral_table(30);
  const CostCurve cc = min_time_scan(r, t_range(0.02, 0.02, 0.30), {10, 20, 30}, table);
  const double runtime = seconds_since(t0);
  bool ok = cc.brackets(Tstar) && cc.ordered && runtime <= budget;
  std::ostringstream bad;
  for (const auto& [T, tr] : cc.trend) {
    if (grow_until > 0.0 && T <= grow_until + 1e-9 && tr != Trend::growing) {
      ok = false;
      bad << " T=" << T << ':' << to_string(tr);
    }
    if (saturate_from > 0.0 && T >= saturate_from - 1e-9 && tr != Trend::saturating) {
      ok = false;
      bad << " T=" << T << ':' << to_string(tr);
    }
  }
  std::ostringstream d;
  d << fmt("transition in (%.2f, %.2f], target %.4f, runtime %.1f s", cc.transition_lo, cc.transition_hi, Tstar,
           runtime);
  d << ", ratios";
  for (std::size_t i = 0; i < cc.ratio.size(); ++i) d << fmt(" %.2f:%.3g", cc.trend[i].first, cc.ratio[i]);
  if (!bad.str().empty()) d << ", misclassified" << bad.str();
  return {ok, d.str()};
}

// Criterion 3
Outcome minimal_time() {
  const Grid2D g = make_grid2d(401, 63);
  return scan(make_two_strips(0.5, g), 0.125, 0.10, 0.16, 300.0);
}

// Criterion 4
Outcome corridor() {
  const Grid2D g = make_grid2d(401, 255);
  const auto [g1, g2] = wavy_corridor(0.4);
  const Region r = make_corridor(g1, g2, g);
  const double a = corridor_critical_a(g1, g2);
  Outcome o = scan(r, a * a / 2.0, -1.0, -1.0, 300.0);
  o.detail = fmt("a = %.4f, ", a) + o.detail;
  return o;
}

ModalState two_mode_data(int N, const Grid1D& g) {
  ModalState f(N, g);
  const EigenPair p1 = solve_mode_eigenpair(1, g), p3 = solve_mode_eigenpair(3, g);
  for (int i = 0; i < g.count; ++i) {
    f.at(1, i) = p1.v[i];
    f.at(3, i) = 0.5 * p3.v[i];
  }
  return f;
}

// Criterion 5
Outcome gluing_pipeline() {
  const auto t0 = Clock::now();
  const Path path = sketch_path(0.488);
  const double eps = 0.15, T = 0.15;
  const int N = 30;
  struct Level {
    int n;
    double dt;
  };
  const Level levels[] = {{201, 1e-3}, {403, 5e-4}};
  std::vector<GluedSolution> sols;
  for (const auto& lv : levels) {
    const Grid2D g = make_grid2d(lv.n, lv.n);
    HumOptions ho;
    ho.dt = lv.dt;
    const ModalState f0 = two_mode_data(N, g.x);
    sols.push_back(run_gluing(path, eps, T, f0, g, ho).glued);
  }
  const double runtime = seconds_since(t0);
  bool ok = runtime <= 600.0;
  std::ostringstream d;
  for (const auto& s : sols) {
    const double rel = s.terminal_norm / s.initial_norm;
    ok = ok && rel <= 1e-3 && s.support_violations == 0;
    d << fmt("|f(T)|/|f0| = %.2e, violations %zu, residual %.3e; ", rel, s.support_violations, s.pde_residual);
  }
  const double ratio = sols[0].pde_residual / sols[1].pde_residual;
  ok = ok && ratio >= 3.5;
  d << fmt("residual ratio %.2f, runtime %.1f s", ratio, runtime);
  return {ok, d.str()};
}

// Criterion 6
Outcome runge_pipeline() {
  const auto t0 = Clock::now();
  const double y0 = std::numbers::pi / 2.0, delta = 0.2, ap = 0.6, eps = 0.05, T = 0.1;
  const int N = 4, kmax = 12;
  const PlanarDomain U = build_U(y0, delta, ap, eps);
  const cplx z0 = separating_pole(T, y0, ap, eps);
  const PolyFamily fam = runge_family(z0, kmax, N, U);
  const RatioReport rep = ratio_divergence_test(fam, T, U);
  const double target = runge_target_sup(z0, N, U);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : rep.rows) {
    lo = std::min(lo, r.linf_U / target);
    hi = std::max(hi, r.linf_U / target);
  }
  const bool ok = rep.exceeded_tenfold && rep.first_tenfold <= kmax && hi <= 2.0;
  return {ok, fmt("first k with r_k > 10 r_0: %d, r_last/r_0 = %.3g, sup_U|p_k| / target in [%.4f, %.4f], "
                  "max degree %d, runtime %.1f s",
                  rep.first_tenfold, rep.rows.back().ratio / rep.rows.front().ratio, lo, hi, rep.rows.back().degree,
                  seconds_since(t0))};
}

// Criterion 7
Outcome closed_forms() {
  const auto t = build_spectral_table(1);
  const Grid2D g = make_grid2d(201, 15);
  const Region full = make_strip(-1.0, 1.0, g);
  const double l1 = t.lambda(1);
  double worst_c = 0.0;
  for (double T : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const ObsCost oc = obs_cost(assemble_gram(full, T, 1, t));
    const double ref = 2.0 * l1 * std::exp(-2.0 * l1 * T) / (1.0 - std::exp(-2.0 * l1 * T));
    worst_c = std::max(worst_c, std::abs(oc.C - ref) / ref);
  }
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_d = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = 1 + static_cast<int>(unit(rng) * 15);
    const double T = unit(rng);
    std::vector<cplx> c(deg + 1);
    for (auto& x : c) x = cplx(gauss(rng), gauss(rng));
    const double ref = oracle::disk_l2_quadrature(c, std::exp(-T));
    worst_d = std::max(worst_d, std::abs(poly_norm_L2_disk(c, T) - ref) / ref);
  }
  return {worst_c <= 1e-8 && worst_d <= 1e-6,
          fmt("single-mode cost rel. error %.2e, disk L2 rel. error %.2e over 20 polynomials", worst_c, worst_d)};
}

// Criterion 8
Outcome invariants() {
  constexpr int instances = 100;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  auto pick = [&](double a, double b) { return a + (b - a) * unit(rng); };
  int fails[5] = {0, 0, 0, 0, 0};

  // Dissipation of the free evolution, in L2 and in energy.
  const Grid1D g1 = make_grid(101);
  for (int k = 0; k < instances; ++k) {
    const int N = 1 + static_cast<int>(unit(rng) * 8);
    ModalState f(N, g1);
    for (double& v : f.data) v = gauss(rng);
    double prev = l2_norm(f), prev_e = energy_norm_sq(f);
    bool ok = true;
    evolve_observed(f, pick(0.01, 0.1), {}, pick(1e-4, 5e-3), [&](int s, const ModalState& st) {
      if (s == 0) return;
      const double n = l2_norm(st), e = energy_norm_sq(st);
      if (n > prev * (1.0 + 1e-13) || e > prev_e * (1.0 + 1e-12)) ok = false;
      prev = n;
      prev_e = e;
    });
    if (!ok) ++fails[0];
  }

  // Gram matrices: symmetric, positive semidefinite, nondecreasing in T.
  const auto table = build_spectral_table(8);
  const Grid2D g2 = make_grid2d(101, 33);
  auto random_region = [&]() {
    switch (static_cast<int>(unit(rng) * 3)) {
      case 0: {
        const double lo = pick(-1.0, 0.8);
        return make_strip(lo, pick(lo + 0.1, 1.0), g2);
      }
      case 1: return make_two_strips(pick(0.05, 0.9), g2);
      default: return make_rectangle_complement(pick(0.2, 0.9), pick(0.8, 2.3), pick(0.1, 0.6), g2);
    }
  };
  for (int k = 0; k < instances; ++k) {
    const Region r = random_region();
    const int N = 2 + static_cast<int>(unit(rng) * 7);
    const Eigen::MatrixXd S = spatial_gram(r, N, table);
    const double T1 = pick(0.01, 0.5), T2 = T1 + pick(0.01, 0.5);
    const GramPair a = gram_from_spatial(S, T1, table), b = gram_from_spatial(S, T2, table);
    const double scale = b.G.trace();
    const double asym = (a.G - a.G.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a.G), ed(b.G - a.G);
    if (asym > 1e-14 * scale || ea.eigenvalues()(0) < -1e-12 * scale || ed.eigenvalues()(0) < -1e-12 * scale)
      ++fails[1];
  }

  // Cutoff: values in [0, 1] and gradient only inside the tube.
  const Grid2D g3 = make_grid2d(81, 63);
  for (int k = 0; k < instances; ++k) {
    const double eps = pick(0.1, 0.2);
    const Path p = unit(rng) < 0.5 ? vertical_path(pick(-0.6, 0.6)) : sketch_path(pick(0.3, 0.6));
    const CutoffField cf = build_cutoff(p, eps, g3);
    bool ok = cutoff_support_violations(cf) == 0;
    for (double v : cf.values()) ok = ok && v >= 0.0 && v <= 1.0;
    if (!ok) ++fails[2];
  }

  // Star-shapedness of U for random admissible parameters.
  for (int k = 0; k < instances; ++k) {
    try {
      const PlanarDomain U = build_U(pick(0.3, std::numbers::pi - 0.3), pick(0.05, 0.4), pick(0.2, 0.9),
                                     pick(0.01, 0.2), {512, 128});
      if (!U.star_shaped()) ++fails[3];
    } catch (const GeometryError&) {
      ++fails[3];
    }
  }

  // Determinism: repeated runs agree bit for bit.
  for (int k = 0; k < instances; ++k) {
    const Region r = random_region();
    const int N = 2 + static_cast<int>(unit(rng) * 7);
    const double T = pick(0.05, 0.4);
    const ObsCost a = obs_cost(assemble_gram(r, T, N, table)), b = obs_cost(assemble_gram(r, T, N, table));
    ModalState f(N, g2.x);
    for (double& v : f.data) v = gauss(rng);
    const ModalState e1 = evolve_observed(f, 0.02, {}, 1e-3, {}), e2 = evolve_observed(f, 0.02, {}, 1e-3, {});
    if (!(a.C == b.C || (std::isinf(a.C) && std::isinf(b.C))) || e1.data != e2.data) ++fails[4];
  }

  const bool ok = fails[0] + fails[1] + fails[2] + fails[3] + fails[4] == 0;
  return {ok, fmt("failures out of %d: dissipation %d, gram %d, cutoff %d, star-shaped %d, determinism %d", instances,
                  fails[0], fails[1], fails[2], fails[3], fails[4])};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"spectral fidelity", spectral_fidelity}, {"asymptotics", asymptotics},
      {"minimal time, two strips", minimal_time}, {"minimal time, corridor", corridor},
      {"gluing pipeline", gluing_pipeline},     {"Runge family", runge_pipeline},
      {"closed-form identities", closed_forms}, {"invariant suites", invariants}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s  [%s] (%.1f s)\n", id, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
