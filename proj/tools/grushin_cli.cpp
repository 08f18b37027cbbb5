// Command-line driver: spectra, regions, cutoffs, cost scans, HUM, Runge
// families and the gluing pipeline. Every run writes manifest.json.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <fftw3.h>
#include <mpfr.h>

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grushin/complexplane.hpp"
#include "grushin/control.hpp"
#include "grushin/geometry.hpp"
#include "grushin/gluing.hpp"
#include "grushin/io.hpp"
#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace grushin;

namespace {

struct Common {
  std::string out = "out";
  std::string config;
  unsigned long long seed = 1;
  int nx = 801;
  int ny = 401;
};

struct RegionArgs {
  std::string kind = "two-strips";
  double a = 0.5;
  double lo = -1.0, hi = -0.5;
  double half_w = 0.6, yc = 1.0, half_h = 0.1;
  std::vector<double> gamma1, gamma2;
  std::string path = "sketch";
  double path_a = 0.488;
  double eps = 0.1;
};

struct Args {
  Common c;
  RegionArgs r;
  int n_max = 30;
  double spec_eps = 0.25;
  double T = 0.3;
  std::string T_grid = "0.02:0.02:0.3";
  std::vector<int> N_list{10, 20, 30};
  int N = 30;
  double dt = 1e-3;
  double reg = 1e-14;
  int basis = 0;
  std::string f0 = "v1";
  double y0 = 1.5707963267948966;
  double delta = 0.2;
  double a_prime = 0.6;
  double ceps = 0.05;
  int kmax = 12;
  int shift_N = 4;
  double rho = 0.37;
  double tol = 1e-4;
  int trials = 0;
};

std::vector<double> parse_range(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
    throw InputError("T grid must be start:step:stop, got '" + s + "'");
  const double start = std::stod(a), step = std::stod(b), stop = std::stod(c);
  if (!(step > 0.0) || !(stop >= start)) throw InputError("T grid needs step > 0 and stop >= start");
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int k = 0; k <= n; ++k) v.push_back(std::round((start + k * step) * 1e12) / 1e12);
  return v;
}

Path make_path(const RegionArgs& r) {
  if (r.path == "sketch") return sketch_path(r.path_a);
  if (r.path == "vertical") return vertical_path(-r.path_a);
  throw InputError("unknown path '" + r.path + "' (sketch, vertical)");
}

YProfile profile(const std::vector<double>& v) { return YProfile{v}; }

Region make_region(const RegionArgs& r, const Grid2D& g) {
  if (r.kind == "strip") return make_strip(r.lo, r.hi, g);
  if (r.kind == "two-strips") return make_two_strips(r.a, g);
  if (r.kind == "full") return make_strip(-1.0, 1.0, g);
  if (r.kind == "rectangle-complement") return make_rectangle_complement(r.half_w, r.yc, r.half_h, g);
  if (r.kind == "corridor") {
    if (r.gamma1.empty() && r.gamma2.empty()) {
      const auto [g1, g2] = wavy_corridor(r.a);
      return make_corridor(g1, g2, g);
    }
    return make_corridor(profile(r.gamma1), profile(r.gamma2), g);
  }
  if (r.kind == "path-neighborhood") return make_path_neighborhood(make_path(r), r.eps, g);
  throw InputError("unknown region kind '" + r.kind + "'");
}

// Critical abscissa implied by the region parameters, when the kind has one.
double region_a(const RegionArgs& r, const Region& reg) {
  if (r.kind == "two-strips") return r.a;
  if (r.kind == "corridor") return corridor_critical_a(reg.gamma1, reg.gamma2);
  if (r.kind == "path-neighborhood") return critical_abscissa(reg.path);
  return std::nan("");
}

ModalState make_f0(const std::string& kind, int N, const Grid1D& g, unsigned long long seed) {
  ModalState f(N, g);
  auto put = [&](int n, double amp) {
    if (n > N) return;
    const EigenPair p = solve_mode_eigenpair(n, g);
    for (int i = 0; i < g.count; ++i) f.at(n, i) += amp * p.v[i];
  };
  if (kind == "v1") {
    put(1, 1.0);
  } else if (kind == "v1v3") {
    put(1, 1.0);
    put(3, 0.5);
  } else if (kind == "random") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (int n = 1; n <= N; ++n) put(n, nd(rng));
  } else if (kind == "zero") {
  } else {
    throw InputError("unknown f0 '" + kind + "' (v1, v1v3, random, zero)");
  }
  return f;
}

void write_json(const json& j, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw InputError("cannot write " + file);
  out << j.dump(2) << '\n';
}

std::string versions() {
  std::ostringstream s;
  s << "compiler " << __VERSION__ << "; eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
    << EIGEN_MINOR_VERSION << "; " << fftw_version << "; mpfr " << mpfr_get_version();
  return s.str();
}

// Values of options not given on the command line are taken from the JSON
// config (flat keys or keys under the command name).
void apply_config(CLI::App* sub, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read config " + file);
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  json scoped = cfg.contains(sub->get_name()) ? cfg[sub->get_name()] : json::object();
  for (CLI::Option* o : sub->get_options()) {
    const std::string name = o->get_lnames().empty() ? "" : o->get_lnames().front();
    if (name.empty() || o->count() > 0 || name == "config") continue;
    const json* v = nullptr;
    if (scoped.contains(name)) v = &scoped[name];
    else if (cfg.contains(name)) v = &cfg[name];
    if (!v) continue;
    auto text = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    if (v->is_array()) {
      std::string joined;
      for (const auto& x : *v) joined += (joined.empty() ? "" : ",") + text(x);
      o->add_result(joined);
    } else {
      o->add_result(text(*v));
    }
    o->run_callback();
  }
}

json options_json(CLI::App* sub) {
  json j = json::object();
  for (CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty()) continue;
    const auto& res = o->results();
    std::string v;
    for (const auto& r : res) v += (v.empty() ? "" : ",") + r;
    if (v.empty()) v = o->get_default_str();
    // Numbers stay numbers in the manifest.
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (!v.empty() && end == v.c_str() + v.size())
      j[o->get_lnames().front()] = d;
    else
      j[o->get_lnames().front()] = v;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grushin null-controllability toolkit"};
  app.require_subcommand(1);
  Args A;

  auto common = [&](CLI::App* s, bool grid) {
    s->add_option("--out", A.c.out, "output directory")->capture_default_str();
    s->add_option("--config", A.c.config, "JSON config; command-line flags take precedence");
    s->add_option("--seed", A.c.seed, "seed for randomized parts")->capture_default_str();
    if (grid) {
      s->add_option("--nx", A.c.nx, "x nodes (odd)")->capture_default_str();
      s->add_option("--ny", A.c.ny, "y nodes")->capture_default_str();
    }
  };
  auto region = [&](CLI::App* s) {
    s->add_option("--region", A.r.kind, "strip, two-strips, full, corridor, rectangle-complement, path-neighborhood")
        ->capture_default_str();
    s->add_option("--a", A.r.a, "strip clearance / corridor a")->capture_default_str();
    s->add_option("--lo", A.r.lo, "strip left edge")->capture_default_str();
    s->add_option("--hi", A.r.hi, "strip right edge")->capture_default_str();
    s->add_option("--half-w", A.r.half_w, "removed rectangle half width")->capture_default_str();
    s->add_option("--yc", A.r.yc, "removed rectangle center y")->capture_default_str();
    s->add_option("--half-h", A.r.half_h, "removed rectangle half height")->capture_default_str();
    s->add_option("--gamma1", A.r.gamma1, "corridor left edge samples over y in [0,pi]")->delimiter(',');
    s->add_option("--gamma2", A.r.gamma2, "corridor right edge samples")->delimiter(',');
    s->add_option("--path", A.r.path, "sketch or vertical")->capture_default_str();
    s->add_option("--path-a", A.r.path_a, "critical abscissa of the path")->capture_default_str();
    s->add_option("--eps", A.r.eps, "tube radius around the path")->capture_default_str();
  };

  auto* eig = app.add_subcommand("eig", "spectral table");
  common(eig, false);
  eig->add_option("--n-max", A.n_max, "largest mode")->capture_default_str();
  eig->add_option("--eps", A.spec_eps, "eps of w_n")->capture_default_str();

  auto* reg = app.add_subcommand("region", "rasterize a region, report clearance");
  common(reg, true);
  region(reg);
  reg->add_option("--y0", A.y0, "row for the segment clearance")->capture_default_str();

  auto* cut = app.add_subcommand("cutoff", "cutoff theta for a path");
  common(cut, true);
  region(cut);

  auto* obs = app.add_subcommand("obs-cost", "observability constant C_N(T)");
  common(obs, true);
  region(obs);
  obs->add_option("--T", A.T, "final time")->capture_default_str();
  obs->add_option("--N", A.N, "modes")->capture_default_str();

  auto* mt = app.add_subcommand("min-time", "scan C_N(T) over T and N");
  common(mt, true);
  region(mt);
  mt->add_option("--T", A.T_grid, "start:step:stop")->capture_default_str();
  mt->add_option("--N", A.N_list, "mode counts")->delimiter(',');

  auto* hum = app.add_subcommand("hum", "penalized HUM control");
  common(hum, true);
  region(hum);
  hum->add_option("--T", A.T, "final time")->capture_default_str();
  hum->add_option("--N", A.N, "modes")->capture_default_str();
  hum->add_option("--dt", A.dt, "time step")->capture_default_str();
  hum->add_option("--reg", A.reg, "penalty parameter")->capture_default_str();
  hum->add_option("--basis", A.basis, "x-eigenvectors per mode (0: automatic)")->capture_default_str();
  hum->add_option("--f0", A.f0, "v1, v1v3, random, zero")->capture_default_str();

  auto* rg = app.add_subcommand("runge", "Runge family and ratio test");
  common(rg, false);
  rg->add_option("--y0", A.y0)->capture_default_str();
  rg->add_option("--delta", A.delta)->capture_default_str();
  rg->add_option("--a-prime", A.a_prime)->capture_default_str();
  rg->add_option("--eps", A.ceps)->capture_default_str();
  rg->add_option("--T", A.T, "final time")->default_val(0.1);
  rg->add_option("--kmax", A.kmax)->capture_default_str();
  rg->add_option("--N", A.shift_N, "shift: p_k = z^{N+1} p~_k")->capture_default_str();
  rg->add_option("--rho", A.rho, "chain step")->capture_default_str();
  rg->add_option("--tol", A.tol, "accuracy of each member on U")->capture_default_str();
  rg->add_option("--trials", A.trials, "multiplier-inequality trials (0: skip)")->capture_default_str();

  auto* gl = app.add_subcommand("glue", "fictitious-control gluing pipeline");
  common(gl, true);
  region(gl);
  gl->add_option("--T", A.T, "final time")->default_val(0.15);
  gl->add_option("--N", A.N, "modes")->capture_default_str();
  gl->add_option("--dt", A.dt, "time step")->capture_default_str();
  gl->add_option("--reg", A.reg, "penalty parameter")->capture_default_str();
  gl->add_option("--f0", A.f0, "v1, v1v3, random, zero")->default_val("v1v3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();

  const auto t_start = std::chrono::steady_clock::now();
  std::vector<std::string> files;
  json summary;
  try {
    if (!A.c.config.empty()) apply_config(sub, A.c.config);
    std::error_code ec;
    fs::create_directories(A.c.out, ec);
    if (ec || !fs::is_directory(A.c.out)) throw InputError("cannot create output directory " + A.c.out);
    {
      const fs::path probe = fs::path(A.c.out) / ".write_probe";
      std::ofstream t(probe);
      if (!t) throw InputError("output directory is not writable: " + A.c.out);
      t.close();
      fs::remove(probe, ec);
    }
    auto file = [&](const std::string& name) {
      const std::string p = (fs::path(A.c.out) / name).string();
      files.push_back(p);
      return p;
    };
    auto grid2 = [&] {
      if (A.c.nx < 3 || A.c.nx % 2 == 0) throw InputError("--nx must be odd and >= 3");
      if (A.c.ny < 1) throw InputError("--ny must be positive");
      return make_grid2d(A.c.nx, A.c.ny);
    };
    const std::string name = sub->get_name();

    if (name == "eig") {
      if (A.n_max < 1) throw InputError("--n-max must be >= 1");
      const auto t = build_spectral_table(A.n_max, A.spec_eps);
      io::write_spectral_csv(t, file("spectral.csv"));
      json rows = json::array();
      for (const auto& r : residual_symbol(t)) rows.push_back({{"n", r.n}, {"rho", r.rho}, {"flag", to_string(r.flag)}});
      summary["residual_symbol"] = rows;
    } else if (name == "region") {
      const Grid2D g = grid2();
      const Region r = make_region(A.r, g);
      write_pgm(r, file("region.pgm"));
      summary["kind"] = to_string(r.kind);
      summary["measure"] = r.measure();
      summary["segment_clearance"] = segment_clearance(r, A.y0);
      const double a = region_a(A.r, r);
      if (!std::isnan(a)) summary["critical_abscissa"] = a;
    } else if (name == "cutoff") {
      const Grid2D g = grid2();
      const Path p = make_path(A.r);
      const CutoffField cf = build_cutoff(p, A.r.eps, g);
      write_pgm(make_explicit_mask(g, cf.gradient_support), file("gradient_support.pgm"));
      {
        std::ofstream out(file("theta.pgm"), std::ios::binary);
        out << "P5\n" << g.x.count << ' ' << g.ny << "\n255\n";
        for (int j = g.ny - 1; j >= 0; --j)
          for (int i = 0; i < g.x.count; ++i) out.put(static_cast<char>(std::lround(255.0 * cf.theta(i, j))));
      }
      summary["critical_abscissa"] = cf.a;
      summary["support_violations"] = cutoff_support_violations(cf);
    } else if (name == "obs-cost") {
      const Grid2D g = grid2();
      const Region r = make_region(A.r, g);
      const auto t = build_spectral_table(A.N);
      const ObsCost oc = obs_cost(assemble_gram(r, A.T, A.N, t));
      summary["T"] = A.T;
      summary["N"] = A.N;
      summary["observable"] = oc.observable;
      summary["C"] = oc.observable ? json(oc.C) : json("inf");
      summary["min_eig"] = oc.min_eig;
    } else if (name == "min-time") {
      const Grid2D g = grid2();
      const Region r = make_region(A.r, g);
      if (A.N_list.empty()) throw InputError("--N needs at least one mode count");
      int nmax = 0;
      for (int n : A.N_list) {
        if (n < 1) throw InputError("mode counts must be positive");
        nmax = std::max(nmax, n);
      }
      const auto t = build_spectral_table(nmax);
      const CostCurve cc = min_time_scan(r, parse_range(A.T_grid), A.N_list, t);
      io::write_cost_csv(cc, file("min_time.csv"));
      summary["transition_lo"] = cc.transition_lo;
      summary["transition_hi"] = std::isnan(cc.transition_hi) ? json(nullptr) : json(cc.transition_hi);
      summary["ordered"] = cc.ordered;
      const double a = region_a(A.r, r);
      if (!std::isnan(a)) {
        summary["critical_time"] = a * a / 2.0;
        summary["brackets_critical_time"] = cc.brackets(a * a / 2.0);
      }
    } else if (name == "hum") {
      const Grid2D g = grid2();
      const Region r = make_region(A.r, g);
      const ModalState f0 = make_f0(A.f0, A.N, g.x, A.c.seed);
      HumOptions ho;
      ho.reg = A.reg;
      ho.dt = A.dt;
      ho.basis_per_mode = A.basis;
      const HumResult h = hum_control(r, A.T, f0, A.N, ho);
      summary["initial_norm"] = h.initial_norm;
      summary["terminal_norm"] = h.terminal_norm;
      summary["relative_residual"] = h.relative_residual();
      summary["control_norm"] = h.control_norm;
      summary["gram_condition"] = h.gram_condition;
      io::write_snapshot(f0, g.ny, file("f0.bin"));
      io::write_snapshot(h.terminal, g.ny, file("fT.bin"));
      if (!h.source.empty()) {
        ModalState s(A.N, g.x);
        h.source.step_source(0, 0.0, h.basis->h, s);
        io::write_snapshot(s, g.ny, file("control_t0.bin"));
      }
    } else if (name == "runge") {
      const PlanarDomain U = build_U(A.y0, A.delta, A.a_prime, A.ceps);
      const cplx z0 = separating_pole(A.T, A.y0, A.a_prime, A.ceps);
      RungeOptions ro;
      ro.rho = A.rho;
      ro.tol = A.tol;
      const PolyFamily fam = runge_family(z0, A.kmax, A.shift_N, U, ro);
      const RatioReport rep = ratio_divergence_test(fam, A.T, U);
      io::write_ratio_csv(rep, file("runge.csv"));
      io::write_domain_csv(U, file("U_samples.csv"));
      const double target = runge_target_sup(z0, A.shift_N, U);
      double sup = 0.0;
      for (const auto& row : rep.rows) sup = std::max(sup, row.linf_U);
      summary["z0"] = {z0.real(), z0.imag()};
      summary["links"] = fam.centers.size() - 1;
      summary["target_sup"] = target;
      summary["max_sup_over_target"] = sup / target;
      summary["final_ratio_over_initial"] = rep.rows.back().ratio / rep.rows.front().ratio;
      summary["tenfold"] = rep.exceeded_tenfold;
      if (A.trials > 0) {
        const int N = 30;
        const auto t = build_spectral_table(N + 60, 0.25);
        const PlanarDomain K = build_K(A.T, A.y0, A.delta, A.a_prime, A.ceps, {512, 256});
        const PlanarDomain V = build_U(A.y0, A.delta, A.a_prime, A.ceps, {512, 256});
        const auto mr = multiplier_inequality_check(t, 0.25, A.T, N, K, V, A.trials, A.c.seed);
        summary["multiplier_constant"] = mr.constant;
        summary["multiplier_stabilized"] = mr.stabilized;
      }
    } else if (name == "glue") {
      const Grid2D g = grid2();
      const Path p = make_path(A.r);
      const ModalState f0 = make_f0(A.f0, A.N, g.x, A.c.seed);
      HumOptions ho;
      ho.reg = A.reg;
      ho.dt = A.dt;
      const GluingRun run = run_gluing(p, A.r.eps, A.T, f0, g, ho);
      const auto& s = run.glued;
      summary["terminal_norm"] = s.terminal_norm;
      summary["initial_norm"] = s.initial_norm;
      summary["support_violations"] = s.support_violations;
      summary["pde_residual"] = s.pde_residual;
      summary["control_norm"] = s.control_norm;
      summary["a"] = run.a;
      summary["left_relative_residual"] = run.left.hum.relative_residual();
      summary["right_relative_residual"] = run.right.hum.relative_residual();
      io::write_snapshot(s.f.states.front(), g.ny, file("f0.bin"));
      io::write_snapshot(s.f.states.back(), g.ny, file("fT.bin"));
      io::write_norms_csv(s.f.states, file("norms.csv"));
    }
    summary["command"] = name;
    summary["seed"] = A.c.seed;
    write_json(summary, file(name + ".json"));
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "numerical failure (resolution): " << e.what() << '\n';
    return 3;
  } catch (const GeometryError& e) {
    std::cerr << "numerical failure (geometry): " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  json manifest;
  manifest["command"] = sub->get_name();
  manifest["config"] = options_json(sub);
  manifest["seed"] = A.c.seed;
  manifest["versions"] = versions();
  manifest["wall_time_s"] = wall;
  const std::string mpath = (fs::path(A.c.out) / "manifest.json").string();
  files.push_back(mpath);
  manifest["files"] = files;
  write_json(manifest, mpath);
  return 0;
}
