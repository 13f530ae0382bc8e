#include "pslab/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pslab/acceptance.hpp"
#include "pslab/asymptotics.hpp"
#include "pslab/error.hpp"
#include "pslab/field_io.hpp"
#include "pslab/manifest.hpp"
#include "pslab/monotonicity.hpp"
#include "pslab/ode1d.hpp"
#include "pslab/segregation.hpp"
#include "pslab/solver.hpp"

namespace pslab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part, what));
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", what));
  return out;
}

Point parse_center(const std::string& s, int dim) {
  const std::vector<double> c = parse_list(s, "--center");
  if (static_cast<int>(c.size()) != dim) {
    throw ConfigError(fmt::format("--center: expected {} coordinates, got {}", dim, c.size()));
  }
  Point p{};
  for (int a = 0; a < dim; ++a) p[a] = c[static_cast<std::size_t>(a)];
  return p;
}

// "r0:r1:k" (k radii, evenly spaced) or a comma list.
std::vector<double> parse_radii(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() == 3) {
    const double count = parse_double(parts[2], "--radii count");
    if (count < 1 || count != std::floor(count)) throw ConfigError("--radii: count must be a positive integer");
    return linspace(parse_double(parts[0], "--radii"), parse_double(parts[1], "--radii"), static_cast<int>(count));
  }
  if (parts.size() != 1) throw ConfigError("--radii: expected r0:r1:k or a comma-separated list");
  return parse_list(s, "--radii");
}

// Typed access to a JSON config with the key path in every message.
class ConfigView {
 public:
  ConfigView(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  ConfigView child(const char* key) const {
    if (!has(key)) throw ConfigError(fmt::format("config: missing key '{}.{}'", path_, key));
    const json& c = j_.at(key);
    if (!c.is_object()) throw ConfigError(fmt::format("config: '{}.{}' must be an object", path_, key));
    return {c, path_ + "." + key};
  }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(fmt::format("config: missing key '{}.{}'", path_, key));
    }
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(fmt::format("config: '{}.{}' must be a number", path_, key));
    return v.get<double>();
  }

  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(fmt::format("config: missing key '{}.{}'", path_, key));
    }
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(fmt::format("config: '{}.{}' must be an integer", path_, key));
    return v.get<int>();
  }

  std::string string(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(fmt::format("config: missing key '{}.{}'", path_, key));
    }
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(fmt::format("config: '{}.{}' must be a string", path_, key));
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
};

// Output bookkeeping shared by all subcommands.
class Run {
 public:
  Run(std::string subcommand, const std::string& out_path)
      : start_(std::chrono::steady_clock::now()), out_dir_(fs::path(out_path).parent_path()) {
    manifest_.subcommand = std::move(subcommand);
    if (!out_dir_.empty()) fs::create_directories(out_dir_);
  }

  json& config() { return manifest_.config; }
  Fingerprint& fingerprint() { return fp_; }
  void input(const std::string& path) { manifest_.add_input(path); }
  void output(const std::string& path) { manifest_.outputs.push_back(path); }

  std::string sibling(const std::string& name) const { return (out_dir_ / name).string(); }

  void finish() {
    manifest_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.fingerprint = fp_.hex();
    const std::string path = sibling("manifest.json");
    manifest_.write(path);
    std::cout << fmt::format("wrote {} (fingerprint {})\n", path, manifest_.fingerprint.substr(0, 16));
  }

 private:
  std::chrono::steady_clock::time_point start_;
  fs::path out_dir_;
  RunManifest manifest_;
  Fingerprint fp_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  return out;
}

SolveOptions solve_options_from(const ConfigView& c, SolveOptions base) {
  base.tol = c.number("tol", base.tol);
  base.max_sweeps = c.integer("max_sweeps", base.max_sweeps);
  base.check_every = c.integer("check_every", base.check_every);
  base.log_every = c.integer("log_every", base.log_every);
  if (c.has("omega")) base.omega = c.number("omega");
  return base;
}

GridSpec grid_from(const ConfigView& c) {
  const int dim = c.integer("dim", 2);
  const double lo = c.number("lo");
  const double hi = c.number("hi");
  const int n = c.integer("n");
  return GridSpec::cube(dim, lo, hi, n);
}

BoundaryData boundary_from(const ConfigView& c, const GridSpec& grid, Run& run) {
  const std::string kind = c.string("kind");
  if (kind == "harmonic") {
    return boundary_from_harmonic(c.integer("degree", 1), c.number("amplitude", 1.0), grid);
  }
  if (kind == "profile") {
    const std::string path = c.string("path");
    run.input(path);
    const std::string lift = c.string("lift", "interpolate");
    LiftMode mode = LiftMode::Interpolate;
    if (lift == "grid") {
      mode = LiftMode::GridConsistent;
    } else if (lift != "interpolate") {
      throw ConfigError(fmt::format("config: 'boundary.lift' must be 'interpolate' or 'grid', got '{}'", lift));
    }
    return boundary_from_profile(read_profile(path), grid, mode);
  }
  throw ConfigError(fmt::format("config: 'boundary.kind' must be 'harmonic' or 'profile', got '{}'", kind));
}

// --- subcommands -----------------------------------------------------------

struct Solve1dArgs {
  HeteroclinicOptions opts;
  std::string out = "profile.json";
};

void cmd_solve1d(const Solve1dArgs& a) {
  Run run("solve1d", a.out);
  run.config() = {{"L", a.opts.L}, {"n", a.opts.n}, {"slope", a.opts.slope},
                  {"tol", a.opts.tol}, {"max_iter", a.opts.max_iter}, {"shift", a.opts.shift}};
  const Profile1D p = solve_heteroclinic(a.opts);
  const SymmetryCenter sc = center_and_symmetry_defect(p);
  const EnergyInvariant ei = energy_invariant(p);
  write_profile(a.out, p, sc.defect);
  run.output(a.out);
  run.fingerprint().add("u", p.u);
  run.fingerprint().add("v", p.v);
  std::cout << fmt::format(
      "profile: residual {:.3e}, Newton iterations {}, offset {:.6f}, t0 {:.6f}, symmetry defect {:.3e}, "
      "energy deviation {:.3e}\n",
      p.residual_norm, p.newton_iterations, p.offset, p.t0, sc.defect, ei.max_deviation);
  run.finish();
}

struct Solve2dArgs {
  std::string config;
  std::string profile;
  int degree = 0;
  double amplitude = 1.0;
  int dim = 2;
  double lo = -8.0;
  double hi = 8.0;
  int n = 257;
  double beta = 1.0;
  double tol = 1e-9;
  std::optional<double> omega;
  bool optimal_omega = false;
  int max_sweeps = 200000;
  int log_every = 0;
  std::string lift = "interpolate";
  std::string out = "field.json";
};

void cmd_solve2d(const Solve2dArgs& a) {
  Run run("solve2d", a.out);
  GridSpec grid;
  BoundaryData bdry;
  SolveOptions opts;
  double beta = a.beta;
  if (!a.config.empty()) {
    run.input(a.config);
    const json cfg = read_json(a.config);
    const ConfigView root(cfg, "config");
    grid = grid_from(root.child("grid"));
    bdry = boundary_from(root.child("boundary"), grid, run);
    if (root.has("solver")) opts = solve_options_from(root.child("solver"), opts);
    beta = root.number("beta", beta);
    run.config() = cfg;
  } else {
    grid = GridSpec::cube(a.dim, a.lo, a.hi, a.n);
    if (!a.profile.empty()) {
      if (a.lift != "interpolate" && a.lift != "grid") throw ConfigError("--lift must be 'interpolate' or 'grid'");
      run.input(a.profile);
      bdry = boundary_from_profile(read_profile(a.profile), grid,
                                   a.lift == "grid" ? LiftMode::GridConsistent : LiftMode::Interpolate);
    } else if (a.degree >= 1) {
      bdry = boundary_from_harmonic(a.degree, a.amplitude, grid);
    } else {
      throw ConfigError("solve2d needs --config, --profile or --harmonic-degree");
    }
    opts.tol = a.tol;
    opts.max_sweeps = a.max_sweeps;
    run.config() = {{"grid", {{"dim", a.dim}, {"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}},
                    {"boundary", a.profile.empty()
                                     ? json{{"kind", "harmonic"}, {"degree", a.degree}, {"amplitude", a.amplitude}}
                                     : json{{"kind", "profile"}, {"path", a.profile}, {"lift", a.lift}}},
                    {"beta", beta},
                    {"solver", {{"tol", a.tol}, {"max_sweeps", a.max_sweeps}}}};
  }
  opts.log_every = a.log_every;
  if (a.omega) opts.omega = a.omega;
  if (a.optimal_omega) opts.omega = laplace_optimal_omega(grid);
  run.config()["solver"]["omega"] = opts.omega.value_or(default_omega(grid.dim()));

  const SolveResult res = solve(bdry, beta, opts);
  write_field(a.out, res.pair);
  run.output(a.out);
  run.fingerprint().add("u", res.pair.u().values());
  run.fingerprint().add("v", res.pair.v().values());
  std::cout << fmt::format("solved: {} + {} sweeps, residual u {:.3e}, v {:.3e}, omega {:.4f}\n", res.initial_sweeps,
                           res.sweeps, res.residual_u, res.residual_v, res.omega);
  run.finish();
}

struct DiagnoseArgs {
  std::string field;
  std::string center;
  std::string radii;
  std::string out = "report.csv";
  int shells = 0;
};

json verdicts_json(const std::vector<Verdict>& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    out.push_back({{"name", v.name}, {"pass", v.pass}, {"max_violation", v.max_violation}, {"detail", v.detail}});
  }
  return out;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void cmd_diagnose(const DiagnoseArgs& a) {
  Run run("diagnose", a.out);
  run.input(a.field);
  const SolutionPair pair = read_field(a.field);
  const Point x0 = parse_center(a.center, pair.grid().dim());
  const std::vector<double> radii = parse_radii(a.radii);
  run.config() = {{"field", a.field}, {"center", a.center}, {"radii", radii}, {"shells", a.shells}};
  ScanOptions opts;
  opts.n_shells = a.shells;
  const MonotonicityReport rep = almgren_scan(pair, x0, radii, opts);
  const AcfReport acf = acf_from_report(rep);

  std::ofstream csv = open_out(a.out);
  csv << "r,H,E,N,J,ball_mass\n";
  for (std::size_t k = 0; k < radii.size(); ++k) {
    csv << fmt::format("{},{},{},{},{},{}\n", num(radii[k]), num(rep.H[k]), num(rep.E[k]), num(rep.N[k]),
                       num(rep.J[k]), num(rep.ball_mass[k]));
  }
  run.output(a.out);

  json side;
  side["center"] = std::vector<double>(x0.begin(), x0.begin() + pair.grid().dim());
  side["d_estimate"] = finite_or_null(rep.d_estimate);
  side["d_rounded"] = rep.d_rounded;
  side["d_distance"] = finite_or_null(rep.d_distance);
  side["mass_growth_floor"] = rep.mass_growth_floor;
  // Distance from the largest ball to the nearest face of the box.
  side["boundary_margin"] = pair.grid().max_radius(x0, 0.0) - *std::max_element(radii.begin(), radii.end());
  side["verdicts"] = verdicts_json(rep.verdicts);
  side["acf"] = {{"C", finite_or_null(acf.C)},
                 {"band_C4", finite_or_null(acf.band_C4)},
                 {"pass", acf.monotone.pass},
                 {"detail", acf.monotone.detail}};
  if (rep.min_N() <= rep.max_N()) {
    const DoublingVerdict dv = check_doubling(rep, rep.min_N(), rep.max_N());
    side["doubling"] = {{"pass", dv.pass}, {"d1", dv.d1}, {"d2", dv.d2}, {"worst_margin", dv.worst_margin},
                        {"r1", dv.worst_r1}, {"r2", dv.worst_r2}, {"bound", dv.worst_bound}};
  }
  if (radii.size() >= 4) {
    const GrowthEstimate ge = growth_exponent(rep);
    side["growth"] = {{"p_estimate", ge.p_estimate}, {"mean_N", finite_or_null(ge.mean_N)},
                      {"consistent", ge.consistent}};
  }
  const std::string sidecar = fs::path(a.out).replace_extension(".json").string();
  open_out(sidecar) << side.dump(2) << '\n';
  run.output(sidecar);

  run.fingerprint().add("H", rep.H);
  run.fingerprint().add("E", rep.E);
  run.fingerprint().add("N", rep.N);
  run.fingerprint().add("J", rep.J);
  run.fingerprint().add("ball_mass", rep.ball_mass);
  for (const auto& v : rep.verdicts) std::cout << fmt::format("{:<16} {}  {}\n", v.name, v.pass ? "pass" : "FAIL", v.detail);
  std::cout << fmt::format("d_estimate {:.6f} (nearest integer {}), fitted ACF constant {:.4g}\n", rep.d_estimate,
                           rep.d_rounded, acf.C);
  run.finish();
}

struct BlowdownArgs {
  std::string field;
  std::string center;
  std::string r_list;
  int ref_n = 129;
  std::string out = "blowdown.csv";
};

void cmd_blowdown(const BlowdownArgs& a) {
  Run run("blowdown", a.out);
  run.input(a.field);
  const SolutionPair pair = read_field(a.field);
  const Point x0 = parse_center(a.center, pair.grid().dim());
  const std::vector<double> Rs = parse_list(a.r_list, "--R-list");
  run.config() = {{"field", a.field}, {"center", a.center}, {"R", Rs}, {"ref_n", a.ref_n}};
  const GridSpec ref = blowdown_grid(pair.grid().dim(), a.ref_n);
  std::ofstream csv = open_out(a.out);
  csv << "R,sup_dist,H1_dist,ratio\n";
  std::vector<double> sup, h1, ratio;
  for (double R : Rs) {
    const BlowdownReport rep = blow_down(pair, x0, R, ref).report;
    csv << fmt::format("{},{},{},{}\n", num(R), num(rep.sup_distance), num(rep.H1_distance), num(rep.ratio));
    std::cout << fmt::format("R {:g}: sup {:.4g}, H1 {:.4g}, ratio {:.4g}, box margin {:.4g}\n", R, rep.sup_distance,
                             rep.H1_distance, rep.ratio, pair.grid().max_radius(x0, 0.0) - R);
    sup.push_back(rep.sup_distance);
    h1.push_back(rep.H1_distance);
    ratio.push_back(rep.ratio);
  }
  run.output(a.out);
  run.fingerprint().add("sup_dist", sup);
  run.fingerprint().add("H1_dist", h1);
  run.fingerprint().add("ratio", ratio);
  run.finish();
}

struct AsymptoticsArgs {
  std::string field;
  std::string ops = "decay,planes,cone,defect,levelset";
  double p = 1.0;
  double q = 2.0;
  std::string slab;
  int planes = 25;
  double level = 0.1;
  std::string out = "asym.json";
};

void cmd_asymptotics(const AsymptoticsArgs& a) {
  Run run("asymptotics", a.out);
  run.input(a.field);
  const SolutionPair pair = read_field(a.field);
  const GridSpec& g = pair.grid();
  const int axis = g.normal_axis();
  run.config() = {{"field", a.field}, {"ops", a.ops}, {"p", a.p}, {"q", a.q}, {"slab", a.slab},
                  {"planes", a.planes}, {"level", a.level}};
  json report;
  for (const auto& op : split(a.ops, ',')) {
    if (op == "decay") {
      double lo = 0.25 * g.hi(axis);
      double hi = 0.5 * g.hi(axis);
      if (!a.slab.empty()) {
        const auto parts = split(a.slab, ':');
        if (parts.size() != 2) throw ConfigError("--slab: expected a:b");
        lo = parse_double(parts[0], "--slab");
        hi = parse_double(parts[1], "--slab");
      }
      const DecayFit df = decay_fit(pair, a.p, a.q, lo, hi);
      report["decay"] = {{"p", df.p}, {"q", df.q}, {"slab", {df.a, df.b}}, {"rate", df.rate},
                         {"amplitude", df.amplitude}, {"r_squared", df.r_squared}, {"rows_used", df.rows_used},
                         {"rows_dropped", df.rows_dropped}, {"box_margin", g.hi(axis) - df.b}};
      run.fingerprint().add("decay", std::vector<double>{df.rate, df.amplitude, df.r_squared});
    } else if (op == "planes") {
      const std::string csv_path = fs::path(a.out).replace_extension("").string() + "_planes.csv";
      std::ofstream csv = open_out(csv_path);
      csv << "lambda,max_violation_u,max_violation_v,coverage\n";
      double worst = 0.0;
      std::vector<double> values;
      for (double lambda : plane_heights(g, a.planes)) {
        const MovingPlaneReport mp = moving_plane_check(pair, lambda);
        csv << fmt::format("{},{},{},{}\n", num(lambda), num(mp.max_violation_u), num(mp.max_violation_v),
                           num(mp.coverage));
        worst = std::max({worst, mp.max_violation_u, mp.max_violation_v});
        values.insert(values.end(), {lambda, mp.max_violation_u, mp.max_violation_v, mp.coverage});
      }
      run.output(csv_path);
      report["planes"] = {{"count", a.planes}, {"max_violation", worst}, {"csv", csv_path}};
      run.fingerprint().add("planes", values);
    } else if (op == "cone") {
      const double m_up = far_field_height(pair, a.p, a.q, true);
      const double m_down = far_field_height(pair, a.p, a.q, false);
      json probes = json::array();
      std::vector<double> values;
      const double s2 = 1.0 / std::sqrt(2.0);
      const double s5 = 1.0 / std::sqrt(5.0);
      std::vector<Vec3> dirs = {{0.0, 1.0, 0.0}, {s2, s2, 0.0}, {-s5, 2.0 * s5, 0.0}};
      if (g.dim() == 3) dirs = {{0.0, 0.0, 1.0}, {s2, 0.0, s2}, {0.0, -s5, 2.0 * s5}};
      for (const Vec3& nu : dirs) {
        for (bool upper : {true, false}) {
          const ConeProbe cp = directional_monotonicity(pair, nu, upper, upper ? m_up : m_down);
          probes.push_back({{"nu", std::vector<double>(nu.begin(), nu.begin() + g.dim())},
                            {"region", upper ? "upper" : "lower"},
                            {"M", cp.M},
                            {"min_derivative", cp.min_derivative}});
          values.push_back(cp.min_derivative);
        }
      }
      report["cone"] = {{"M_upper", m_up}, {"M_lower", m_down}, {"probes", probes}};
      run.fingerprint().add("cone", values);
    } else if (op == "defect") {
      const double d = one_dimensionality_defect(pair);
      report["defect"] = d;
      run.fingerprint().add("defect", d);
    } else if (op == "levelset") {
      const LevelSetExtent ls = level_set_extent(pair, a.level);
      report["levelset"] = {{"c", ls.c}, {"empty", ls.empty}, {"min_xN", ls.min_xN}, {"max_xN", ls.max_xN},
                            {"zeta", ls.zeta}, {"all_columns_hit", ls.all_columns_hit}};
      run.fingerprint().add("levelset", std::vector<double>{ls.min_xN, ls.max_xN, ls.zeta});
    } else if (op == "strip") {
      const StripBounds sb = strip_bound_scan(pair, 0.0);
      report["strip"] = {{"M", sb.M}, {"sup_u_plus_grad", sb.sup_u_plus_grad}, {"sup_v_plus_grad", sb.sup_v_plus_grad}};
      run.fingerprint().add("strip", std::vector<double>{sb.sup_u_plus_grad, sb.sup_v_plus_grad});
    } else {
      throw ConfigError(fmt::format("--ops: unknown operation '{}'", op));
    }
  }
  open_out(a.out) << report.dump(2) << '\n';
  run.output(a.out);
  run.finish();
}

struct SegregateArgs {
  std::string config;
  std::string betas = "1,4,16,64,256";
  double alpha = 0.9;
  double min_sep = 0.1;
  std::string out = "segregation.csv";
};

void cmd_segregate(const SegregateArgs& a) {
  Run run("segregate", a.out);
  run.input(a.config);
  const json cfg = read_json(a.config);
  const ConfigView root(cfg, "config");
  const GridSpec grid = grid_from(root.child("grid"));
  const BoundaryData bdry = boundary_from(root.child("boundary"), grid, run);
  SweepOptions opts;
  opts.alpha = a.alpha;
  opts.min_sep = a.min_sep;
  if (root.has("solver")) opts.solve = solve_options_from(root.child("solver"), opts.solve);
  const std::vector<double> betas = parse_list(a.betas, "--betas");
  run.config() = {{"config", cfg}, {"betas", betas}, {"alpha", a.alpha}, {"min_sep", a.min_sep}};

  const SegregationTable table = sweep(bdry, betas, opts);
  std::ofstream csv = open_out(a.out);
  csv << "beta,sup_uv,interaction,harm_residual,holder,sweeps\n";
  for (const auto& r : table.rows) {
    csv << fmt::format("{},{},{},{},{},{}\n", num(r.beta), num(r.sup_uv), num(r.interaction), num(r.harm_residual),
                       num(r.holder), r.sweeps);
    run.fingerprint().add("row", std::vector<double>{r.beta, r.sup_uv, r.interaction, r.harm_residual, r.holder});
  }
  run.output(a.out);
  run.finish();
  if (!table.complete) throw NonConvergence(fmt::format("sweep stopped early: {}", table.failure), {});
}

struct VerifyArgs {
  bool quick = false;
  std::string only;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<int> ids;
  if (!a.only.empty()) {
    for (double v : parse_list(a.only, "--only")) ids.push_back(static_cast<int>(v));
  } else {
    const int last = a.quick ? 5 : 10;
    for (int id = 1; id <= last; ++id) ids.push_back(id);
  }
  const auto results = run_acceptance(ids, &std::cerr);
  const bool ok = print_acceptance_table(results, std::cout);
  if (!a.out.empty()) {
    Run run("verify", a.out);
    run.config() = {{"criteria", ids}};
    json j = json::array();
    for (const auto& r : results) {
      j.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds},
                   {"detail", r.detail}, {"fingerprint", r.fingerprint}});
      run.fingerprint().add(r.fingerprint, 0.0);
    }
    open_out(a.out) << j.dump(2) << '\n';
    run.output(a.out);
    run.finish();
  }
  return ok ? 0 : kExitVerifyFailed;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"pslab: numerical laboratory for the phase-separation system -Δu = -βuv², -Δv = -βu²v"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Solve1dArgs s1;
  auto* c1 = app.add_subcommand("solve1d", "Heteroclinic 1D profile by damped Newton");
  c1->add_option("--L", s1.opts.L, "Half-width of the interval")->capture_default_str();
  c1->add_option("--n", s1.opts.n, "Node count (odd)")->capture_default_str();
  c1->add_option("--slope", s1.opts.slope, "Asymptotic slope")->capture_default_str();
  c1->add_option("--tol", s1.opts.tol, "Residual tolerance")->capture_default_str();
  c1->add_option("--max-iter", s1.opts.max_iter, "Newton iteration cap")->capture_default_str();
  c1->add_option("--shift", s1.opts.shift, "Translation of the center")->capture_default_str();
  c1->add_option("--out", s1.out, "Profile file")->capture_default_str();

  Solve2dArgs s2;
  auto* c2 = app.add_subcommand("solve2d", "Dirichlet problem on a box by projected SOR");
  c2->add_option("--config", s2.config, "JSON config with grid, boundary, solver and beta");
  c2->add_option("--profile", s2.profile, "Profile file for lifted boundary data");
  c2->add_option("--harmonic-degree", s2.degree, "Degree of the harmonic boundary trace");
  c2->add_option("--amplitude", s2.amplitude, "Amplitude of the harmonic trace")->capture_default_str();
  c2->add_option("--dim", s2.dim, "Dimension (2 or 3)")->capture_default_str();
  c2->add_option("--lo", s2.lo, "Lower box corner")->capture_default_str();
  c2->add_option("--hi", s2.hi, "Upper box corner")->capture_default_str();
  c2->add_option("--n", s2.n, "Nodes per axis")->capture_default_str();
  c2->add_option("--beta", s2.beta, "Coupling")->capture_default_str();
  c2->add_option("--tol", s2.tol, "Residual tolerance")->capture_default_str();
  c2->add_option("--omega", s2.omega, "SOR factor in (0, 2)");
  c2->add_flag("--optimal-omega", s2.optimal_omega, "Use the Laplacian-optimal SOR factor");
  c2->add_option("--max-sweeps", s2.max_sweeps, "Sweep cap")->capture_default_str();
  c2->add_option("--log-every", s2.log_every, "Print the residual every k sweeps");
  c2->add_option("--lift", s2.lift, "interpolate | grid")->capture_default_str();
  c2->add_option("--out", s2.out, "Field file")->capture_default_str();

  DiagnoseArgs dg;
  auto* c3 = app.add_subcommand("diagnose", "H, E, N, J scan around a center");
  c3->add_option("--field", dg.field, "Field file")->required();
  c3->add_option("--center", dg.center, "Center x,y[,z]")->required();
  c3->add_option("--radii", dg.radii, "r0:r1:k or a comma list")->required();
  c3->add_option("--shells", dg.shells, "Shells per ball integral (0 = auto)");
  c3->add_option("--out", dg.out, "CSV report")->capture_default_str();

  BlowdownArgs bd;
  auto* c4 = app.add_subcommand("blowdown", "Blow-down distances to the limiting linear pair");
  c4->add_option("--field", bd.field, "Field file")->required();
  c4->add_option("--center", bd.center, "Center x,y[,z]")->required();
  c4->add_option("--R-list", bd.r_list, "Comma-separated radii")->required();
  c4->add_option("--ref-n", bd.ref_n, "Nodes per axis of the reference grid")->capture_default_str();
  c4->add_option("--out", bd.out, "CSV report")->capture_default_str();

  AsymptoticsArgs as;
  auto* c5 = app.add_subcommand("asymptotics", "Far-field decay, moving planes, cones, 1D defect, level sets");
  c5->add_option("--field", as.field, "Field file")->required();
  c5->add_option("--ops", as.ops, "decay,planes,cone,defect,levelset,strip")->capture_default_str();
  c5->add_option("--p", as.p, "Exponent of u")->capture_default_str();
  c5->add_option("--q", as.q, "Exponent of v")->capture_default_str();
  c5->add_option("--slab", as.slab, "Decay slab a:b (default [hi/4, hi/2])");
  c5->add_option("--planes", as.planes, "Number of plane heights")->capture_default_str();
  c5->add_option("--level", as.level, "Threshold c for {|u - v| < c}")->capture_default_str();
  c5->add_option("--out", as.out, "JSON report")->capture_default_str();

  SegregateArgs sg;
  auto* c6 = app.add_subcommand("segregate", "Sweep in beta and segregation metrics");
  c6->add_option("--config", sg.config, "JSON config with grid, boundary and solver")->required();
  c6->add_option("--betas", sg.betas, "Increasing comma-separated betas")->capture_default_str();
  c6->add_option("--alpha", sg.alpha, "Hölder exponent")->capture_default_str();
  c6->add_option("--min-sep", sg.min_sep, "Minimum pair separation for the Hölder quotient")->capture_default_str();
  c6->add_option("--out", sg.out, "CSV table")->capture_default_str();

  VerifyArgs vf;
  auto* c7 = app.add_subcommand("verify", "Run the acceptance checks");
  c7->add_flag("--quick", vf.quick, "Only checks 1-5");
  c7->add_option("--only", vf.only, "Comma-separated check numbers");
  c7->add_option("--out", vf.out, "JSON results (a manifest is written next to it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*c1) cmd_solve1d(s1);
    if (*c2) cmd_solve2d(s2);
    if (*c3) cmd_diagnose(dg);
    if (*c4) cmd_blowdown(bd);
    if (*c5) cmd_asymptotics(as);
    if (*c6) cmd_segregate(sg);
    if (*c7) return cmd_verify(vf);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedConfiguration& e) {
    std::cerr << "unsupported configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const MisuseError& e) {
    std::cerr << "invalid request: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

}  // namespace pslab
