#include "pslab/acceptance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>

#include "pslab/asymptotics.hpp"
#include "pslab/error.hpp"
#include "pslab/manifest.hpp"
#include "pslab/monotonicity.hpp"
#include "pslab/ode1d.hpp"
#include "pslab/parallel.hpp"
#include "pslab/segregation.hpp"
#include "pslab/solver.hpp"

namespace pslab {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<double> kScanRadii = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

SolutionPair exact_linear_pair(int n) {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, n);
  return SolutionPair(ScalarField::sample(g, [](const Point& x) { return std::max(0.0, x[1]); }),
                      ScalarField::sample(g, [](const Point& x) { return std::max(0.0, -x[1]); }), 1.0);
}

SolutionPair degree_two_pair(int n) {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, n);
  auto psi = [](const Point& x) { return harmonic_polynomial(2, 1.0, x, 2); };
  return SolutionPair(ScalarField::sample(g, [&](const Point& x) { return std::max(0.0, psi(x)); }),
                      ScalarField::sample(g, [&](const Point& x) { return std::max(0.0, -psi(x)); }), 1.0);
}

double max_rel(const std::vector<double>& got, const std::function<double(std::size_t)>& want) {
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - want(k)) / std::abs(want(k)));
  return worst;
}

class Suite {
 public:
  explicit Suite(std::ostream* log) : log_(log) {}

  CriterionResult run(int id) {
    CriterionResult res;
    res.id = id;
    res.title = title(id);
    Fingerprint fp;
    const auto start = std::chrono::steady_clock::now();
    try {
      res.pass = dispatch(id, fp, res.detail);
    } catch (const Error& e) {
      res.pass = false;
      res.detail = fmt::format("error: {}", e.what());
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.fingerprint = fp.hex();
    return res;
  }

  static std::string title(int id) {
    switch (id) {
      case 1: return "exact linear pair diagnostics";
      case 2: return "degree-2 harmonic oracle";
      case 3: return "1D heteroclinic profile";
      case 4: return "2D lift exactness and moving planes";
      case 5: return "blow-down trend";
      case 6: return "frequency monotonicity on the computed field";
      case 7: return "ACF shape and spherical Rayleigh quotients";
      case 8: return "segregation sweep";
      case 9: return "cosh decay oracle";
      case 10: return "determinism across worker counts";
      default: return "unknown";
    }
  }

 private:
  bool dispatch(int id, Fingerprint& fp, std::string& detail) {
    switch (id) {
      case 1: return c1(fp, detail);
      case 2: return c2(fp, detail);
      case 3: return c3(fp, detail);
      case 4: return c4(fp, detail);
      case 5: return c5(fp, detail);
      case 6: return c6(fp, detail);
      case 7: return c7(fp, detail);
      case 8: return c8(fp, detail);
      case 9: return c9(fp, detail);
      case 10: return c10(fp, detail);
      default: throw ConfigError(fmt::format("no acceptance criterion {}", id));
    }
  }

  void note(const std::string& msg) {
    if (log_ != nullptr) *log_ << "  .. " << msg << '\n' << std::flush;
  }

  const SolutionPair& linear() {
    if (!linear_) linear_ = exact_linear_pair(513);
    return *linear_;
  }

  const Profile1D& profile() {
    if (!profile_) {
      note("solving the 1D heteroclinic profile");
      HeteroclinicOptions opts;
      opts.L = 30.0;
      opts.n = 6001;
      opts.slope = 1.0;
      opts.tol = 1e-10;
      profile_ = solve_heteroclinic(opts);
    }
    return *profile_;
  }

  const SolutionPair& field() {
    if (!field_) {
      const GridSpec g = GridSpec::cube(2, -8.0, 8.0, 257);
      const BoundaryData bdry = boundary_from_profile(profile(), g, LiftMode::GridConsistent);
      SolveOptions opts;
      opts.tol = 1e-9;
      opts.omega = laplace_optimal_omega(g);
      note(fmt::format("solving the 2D lift problem on 257^2 (omega {:.4f})", *opts.omega));
      SolveResult res = solve(bdry, 1.0, opts);
      note(fmt::format("converged after {} + {} sweeps, residual {:.2e}", res.initial_sweeps, res.sweeps,
                       std::max(res.residual_u, res.residual_v)));
      field_ = std::move(res.pair);
    }
    return *field_;
  }

  // Three nodes on the interface band, spread along x_1.
  const std::vector<Point>& centers() {
    if (centers_.empty()) {
      const SolutionPair& f = field();
      const GridSpec& g = f.grid();
      for (double x1 : {-2.0, 0.0, 2.0}) {
        const int i = static_cast<int>(std::lround((x1 - g.lo(0)) / g.h()));
        int best = -1;
        double gap = 0.2;
        for (int k = 0; k < g.n(1); ++k) {
          const double d = std::abs(f.u().at({i, k, 0}) - f.v().at({i, k, 0}));
          if (d < gap) {
            gap = d;
            best = k;
          }
        }
        if (best < 0) throw StructureError(fmt::format("no node with |u - v| < 0.2 on the column x_1 = {}", x1));
        centers_.push_back(g.node(Index3{i, best, 0}));
      }
    }
    return centers_;
  }

  const std::vector<MonotonicityReport>& center_scans() {
    if (scans_.empty()) {
      for (const Point& x0 : centers()) scans_.push_back(almgren_scan(field(), x0, linspace(0.5, 5.0, 12)));
    }
    return scans_;
  }

  bool c1(Fingerprint& fp, std::string& detail) {
    const MonotonicityReport rep = almgren_scan(linear(), {0.0, 0.0, 0.0}, kScanRadii);
    const double eh = max_rel(rep.H, [&](std::size_t k) { return kPi * rep.radii[k] * rep.radii[k]; });
    double en = 0.0;
    for (double n : rep.N) en = std::max(en, std::abs(n - 1.0));
    const double ej = max_rel(rep.J, [](std::size_t) { return kPi * kPi / 4.0; });
    fp.add("H", rep.H);
    fp.add("E", rep.E);
    fp.add("N", rep.N);
    fp.add("J", rep.J);
    detail = fmt::format("max rel H err {:.2e} (<=1e-3), max |N-1| {:.2e} (<=5e-3), max rel J err {:.2e} (<=1e-2)", eh,
                         en, ej);
    return eh <= 1e-3 && en <= 5e-3 && ej <= 1e-2;
  }

  bool c2(Fingerprint& fp, std::string& detail) {
    const MonotonicityReport rep = almgren_scan(degree_two_pair(513), {0.0, 0.0, 0.0}, kScanRadii);
    double en = 0.0;
    for (double n : rep.N) en = std::max(en, std::abs(n - 2.0));
    const double ratio = rep.H[6] / rep.H[2];  // H(0.8)/H(0.4)
    const double er = std::abs(ratio - 16.0) / 16.0;
    fp.add("H", rep.H);
    fp.add("N", rep.N);
    detail = fmt::format("max |N-2| {:.2e} (<=1e-2), H(0.8)/H(0.4) = {:.5f}, rel err {:.2e} (<=2e-2)", en, ratio, er);
    return en <= 1e-2 && er <= 2e-2;
  }

  bool c3(Fingerprint& fp, std::string& detail) {
    const Profile1D& p = profile();
    bool monotone = true;
    for (std::size_t i = 1; i < p.u.size(); ++i) monotone = monotone && p.u[i] > p.u[i - 1] && p.v[i] < p.v[i - 1];
    const SymmetryCenter sc = center_and_symmetry_defect(p);
    const EnergyInvariant ei = energy_invariant(p);
    const DecayFit df = decay_fit(profile_pair(p), 1.0, 2.0, 7.5, 15.0);
    fp.add("u", p.u);
    fp.add("v", p.v);
    fp.add("decay", std::vector<double>{df.rate, df.amplitude, df.r_squared});
    detail = fmt::format(
        "residual {:.2e}, strictly monotone {}, symmetry defect {:.2e} (<=1e-6), energy deviation {:.2e} (<=1e-6; "
        "uncorrected {:.2e}), decay rate {:.3f} with r^2 {:.4f} (>=0.99)",
        p.residual_norm, monotone ? "yes" : "no", sc.defect, ei.max_deviation, ei.raw_max_deviation, df.rate,
        df.r_squared);
    return p.residual_norm <= 1e-10 && monotone && sc.defect <= 1e-6 && ei.max_deviation <= 1e-6 && df.rate < 0.0 &&
           df.r_squared >= 0.99;
  }

  bool c4(Fingerprint& fp, std::string& detail) {
    const SolutionPair& f = field();
    const double defect = one_dimensionality_defect(f);
    double worst_plane = 0.0;
    double min_cov = 1.0;
    std::vector<double> plane_values;
    for (double lambda : plane_heights(f.grid(), 25)) {
      const MovingPlaneReport mp = moving_plane_check(f, lambda);
      worst_plane = std::max({worst_plane, mp.max_violation_u, mp.max_violation_v});
      min_cov = std::min(min_cov, mp.coverage);
      plane_values.push_back(mp.max_violation_u);
      plane_values.push_back(mp.max_violation_v);
    }
    const double m_up = far_field_height(f, 1.0, 2.0, true);
    const double m_down = far_field_height(f, 1.0, 2.0, false);
    const double s2 = 1.0 / std::sqrt(2.0);
    const double s5 = 1.0 / std::sqrt(5.0);
    const std::vector<Vec3> dirs = {{0.0, 1.0, 0.0}, {s2, s2, 0.0}, {-s5, 2.0 * s5, 0.0}};
    double min_deriv = std::numeric_limits<double>::infinity();
    std::vector<double> derivs;
    for (const Vec3& nu : dirs) {
      const double up = directional_monotonicity(f, nu, true, m_up).min_derivative;
      const double down = directional_monotonicity(f, nu, false, m_down).min_derivative;
      derivs.push_back(up);
      derivs.push_back(down);
      min_deriv = std::min({min_deriv, up, down});
    }
    fp.add("u", f.u().values());
    fp.add("v", f.v().values());
    fp.add("planes", plane_values);
    fp.add("derivs", derivs);
    detail = fmt::format(
        "1D defect {:.2e} (<=1e-6), worst plane violation {:.2e} over 25 planes (<=1e-8, min coverage {:.2f}), "
        "far field M = {:.3f} / {:.3f}, min directional derivative {:.3e} (>0)",
        defect, worst_plane, min_cov, m_up, m_down, min_deriv);
    return defect <= 1e-6 && worst_plane <= 1e-8 && min_deriv > 0.0;
  }

  bool c5(Fingerprint& fp, std::string& detail) {
    const SolutionPair& f = field();
    const GridSpec ref = blowdown_grid(2, 129);
    std::vector<double> sup;
    std::vector<double> ratio;
    std::vector<double> h1;
    for (double R : {2.0, 3.0, 4.0, 5.0, 6.0}) {
      const BlowdownReport rep = blow_down(f, {0.0, 0.0, 0.0}, R, ref).report;
      sup.push_back(rep.sup_distance);
      ratio.push_back(rep.ratio);
      h1.push_back(rep.H1_distance);
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < sup.size(); ++k) decreasing = decreasing && sup[k] < sup[k - 1];
    const auto [rmin, rmax] = std::minmax_element(ratio.begin(), ratio.end());
    double mean = 0.0;
    for (double r : ratio) mean += r / static_cast<double>(ratio.size());
    const double band = (*rmax - *rmin) / mean;
    fp.add("sup", sup);
    fp.add("H1", h1);
    fp.add("ratio", ratio);
    detail = fmt::format("sup distances [{:.4f}], strictly decreasing {}, final {:.4f} (<=0.05), ratio band {:.1f}% of mean (<=30%)",
                         fmt::join(sup, ", "), decreasing ? "yes" : "no", sup.back(), 100.0 * band);
    return decreasing && sup.back() <= 0.05 && band <= 0.30;
  }

  bool c6(Fingerprint& fp, std::string& detail) {
    bool pass = true;
    std::vector<std::string> parts;
    for (const MonotonicityReport& rep : center_scans()) {
      const Verdict* vn = rep.verdict("N_nondecreasing");
      const Verdict* vi = rep.verdict("dH_identity");
      pass = pass && vn->pass && vi->pass;
      parts.push_back(fmt::format("x0=({:.2f},{:.3f}): N {:.3f}->{:.3f} max drop {:.1e}, identity dev {:.1e}", rep.x0[0],
                                  rep.x0[1], rep.N.front(), rep.N.back(), vn->max_violation, vi->max_violation));
      fp.add("N", rep.N);
      fp.add("H", rep.H);
    }
    detail = fmt::format("{} (slack 5e-3, tol 2e-2)", fmt::join(parts, "; "));
    return pass;
  }

  bool c7(Fingerprint& fp, std::string& detail) {
    bool pass = true;
    std::vector<std::string> parts;
    for (const MonotonicityReport& rep : center_scans()) {
      const AcfReport acf = acf_from_report(rep);
      pass = pass && acf.monotone.pass && std::isfinite(acf.C);
      parts.push_back(fmt::format("C={:.3g} band C4={:.3g}", acf.C, acf.band_C4));
      fp.add("J", acf.J);
    }
    const RayleighResult ray = spherical_rayleigh(linear(), {0.0, 0.0, 0.0}, 0.5);
    const bool ray_ok = std::abs(ray.Lambda1 - 1.0) <= 1e-2 && std::abs(ray.Lambda2 - 1.0) <= 1e-2 &&
                        std::abs(ray.gamma_sum - 2.0) <= 2e-2;
    fp.add("rayleigh", std::vector<double>{ray.Lambda1, ray.Lambda2, ray.gamma_sum});
    detail = fmt::format("corrected J nondecreasing at all centers: {} [{}]; Lambda1 {:.5f}, Lambda2 {:.5f}, gamma_sum {:.5f}",
                         pass ? "yes" : "no", fmt::join(parts, "; "), ray.Lambda1, ray.Lambda2, ray.gamma_sum);
    return pass && ray_ok;
  }

  bool c8(Fingerprint& fp, std::string& detail) {
    const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 129);
    const BoundaryData bdry = boundary_from_harmonic(1, 1.0, g);
    SweepOptions opts;
    opts.solve.tol = 1e-9;
    opts.solve.omega = laplace_optimal_omega(g);
    opts.alpha = 0.9;
    const SegregationTable table = sweep(bdry, {1.0, 4.0, 16.0, 64.0, 256.0}, opts);
    if (!table.complete) {
      detail = fmt::format("sweep incomplete: {}", table.failure);
      return false;
    }
    const auto& rows = table.rows;
    bool inter_dec = true;
    bool sup_dec = true;
    double hmin = rows[0].holder;
    double hmax = rows[0].holder;
    std::vector<double> inter, sup, harm, hold;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k > 0) {
        inter_dec = inter_dec && rows[k].interaction < rows[k - 1].interaction;
        sup_dec = sup_dec && rows[k].sup_uv < rows[k - 1].sup_uv;
      }
      hmin = std::min(hmin, rows[k].holder);
      hmax = std::max(hmax, rows[k].holder);
      inter.push_back(rows[k].interaction);
      sup.push_back(rows[k].sup_uv);
      harm.push_back(rows[k].harm_residual);
      hold.push_back(rows[k].holder);
    }
    const double harm_ratio = rows.back().harm_residual / rows.front().harm_residual;
    const double holder_factor = hmax / hmin;
    fp.add("interaction", inter);
    fp.add("sup_uv", sup);
    fp.add("harm", harm);
    fp.add("holder", hold);
    detail = fmt::format(
        "interaction [{:.4g}] strictly decreasing {}; sup uv [{:.4g}] strictly decreasing {}; harm residual [{:.4g}], "
        "ratio last/first {:.3g} (<=0.1); holder [{:.4g}], factor {:.3g} (<=3)",
        fmt::join(inter, ", "), inter_dec ? "yes" : "no", fmt::join(sup, ", "), sup_dec ? "yes" : "no",
        fmt::join(harm, ", "), harm_ratio, fmt::join(hold, ", "), holder_factor);
    return inter_dec && sup_dec && harm_ratio <= 0.1 && holder_factor <= 3.0;
  }

  bool c9(Fingerprint& fp, std::string& detail) {
    bool pass = true;
    double worst = 0.0;
    std::vector<std::string> rates;
    for (double K : {1.0, 4.0, 9.0}) {
      for (double L : {3.0, 5.0}) {
        const CoshOracle o = cosh_decay_oracle(K, 1.0, L);
        const double scaled = o.relative_error / (o.h * o.h);
        worst = std::max(worst, scaled);
        pass = pass && o.relative_error <= 5.0 * o.h * o.h;
        fp.add("mid", o.numeric_mid);
      }
      const double c = cosh_rate_fit(K, 1.0, {3.0, 5.0});
      pass = pass && c * std::sqrt(K) >= 0.9 * std::sqrt(K);
      rates.push_back(fmt::format("K={:g}: rate {:.4f} vs 0.9 sqrt(K) = {:.4f}", K, c * std::sqrt(K), 0.9 * std::sqrt(K)));
      fp.add("rate", c);
    }
    detail = fmt::format("max relative error / h^2 = {:.3e} (<=5); {}", worst, fmt::join(rates, "; "));
    return pass;
  }

  bool c10(Fingerprint& fp, std::string& detail) {
    const int saved = thread_count();
    std::vector<std::string> prints[2];
    const int counts[2] = {1, 8};
    for (int t = 0; t < 2; ++t) {
      set_thread_count(counts[t]);
      note(fmt::format("re-running criteria 1-5 with {} worker(s)", counts[t]));
      Suite fresh(nullptr);
      for (int id = 1; id <= 5; ++id) prints[t].push_back(fresh.run(id).fingerprint);
    }
    set_thread_count(saved);
    bool same = prints[0] == prints[1];
    std::vector<std::string> diffs;
    for (std::size_t k = 0; k < prints[0].size(); ++k) {
      if (prints[0][k] != prints[1][k]) diffs.push_back(std::to_string(k + 1));
    }
    for (const auto& s : prints[0]) fp.add(s, 0.0);
    detail = same ? fmt::format("fingerprints identical for 1 and 8 workers ({}...)", prints[0][3].substr(0, 16))
                  : fmt::format("fingerprints differ for criteria {}", fmt::join(diffs, ", "));
    return same;
  }

  std::ostream* log_;
  std::optional<SolutionPair> linear_;
  std::optional<Profile1D> profile_;
  std::optional<SolutionPair> field_;
  std::vector<Point> centers_;
  std::vector<MonotonicityReport> scans_;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream* log) {
  Suite suite(log);
  std::vector<CriterionResult> out;
  for (int id : ids) {
    if (log != nullptr) *log << fmt::format("criterion {}: {}\n", id, Suite::title(id)) << std::flush;
    out.push_back(suite.run(id));
    if (log != nullptr) {
      const auto& r = out.back();
      *log << fmt::format("criterion {}: {} ({:.1f} s)\n", id, r.pass ? "PASS" : "FAIL", r.seconds) << std::flush;
    }
  }
  return out;
}

bool print_acceptance_table(const std::vector<CriterionResult>& results, std::ostream& out) {
  int passed = 0;
  for (const auto& r : results) {
    out << fmt::format("[{}] criterion {:>2} {:<46} {:7.2f} s  {}\n", r.pass ? "PASS" : "FAIL", r.id, r.title,
                       r.seconds, r.detail);
    passed += r.pass ? 1 : 0;
  }
  out << fmt::format("{}/{} criteria passed\n", passed, results.size());
  return passed == static_cast<int>(results.size());
}

}  // namespace pslab
