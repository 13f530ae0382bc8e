#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/quadrature.hpp"

namespace pslab {

struct Verdict {
  std::string name;
  bool pass = true;
  /// Largest violation seen (0 when the property holds everywhere).
  double max_violation = 0.0;
  std::string detail;
};

/// Radial scan of the frequency quantities around one center.
struct MonotonicityReport {
  Point x0{};
  int dim = 0;
  double beta = 1.0;
  std::vector<double> radii;
  /// r^{1-N} ∫_{∂B_r} (u² + v²)
  std::vector<double> H;
  /// r^{2-N} ∫_{B_r} (|∇u|² + |∇v|² + β u² v²)
  std::vector<double> E;
  /// E/H; NaN below four cells, where stencil noise dominates.
  std::vector<double> N;
  /// r^{-4} Π_i ∫_{B_r} (|∇w_i|² + β u² v²) |y - x0|^{2-N}
  std::vector<double> J;
  /// ∫_{B_r} (u² + v²)
  std::vector<double> ball_mass;
  /// 2 r^{1-N} ∫_{B_r} (|∇u|² + |∇v|² + 2β u² v²), the closed form of dH/dr.
  std::vector<double> dH_identity;
  /// Centered difference of H at each radius.
  std::vector<double> dH_numeric;

  /// N at the largest radius with a reported N.
  double d_estimate = 0.0;
  long d_rounded = 0;
  double d_distance = 0.0;
  /// min over the scan of ball_mass / r^{N+2}.
  double mass_growth_floor = 0.0;

  std::vector<Verdict> verdicts;

  /// Verdict by name, or nullptr.
  const Verdict* verdict(const std::string& name) const;
  bool all_pass() const;
  double min_N() const;
  double max_N() const;
};

struct ScanOptions {
  /// Shells per ball integral; 0 picks max(8, 4r/h).
  int n_shells = 0;
  /// Allowed decrease of N between consecutive radii.
  double n_slack = 5e-3;
  /// Relative slack for H nondecreasing.
  double h_slack = 1e-3;
  /// Relative tolerance of the dH/dr identity cross-check.
  double identity_tol = 2e-2;
  /// Compute the centered difference of H and its cross-check.
  bool check_identity = true;
};

/// Degenerate-center threshold for H.
inline constexpr double kMinH = 1e-14;

/// H, E, N, J and ball mass at the given radii, with verdicts
///   "N_nondecreasing", "H_nondecreasing" and "dH_identity".
/// Throws DegenerateError when H ≤ 1e-14 and DomainError when a ball leaves
/// the box.
MonotonicityReport almgren_scan(const SolutionPair& pair, const Point& x0, const std::vector<double>& radii,
                                const ScanOptions& opts = {});

/// H alone at one radius (standard sphere quadrature).
double height(const SolutionPair& pair, const Point& x0, double r);

struct DoublingVerdict {
  bool pass = true;
  double d1 = 0.0;
  double d2 = 0.0;
  /// Worst relative margin; negative when a bound is violated.
  double worst_margin = 0.0;
  double worst_r1 = 0.0;
  double worst_r2 = 0.0;
  std::string worst_bound;
};

/// (r2/r1)^{2 d1} ≤ H(r2)/H(r1) ≤ e^{d2} (r2/r1)^{2 d2} for every pair of
/// scanned radii with a reported N, within 1e-3 relative.
///
/// Throws MisuseError when d1 exceeds N or d2 falls below N at some radius
/// (beyond 1e-2 quadrature slack).
DoublingVerdict check_doubling(const MonotonicityReport& report, double d1, double d2);

struct AcfReport {
  std::vector<double> radii;
  std::vector<double> J;
  /// Smallest C ≥ 0 making e^{-C r^{-1/2}} J nondecreasing on the scan
  /// (infinite when J drops to zero after being positive).
  double C = 0.0;
  std::vector<double> corrected;
  Verdict monotone;
  /// max(max J, 1/min J) over radii with J > 0: the tightest band [1/C4, C4].
  double band_C4 = 0.0;
};

/// ACF functional over radii with the fitted correction constant.
AcfReport acf_scan(const SolutionPair& pair, const Point& x0, const std::vector<double>& radii,
                   const ScanOptions& opts = {});
/// Same, from an existing scan.
AcfReport acf_from_report(const MonotonicityReport& report);

/// Γ(t) = sqrt(((N-2)/2)² + t) - (N-2)/2.
double gamma_function(double t, int dim);

struct RayleighResult {
  double Lambda1 = 0.0;
  double Lambda2 = 0.0;
  double gamma_sum = 0.0;
  /// Centered difference of log J at r.
  double dlogJ = 0.0;
  /// (-4 + 2·gamma_sum)/r
  double lower_bound = 0.0;
  bool inequality_holds = true;
};

/// Λ_i = r² ∫_{∂B_r} (|∇_θ w_i|² + β u² v²) / ∫_{∂B_r} w_i² with the tangential
/// gradient |∇w|² - (∂_ν w)², plus the cross-check
/// d/dr log J ≥ (-4 + 2·gamma_sum)/r - 2e-2/r.
///
/// Throws DegenerateError when either denominator is ≤ 1e-14.
RayleighResult spherical_rayleigh(const SolutionPair& pair, const Point& x0, double r);

struct GammaConstant {
  int dim = 0;
  double gamma = 0.0;
  /// ∫_{S^{N-1}} x_N² by quadrature.
  double second_moment = 0.0;
  /// |S^{N-1}|/N
  double closed_form = 0.0;
};

/// γ = (∫_{S^{N-1}} x_N² dσ)^{-1/2} for dim 2 or 3.
GammaConstant gamma_constant(int dim);

struct BlowdownReport {
  Point x0{};
  double R = 0.0;
  double sup_distance = 0.0;
  double H1_distance = 0.0;
  double H_value = 0.0;
  double ratio = 0.0;
  double beta_rescaled = 0.0;
};

struct BlowdownResult {
  SolutionPair pair;
  BlowdownReport report;
};

/// Reference grid [-1, 1]^dim with n nodes per axis.
GridSpec blowdown_grid(int dim, int n);

/// (u(x0 + R x), v(x0 + R x)) / sqrt(H(x0, R)) on ref_grid, which must
/// contain the unit ball. Nodes whose image leaves the source box take the
/// value at the nearest point of the box; the distances to (γx_N⁺, γx_N⁻)
/// only look at nodes in the closed unit ball. The rescaled pair carries
/// β' = β·H(x0, R)·R².
BlowdownResult blow_down(const SolutionPair& pair, const Point& x0, double R, const GridSpec& ref_grid);

struct GrowthEstimate {
  double p_estimate = 0.0;
  double mean_N = 0.0;
  double discrepancy = 0.0;
  bool consistent = true;
};

/// Half the least-squares slope of log H against log r. `consistent` is false
/// when |p - mean N| exceeds `tolerance` (or N is not available).
GrowthEstimate growth_exponent(const MonotonicityReport& report, double tolerance = 0.25);

/// Linear-in-k radii r0 + (r1 - r0)·k/(count - 1).
std::vector<double> linspace(double r0, double r1, int count);

}  // namespace pslab
