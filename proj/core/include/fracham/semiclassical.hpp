#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracham/nehari.hpp"

namespace fracham {

/// Trapping potential with inf V = V0 < lim V = Vinf.
struct Potential {
  std::string name;
  double V0 = 1.0;
  double Vinf = 1.0;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> minimizers;

  /// V0 + (Vinf - V0) x^2 / (1 + x^2); unique minimum at 0.
  static Potential single_well(double V0, double Vinf);
  /// V0 + (Vinf - V0) q^2 / (q^2 + s^4) with q = x^2 - s^2; minima at +-s.
  static Potential double_well(double V0, double Vinf, double s);
  /// V == V0 (reduces to the autonomous problem).
  static Potential constant(double V0);

  bool is_constant() const noexcept { return name == "constant"; }
  double distance_to_minima(double x) const;

  /// Samples V(eps x) on the grid: V >= V0 - 1e-12 everywhere and, unless
  /// constant, |V(eps L/2) - Vinf| <= 0.05 Vinf. Throws Error otherwise.
  void validate(const Grid& grid, double eps) const;
};

/// Quadratic form with potential V_eps(x) = V(eps x) on the grid.
HalfForm rescaled_form(double eps, const Potential& pot, const GridPtr& grid);
/// x d/dx V(eps x) = eps x V'(eps x) (empty for a constant potential).
DilationTerm rescaled_dilation(double eps, const Potential& pot);

/// Ground state of the rescaled system with V_eps. Recentering is
/// reporting-only when V varies.
GroundStateResult solve_rescaled(double eps, const Potential& pot, const NonlinearityFamily& fam,
                                 const GridPtr& grid, const SolverConfig& cfg,
                                 const std::optional<PairField>& init = std::nullopt);

struct ThetaLevel {
  double theta = 0.0;
  double level = 0.0;
  double el_residual = 0.0;
  bool ok = false;
  /// Level dropped below the previous one by more than 2 outer_tol.
  bool monotonicity_violation = false;
  std::string error;
};

/// Autonomous levels with V0 replaced by each theta (ascending, positive).
std::vector<ThetaLevel> autonomous_level_vs_theta(const std::vector<double>& thetas,
                                                  const NonlinearityFamily& fam,
                                                  const GridPtr& grid, const SolverConfig& cfg);

struct SweepRecord {
  double eps = 0.0;
  bool ok = false;
  std::string status;
  double level = 0.0;
  double el_residual = 0.0;
  double y_eps = 0.0;   // argmax |u|+|v| in rescaled coordinates
  double x_eps = 0.0;   // eps * y_eps
  double dist_to_minima = 0.0;
  double x1 = 0.0;      // eps * argmax |u|
  double x2 = 0.0;      // eps * argmax |v|
  double gap12 = 0.0;   // |x1 - x2|
  /// ||recentered w - autonomous ground state||_W / ||autonomous||_W (V0 form).
  double profile_drift = 0.0;
  std::optional<PairField> solution;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // eps descending
  double autonomous_level = 0.0;
  double autonomous_el_residual = 0.0;
};

enum class SweepMode { Sequential, ParallelCold };

struct SweepOptions {
  SweepMode mode = SweepMode::Sequential;
  /// Initial peak offset in original coordinates; each solve starts from the
  /// (warm or autonomous) profile moved to y = offset / eps.
  double init_offset = 0.0;
  bool keep_solutions = false;
};

/// eps_list descending with at least 4 values and eps_max / eps_min >= 2.
/// Per-eps failures are recorded and the sweep continues.
SweepResult concentration_sweep(const std::vector<double>& eps_list, const Potential& pot,
                                const NonlinearityFamily& fam, const GridPtr& grid,
                                const SolverConfig& cfg, const SweepOptions& opts = {});

struct ConcentrationChecks {
  bool all_converged = false;
  bool levels_in_range = false;   // 0 < m_eps < pi / beta0 for every record
  bool dist_decreasing = false;   // d_{k+1} <= (1 + slack) d_k + eps_{k+1} h along the sweep
  bool final_dist_small = false;  // d at the smallest eps <= gap_cells * eps h
  bool gap_small = false;         // |x1 - x2| at the smallest eps <= gap_cells * eps h
  bool limsup_ok = false;         // m at the smallest eps <= limsup_factor * autonomous
  double final_dist = 0.0;
  double final_gap = 0.0;
  double limsup_ratio = 0.0;
  bool all() const noexcept {
    return all_converged && levels_in_range && dist_decreasing && final_dist_small && gap_small &&
           limsup_ok;
  }
};

/// `spacing` is the grid spacing h of the rescaled grid; distances in
/// original coordinates are compared against gap_cells * eps_min * h.
ConcentrationChecks check_concentration(const SweepResult& sweep, double beta0, double spacing,
                                        double slack = 0.2, double limsup_factor = 1.05,
                                        double gap_cells = 4.0);

/// Columns: epsilon,level,x_eps,dist_to_L,x1,x2,gap12,profile_drift,el_residual,status
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace fracham
