#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracham/diagnostics.hpp"
#include "fracham/energy.hpp"

namespace fracham {

struct SolverConfig {
  double inner_tol = 1e-10;
  double outer_tol = 1e-8;
  int max_inner = 500;
  int max_outer = 3000;
  int restarts = 5;
  std::uint64_t seed = 0;
  int threads = 1;
  double armijo_c = 1e-4;
  double armijo_factor = 0.5;
  int max_backtracks = 40;
  /// L-BFGS curvature pairs kept by the outer descent (0 = preconditioned
  /// steepest descent).
  int memory = 8;
  int stagnation_window = 50;
  double stagnation_delta = 1e-14;
  /// Width of the default Gaussian start exp(-x^2 / (2 width^2)).
  double init_width = 1.0;
  /// Integer-cell shifts of restarts k >= 1 are drawn from [-frac L, frac L].
  double restart_shift_fraction = 0.125;

  /// Throws Error naming the first violated constraint.
  void validate() const;
};

/// A point of the generalized Nehari manifold on the half-space through a
/// direction: w = t (a, a) + (phi, -phi) with ||(a, a)||_W = 1.
struct NehariPoint {
  NehariPoint(PairField w0, Field a0, Field phi0)
      : w(std::move(w0)), a(std::move(a0)), phi(std::move(phi0)) {}

  PairField w;
  Field a;
  Field phi;
  double t = 0.0;
  double energy = 0.0;
  double initial_energy = 0.0;
  /// |<J'(w), w>| / ||w||_W^2.
  double ray_residual = 0.0;
  /// sup over unit z in W- of |<J'(w), z>|, divided by ||w||_W (dual norm
  /// measured with the preconditioner metric when V varies).
  double minus_residual = 0.0;
  int iterations = 0;
};

/// Maximizes J over {t (a, a) + (phi, -phi) : t >= 0} where (a, a) is the
/// normalized diagonal part of `direction`. `warm` supplies starting values
/// of t and phi. NoAscent when the diagonal part is below 1e-12 in norm or
/// the maximum degenerates to t = 0; MaxIterations past cfg.max_inner.
NehariPoint inner_maximize(const PairField& direction, const NonlinearityFamily& fam,
                           const HalfForm& form, const SolverConfig& cfg,
                           const NehariPoint* warm = nullptr);
NehariPoint inner_maximize(const PairField& direction, const NonlinearityFamily& fam,
                           double V0, double inner_tol);

enum class SolveStatus { Converged, MaxIterations, Stagnation };
const char* to_string(SolveStatus s);

struct TraceRow {
  int iter = 0;
  double level = 0.0;
  double grad_norm = 0.0;
  int inner_iters = 0;
};

struct GroundStateResult {
  explicit GroundStateResult(PairField w0) : w(std::move(w0)) {}

  SolveStatus status = SolveStatus::MaxIterations;
  PairField w;
  double level = 0.0;       // J(w)
  double dual_level = 0.0;  // J(w) - <J'(w), w> / 2
  double ray_t = 0.0;
  double el_residual = 0.0;
  double nehari_residual = 0.0;
  double pohozaev_residual = 0.0;
  DecayMetrics decay;
  std::vector<TraceRow> trace;
  int outer_iters = 0;
  int restart_index = 0;
  /// Cells the reported w was shifted by (0 when V varies).
  long recenter_shift = 0;
  /// Grid coordinates of argmax |u|+|v|, argmax |u|, argmax |v| of the
  /// reported w.
  double peak_x = 0.0;
  double peak_u_x = 0.0;
  double peak_v_x = 0.0;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// x V'(x), used for the Pohozaev residual of a non-constant potential.
using DilationTerm = std::function<double(double)>;

/// Riemannian descent of F(a) = J(m(a)) over the unit sphere of the diagonal
/// subspace, starting from the diagonal part of `init`. Status instead of
/// exceptions for iteration limits; the best point so far is returned.
GroundStateResult outer_minimize(const PairField& init, const NonlinearityFamily& fam,
                                 const HalfForm& form, const SolverConfig& cfg,
                                 const DilationTerm& x_dV = {});
GroundStateResult outer_minimize(const PairField& init, const NonlinearityFamily& fam,
                                 double V0, const SolverConfig& cfg);

/// Centered Gaussian exp(-x^2 / (2 width^2)) on the diagonal, scaled to unit W norm.
PairField gaussian_start(const HalfForm& form, double width);

/// Start of restart k: restart 0 is `base` (or the default Gaussian), later
/// restarts are integer-cell translates (and, for the default start, width
/// variations) drawn from a generator seeded by (seed, k).
PairField restart_start(const HalfForm& form, const SolverConfig& cfg, int k,
                        const std::optional<PairField>& base = std::nullopt);

/// Multi-start driver: cfg.restarts independent outer_minimize runs on
/// cfg.threads workers; picks the lowest converged level (ties by restart
/// index), else the smallest residual. Deterministic for a given seed.
GroundStateResult ground_state(const NonlinearityFamily& fam, const HalfForm& form,
                               const SolverConfig& cfg,
                               const std::optional<PairField>& init = std::nullopt,
                               const DilationTerm& x_dV = {});

struct ScalarSolveConfig {
  double tol = 1e-10;
  int max_iter = 20000;
  double step = 0.5;
  double init_width = 1.0;
};

struct ScalarSolveResult {
  explicit ScalarSolveResult(Field u0) : u(std::move(u0)) {}

  Field u;
  double level = 0.0;  // J(u, u) = ||u||^2 - 2 int F(u)
  double residual = 0.0;  // ||A u - f(u)||_{L2}
  int iterations = 0;
  bool converged = false;
};

/// Independent oracle for f = g: ground state of A u = f(u) by
/// Nehari-projected preconditioned gradient descent on the scalar functional.
/// Error unless fam.symmetric().
ScalarSolveResult scalar_diagonal_solve(const NonlinearityFamily& fam, const HalfForm& form,
                                        const ScalarSolveConfig& cfg = {});

}  // namespace fracham
