#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "fracham/energy.hpp"

namespace fracham {

struct DecayMetrics {
  double tail = 0.0;       // max of |u|+|v| on the outer 10% of the box
  double amplitude = 0.0;  // max of |u|+|v|
  double linf_u = 0.0;
  double linf_v = 0.0;
  /// Least-squares slope of log(|u|+|v|) against log|x| on L/20 <= |x| <= 0.4 L
  /// (descriptive only; NaN when the band holds no positive samples).
  double envelope_exponent = 0.0;
  std::size_t peak_index = 0;
};

struct ResidualReport {
  double pohozaev = 0.0;
  double euler_lagrange_u = 0.0;  // ||A v - f(u)||_{L2}
  double euler_lagrange_v = 0.0;  // ||A u - g(v)||_{L2}
  double nehari = 0.0;
  double decay_tail = 0.0;
  double linf_u = 0.0;
  double linf_v = 0.0;
};

/// Normalized Pohozaev residual
///   |int (F(u) + G(v) - V uv - x V'(x) uv)| / int (F(u) + G(v) + |V uv| + |x V' uv|),
/// which reduces to |int (F + G - V0 uv)| / int (F + G + V0 |uv|) for constant V.
/// The x V' term is the dilation contribution of a non-constant potential.
/// Returns 0 for w = 0.
double pohozaev_residual(const PairField& w, const NonlinearityFamily& fam, double V0);
double pohozaev_residual(const PairField& w, const NonlinearityFamily& fam,
                         const HalfForm& form,
                         const std::function<double(double)>& x_dV = {});

/// Nehari-manifold residual: max of |<J'(w), w>| / ||w||_W^2 and the L2 norm of
/// the W- component of the residual, A(v - u) - f(u) + g(v), over ||w||_W.
double nehari_residual(const PairField& w, const NonlinearityFamily& fam, const HalfForm& form);

/// Circular shift by whole cells so that argmax(|u|+|v|) lands on the x = 0
/// grid index. Returns the shift applied.
long recenter_shift(const PairField& w);
PairField recenter(const PairField& w);

DecayMetrics decay_profile(const PairField& w);

ResidualReport residual_report(const PairField& w, const NonlinearityFamily& fam,
                               const HalfForm& form);

/// max_j |u(x_j) - u(-x_j)| / max |u| about the x = 0 grid index.
double asymmetry(const Field& u);

// --- Moser sequence ----------------------------------------------------------

struct MoserField {
  int n = 0;
  double r1 = 0.0;
  Field raw;         // omega_n
  Field normalized;  // omega_n / ||omega_n||_{1/2}
};

/// sqrt(log n) on |x| <= r1/n, log(r1/|x|)/sqrt(log n) on r1/n <= |x| <= r1,
/// 0 beyond. UnderResolved if h > r1 / (4n); Error if r1 >= L/2 or n < 2.
/// The normalization uses <.,.>_{1/2} with potential V0.
MoserField moser_field(int n, double r1, const GridPtr& grid, double V0 = 1.0);

/// Closed forms of the continuum profile: int omega_n and ||omega_n||_{L2}^2
/// = 4 r1 (1/log n - 1/n - 1/(n log n)).
double moser_mass(int n, double r1);
double moser_l2_sq(int n, double r1);

// --- Level bound ---------------------------------------------------------------

struct LevelBoundCheck {
  bool pass = false;
  double lower_margin = 0.0;  // level - lower
  double upper_margin = 0.0;  // pi / beta0 - level
};

/// Strict check lower < level < pi / beta0 (lower defaults to 0).
LevelBoundCheck level_bound_check(double level, double beta0, double lower = 0.0);

}  // namespace fracham
