#pragma once

// Test-side reference computations. None of these call into the library's
// spectral or solver code; they rebuild each quantity from its definition.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fracham/energy.hpp"
#include "fracham/grid.hpp"

namespace fracham::testing {

/// Periodized hypersingular kernel sum_m 1/(s + m L)^2 = (pi/L)^2 / sin^2(pi s / L).
double periodic_kernel(double s, double L);

/// (1/pi) PV int (u(x) - u(y)) K_L(x - y) dy for an L-periodic u given by a
/// callable, by adaptive Gauss-Kronrod on the symmetrized integrand
/// (2u(x) - u(x+s) - u(x-s)) K_L(s) over 0 < s < L/2.
double pv_half_laplacian(const std::function<double(double)>& u, double x, double L);

/// (1/2pi) sum_{i != j} h^2 (u_i - u_j)(v_i - v_j) K_L(x_i - x_j): the
/// Gagliardo form on the sampled field, diagonal excluded.
double gagliardo_double_sum(const Field& u, const Field& v);

/// int_0^t f(s) ds by adaptive Gauss-Kronrod.
double primitive_by_quadrature(const std::function<double(double)>& f, double t);

/// Positive root of dJ/dt for J(t) = t^2 q - 2 int F(t a) with F(s) = s^4 / 4,
/// found by bisection (cubic surrogate on the diagonal with phi = 0).
double cubic_ray_root(const Field& a, double q);

/// Deterministic generator for randomized fields.
class FieldSampler {
 public:
  explicit FieldSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  /// Sum of 1-4 Gaussian bumps with random centers in the middle half of the
  /// box, widths in [0.5, 2.5] and signed amplitudes up to `amp`.
  Field bumps(const GridPtr& grid, double amp);
  PairField pair(const GridPtr& grid, double amp);

 private:
  std::mt19937_64 rng_;
};

}  // namespace fracham::testing
