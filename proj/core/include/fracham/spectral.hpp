#pragma once

#include <vector>

#include "fracham/grid.hpp"

namespace fracham {

/// Fourier multiplier |k|^{2s}; the zero mode maps to exactly 0.
Field apply_fractional_laplacian(const Field& u, SpectralExponent s);

/// ||(-Delta)^{1/4} u||^2 over the periodic box.
double seminorm_sq(const Field& u);
/// int (-Delta)^{1/4} u (-Delta)^{1/4} v over the periodic box.
double seminorm_inner(const Field& u, const Field& v);

/// <u, v>_{1/2} = int (-Delta)^{1/4}u (-Delta)^{1/4}v + V0 int u v.
double h_half_inner(const Field& u, const Field& v, double V0);
double h_half_norm(const Field& u, double V0);

// Uniform-weight quadrature h * sum; exact for band-limited periodic data.
double l2_inner(const Field& u, const Field& v);
double l2_norm(const Field& u);
double linf_norm(const Field& u);
double integrate(const Field& u);

/// The quadratic form <u, v> = int (-Delta)^{1/4}u (-Delta)^{1/4}v + int V uv
/// for a constant or sampled potential, together with its operator
/// A = (-Delta)^{1/2} + V and the preconditioner (|k| + mean V)^{-1}, which is
/// the exact inverse when V is constant.
class HalfForm {
 public:
  HalfForm(GridPtr grid, double V0);
  HalfForm(GridPtr grid, std::vector<double> potential);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  bool constant_potential() const noexcept { return constant_; }
  double mean_potential() const noexcept { return mean_v_; }
  double min_potential() const noexcept { return min_v_; }
  /// Sampled V (filled with the constant for a constant potential).
  const std::vector<double>& potential() const noexcept { return v_; }

  Field apply(const Field& u) const;
  Field precondition(const Field& r) const;
  /// Solves A x = r (exact multiplier inverse, or PCG to ~1e-14 when V varies).
  Field solve(const Field& r) const;

  double inner(const Field& u, const Field& v) const;
  double norm_sq(const Field& u) const { return inner(u, u); }

 private:
  GridPtr grid_;
  std::vector<double> v_;
  bool constant_;
  double mean_v_;
  double min_v_;
};

}  // namespace fracham
