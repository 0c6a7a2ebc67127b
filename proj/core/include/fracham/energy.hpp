#pragma once

#include "fracham/grid.hpp"
#include "fracham/nonlinearity.hpp"
#include "fracham/spectral.hpp"

namespace fracham {

/// w = (u, v) in W = H^{1/2} x H^{1/2}; both components share one grid.
class PairField {
 public:
  PairField(Field u, Field v);
  static PairField zeros(GridPtr grid);

  const Field& u() const noexcept { return u_; }
  const Field& v() const noexcept { return v_; }
  const Grid& grid() const noexcept { return u_.grid(); }
  const GridPtr& grid_ptr() const noexcept { return u_.grid_ptr(); }

  PairField& operator+=(const PairField& o);
  PairField& operator-=(const PairField& o);
  PairField& operator*=(double s);
  friend PairField operator+(PairField a, const PairField& b) { return a += b; }
  friend PairField operator-(PairField a, const PairField& b) { return a -= b; }
  friend PairField operator*(double s, PairField a) { return a *= s; }

 private:
  Field u_;
  Field v_;
};

PairField circular_shift(const PairField& w, long cells);

/// w = plus + minus with plus = (a, a) in W+ and minus = (b, -b) in W-.
struct Decomposition {
  PairField plus;
  PairField minus;
};

Decomposition decompose(const PairField& w);

/// <w1, w2>_W = <u1, u2> + <v1, v2> in the given form.
double w_inner(const PairField& a, const PairField& b, const HalfForm& form);
double w_norm_sq(const PairField& w, const HalfForm& form);

/// Pointwise f(u) / g(v); overflow is re-raised with the grid coordinate.
Field apply_f(const Field& u, const NonlinearityFamily& fam);
Field apply_g(const Field& v, const NonlinearityFamily& fam);

/// Phi(w) = int (F(u) + G(v)).
double phi(const PairField& w, const NonlinearityFamily& fam);
/// <Phi'(w), w> = int (f(u) u + g(v) v).
double phi_prime_pairing(const PairField& w, const NonlinearityFamily& fam);

/// J(w) = <u, v> - Phi(w).
double energy(const PairField& w, const NonlinearityFamily& fam, const HalfForm& form);
double energy(const PairField& w, const NonlinearityFamily& fam, double V0);

/// J(w) - <J'(w), w> / 2 = int (f(u)u/2 - F(u)) + int (g(v)v/2 - G(v)).
double dual_level(const PairField& w, const NonlinearityFamily& fam);

/// Strong-form (L2) Euler-Lagrange residual
///   (A v - f(u), A u - g(v)),  A = (-Delta)^{1/2} + V.
/// Its L2 pairing with (phi, psi) is <J'(w), (phi, psi)>.
PairField el_residual(const PairField& w, const NonlinearityFamily& fam, const HalfForm& form);

/// Riesz representative of J'(w) in the W inner product: A^{-1} applied to
/// each component of el_residual.
PairField energy_gradient(const PairField& w, const NonlinearityFamily& fam,
                          const HalfForm& form);
PairField energy_gradient(const PairField& w, const NonlinearityFamily& fam, double V0);

/// <J'(w), z> = <u, z_v> + <v, z_u> - int (f(u) z_u + g(v) z_v).
double derivative_pairing(const PairField& w, const PairField& z,
                          const NonlinearityFamily& fam, const HalfForm& form);

/// sqrt(||A v - f(u)||^2 + ||A u - g(v)||^2) in L2.
double el_residual_norm(const PairField& w, const NonlinearityFamily& fam,
                        const HalfForm& form);

}  // namespace fracham
