#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "fracham/nehari.hpp"
#include "solver_detail.hpp"

namespace fracham {

namespace {

// Scalar Nehari constraint along the ray t u: q - int f(t u) u / t, with
// q = <u, u>. Positive near t = 0 for superlinear f.
double scalar_constraint(double t, double q, const Field& u, const NonlinearityFamily& fam) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += fam.f(t * u[j]) * u[j];
  return q - acc * u.grid().spacing() / t;
}

double nehari_scale(const Field& u, double q, const NonlinearityFamily& fam) {
  auto eval = [&](double t, double& out) {
    try {
      out = scalar_constraint(t, q, u, fam);
      return true;
    } catch (const OverflowGuard&) {
      return false;
    }
  };
  double lo = 1.0, hi = 1.0, hlo = 0.0, hhi = 0.0;
  if (eval(1.0, hlo) && hlo > 0.0) {
    for (hi = 2.0; eval(hi, hhi) && hhi > 0.0; hi *= 2.0) {
      lo = hi;
      hlo = hhi;
      if (hi > 1e12) throw NoAscent("scalar Nehari ray has no maximum");
    }
  } else {
    for (lo = 0.5; !(eval(lo, hlo) && hlo > 0.0); lo *= 0.5) {
      if (lo < 1e-12) throw NoAscent("scalar Nehari ray maximum at t = 0");
      hi = lo;
    }
  }
  while (!eval(hi, hhi)) hi = 0.5 * (lo + hi);
  if (hhi > 0.0) {
    // Overflow boundary reached with a positive constraint: bisect upward.
    double top = 2.0 * hi;
    while (top - hi > 1e-15 * top) {
      const double mid = 0.5 * (hi + top);
      double hm;
      if (eval(mid, hm) && hm > 0.0) {
        hi = mid;
      } else {
        top = mid;
      }
    }
    return hi;
  }
  std::uintmax_t max_iter = 200;
  const auto [r0, r1] = boost::math::tools::toms748_solve(
      [&](double t) { return scalar_constraint(t, q, u, fam); }, lo, hi, hlo, hhi,
      boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (r0 + r1);
}

}  // namespace

ScalarSolveResult scalar_diagonal_solve(const NonlinearityFamily& fam, const HalfForm& form,
                                        const ScalarSolveConfig& cfg) {
  if (!fam.symmetric()) {
    throw Error("scalar diagonal solve requires f = g (family '" + fam.name + "')");
  }
  const double s = 1.0 / (2.0 * cfg.init_width * cfg.init_width);
  Field u = Field::sample(form.grid_ptr(), [s](double x) { return std::exp(-s * x * x); });
  double residual = 0.0;
  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iter; ++it) {
    u *= nehari_scale(u, form.norm_sq(u), fam);
    const Field r = form.apply(u) - apply_f(u, fam);
    residual = l2_norm(r);
    if (residual <= cfg.tol) {
      converged = true;
      break;
    }
    u = axpy(u, -cfg.step, detail::riesz(form, r));
  }
  double F_int = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) F_int += fam.F(u[j]);
  F_int *= u.grid().spacing();
  ScalarSolveResult out(u);
  out.level = form.norm_sq(u) - 2.0 * F_int;
  out.residual = residual;
  out.iterations = it;
  out.converged = converged;
  return out;
}

}  // namespace fracham
