#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "fracham/nehari.hpp"
#include "solver_detail.hpp"

namespace fracham {

void SolverConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error("invalid solver config: " + m); };
  if (!(inner_tol > 0.0)) fail("inner_tol must be positive");
  if (!(outer_tol > 0.0)) fail("outer_tol must be positive");
  if (max_inner < 1) fail("max_inner must be >= 1");
  if (max_outer < 1) fail("max_outer must be >= 1");
  if (restarts < 1) fail("restarts must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) fail("armijo_c must lie in (0, 1)");
  if (!(armijo_factor > 0.0 && armijo_factor < 1.0)) fail("armijo_factor must lie in (0, 1)");
  if (max_backtracks < 1) fail("max_backtracks must be >= 1");
  if (memory < 0) fail("memory must be >= 0");
  if (stagnation_window < 2) fail("stagnation_window must be >= 2");
  if (!(stagnation_delta >= 0.0)) fail("stagnation_delta must be >= 0");
  if (!(init_width > 0.0)) fail("init_width must be positive");
  if (!(restart_shift_fraction >= 0.0 && restart_shift_fraction < 0.5)) {
    fail("restart_shift_fraction must lie in [0, 0.5)");
  }
}

namespace detail {

Field riesz(const HalfForm& form, const Field& r) {
  return form.constant_potential() ? form.solve(r) : form.precondition(r);
}

}  // namespace detail

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// dJ/dt along t -> t (a, a) + (phi, -phi) with ||(a, a)||_W = 1.
double ray_slope(double t, const Field& a, const Field& phi, const NonlinearityFamily& fam) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double ta = t * a[j];
    acc += a[j] * (fam.f(ta + phi[j]) + fam.g(ta - phi[j]));
  }
  return t - acc * a.grid().spacing();
}

double phi_value(double t, const Field& a, const Field& phi, const NonlinearityFamily& fam) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double ta = t * a[j];
    acc += fam.F(ta + phi[j]) + fam.G(ta - phi[j]);
  }
  return acc * a.grid().spacing();
}

// Largest root of the ray slope reached from t0, or nullopt when the slope
// stays negative down to t ~ 0 (maximum at the origin).
std::optional<double> solve_ray(double t0, const Field& a, const Field& phi,
                                const NonlinearityFamily& fam) {
  auto eval = [&](double t, double& out) {
    try {
      out = ray_slope(t, a, phi, fam);
      return std::isfinite(out);
    } catch (const OverflowGuard&) {
      return false;
    }
  };
  const double floor_t = 1e-12;
  double t = std::max(t0, 1e-3);
  double ht = 0.0;
  double lo = 0.0, hi = 0.0;
  bool hi_ok = false;
  if (eval(t, ht) && ht > 0.0) {
    lo = t;
    for (int k = 0; k < 200; ++k) {
      const double t2 = 2.0 * lo;
      double h2;
      if (!eval(t2, h2)) {
        hi = t2;
        hi_ok = false;
        break;
      }
      if (h2 <= 0.0) {
        hi = t2;
        hi_ok = true;
        break;
      }
      lo = t2;
      if (k == 199) throw NoAscent("ray maximum not bracketed: J keeps increasing along the ray");
    }
  } else {
    hi = t;
    hi_ok = eval(t, ht);
    bool found = false;
    while (t > floor_t) {
      t *= 0.5;
      double hl;
      if (eval(t, hl)) {
        if (hl > 0.0) {
          lo = t;
          found = true;
          break;
        }
        hi = t;
        hi_ok = true;
      }
    }
    if (!found) return std::nullopt;
  }
  // Shrink an overflowing upper end until the slope is evaluable.
  while (!hi_ok) {
    const double mid = 0.5 * (lo + hi);
    double hm;
    if (!eval(mid, hm)) {
      hi = mid;
    } else if (hm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      hi_ok = true;
    }
    if (hi - lo <= 4.0 * kEps * hi) return lo;
  }
  double hlo, hhi;
  eval(lo, hlo);
  eval(hi, hhi);
  if (hhi == 0.0) return hi;
  std::uintmax_t max_iter = 200;
  auto f = [&](double x) { return ray_slope(x, a, phi, fam); };
  const auto [r0, r1] = boost::math::tools::toms748_solve(
      f, lo, hi, hlo, hhi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  // Pick the endpoint with the smaller slope magnitude.
  const double s0 = std::abs(f(r0));
  const double s1 = std::abs(f(r1));
  return s0 <= s1 ? r0 : r1;
}

// Solves (2A + diag(c)) y = r by preconditioned CG with (2 (|k| + mean V))^{-1}.
std::optional<Field> solve_curvature(const HalfForm& form, const std::vector<double>& c,
                                     const Field& r) {
  const auto op = [&](const Field& y) {
    Field out = form.apply(y) * 2.0;
    std::vector<double> vals(out.data());
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] += c[j] * y[j];
    return Field(y.grid_ptr(), std::move(vals));
  };
  const double rnorm = l2_norm(r);
  if (rnorm == 0.0) return Field::zeros(r.grid_ptr());
  Field x = Field::zeros(r.grid_ptr());
  Field res = r;
  Field z = form.precondition(res) * 0.5;
  Field dir = z;
  double rz = l2_inner(res, z);
  for (int k = 0; k < 400; ++k) {
    const Field q = op(dir);
    const double dq = l2_inner(dir, q);
    if (!(dq > 0.0)) return std::nullopt;
    const double alpha = rz / dq;
    x = axpy(x, alpha, dir);
    res = axpy(res, -alpha, q);
    if (l2_norm(res) <= 1e-13 * rnorm) return x;
    z = form.precondition(res) * 0.5;
    const double rz_new = l2_inner(res, z);
    dir = axpy(z, rz_new / rz, dir);
    rz = rz_new;
  }
  return x;
}

}  // namespace

NehariPoint inner_maximize(const PairField& direction, const NonlinearityFamily& fam,
                           const HalfForm& form, const SolverConfig& cfg,
                           const NehariPoint* warm) {
  const Decomposition dec = decompose(direction);
  const Field& a0 = dec.plus.u();
  const double plus_norm = std::sqrt(2.0 * form.norm_sq(a0));
  if (!(plus_norm > 1e-12)) {
    std::ostringstream msg;
    msg << "direction has no W+ component (||w+||_W = " << plus_norm << ")";
    throw NoAscent(msg.str());
  }
  const Field a = a0 * (1.0 / plus_norm);
  const Field Aa = form.apply(a);

  double t = warm ? warm->t : plus_norm;
  Field phi = warm ? warm->phi : dec.minus.u();
  auto energy_at = [&](double tt, const Field& ph) {
    return 0.5 * tt * tt - form.norm_sq(ph) - phi_value(tt, a, ph, fam);
  };
  double initial_energy = std::numeric_limits<double>::quiet_NaN();
  try {
    initial_energy = energy_at(plus_norm, dec.minus.u());
  } catch (const OverflowGuard&) {
    initial_energy = -std::numeric_limits<double>::infinity();
  }

  auto finish = [&](double tt, const Field& ph, double ray_res, double minus_res, int it) {
    NehariPoint out(PairField(axpy(ph, tt, a), axpy(-ph, tt, a)), a, ph);
    out.t = tt;
    out.energy = energy_at(tt, ph);
    out.initial_energy = initial_energy;
    out.ray_residual = ray_res;
    out.minus_residual = minus_res;
    out.iterations = it;
    return out;
  };

  const double h = a.grid().spacing();
  for (int it = 1; it <= cfg.max_inner; ++it) {
    const auto root = solve_ray(t, a, phi, fam);
    if (!root) {
      if (l2_norm(phi) <= 1e-12) {
        throw NoAscent("ray maximum degenerates to t = 0");
      }
      t = 0.0;
    } else {
      t = *root;
    }

    // W- gradient gm = r_u - r_v = -2 A phi - f(u) + g(v), plus the second
    // derivatives used by the reduced Newton step below.
    const Field Aphi = form.apply(phi);
    const std::size_t n = a.size();
    std::vector<double> gm(n), curv(n), cross(n);
    double ray_pair = 0.0;
    double a2curv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = t * a[j] + phi[j];
      const double v = t * a[j] - phi[j];
      const double fu = fam.f(u);
      const double gv = fam.g(v);
      const double dfu = fam.df(u);
      const double dgv = fam.dg(v);
      gm[j] = -2.0 * Aphi[j] - fu + gv;
      curv[j] = dfu + dgv;
      cross[j] = -a[j] * (dfu - dgv);
      a2curv += a[j] * a[j] * curv[j];
      const double Au = t * Aa[j] + Aphi[j];
      const double Av = t * Aa[j] - Aphi[j];
      ray_pair += (Av - fu) * u + (Au - gv) * v;
    }
    ray_pair *= h;
    const double h_tt = 1.0 - a2curv * h;
    const Field grad(a.grid_ptr(), std::move(gm));
    const Field p = detail::riesz(form, grad) * 0.5;
    const double gp = l2_inner(grad, p);  // = ||gm||_*^2 / 2
    const double phi_sq = form.norm_sq(phi);
    const double w_sq = t * t + 2.0 * phi_sq;
    const double ray_res = std::abs(ray_pair) / w_sq;
    const double minus_res = std::sqrt(std::max(gp, 0.0)) / std::sqrt(w_sq);

    if (ray_res <= cfg.inner_tol && minus_res <= cfg.inner_tol) {
      return finish(t, phi, ray_res, minus_res, it);
    }

    // Newton step for psi(phi) = max_t J(t, phi): with K = 2A + diag(f' + g')
    // and b = -a (f' - g'), the reduced Hessian is -(K - b b^T / |J_tt|).
    Field step = p;
    double slope = gp;
    if (h_tt < 0.0) {
      const std::vector<double> kdiag = curv;
      const Field b(a.grid_ptr(), std::move(cross));
      const auto y1 = solve_curvature(form, kdiag, grad);
      const auto y2 = solve_curvature(form, kdiag, b);
      if (y1 && y2) {
        const double denom = -h_tt - l2_inner(b, *y2);
        Field newton = *y1;
        if (denom > 0.0) newton = axpy(newton, l2_inner(b, *y1) / denom, *y2);
        const double s_newton = l2_inner(grad, newton);
        if (s_newton > 0.0) {
          step = std::move(newton);
          slope = s_newton;
        }
      }
    }

    // Armijo ascent on psi.
    const double psi0 = energy_at(t, phi);
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < cfg.max_backtracks; ++k, alpha *= cfg.armijo_factor) {
      Field trial = axpy(phi, alpha, step);
      double psi;
      double t_trial;
      try {
        const auto root = solve_ray(t, a, trial, fam);
        t_trial = root ? *root : 0.0;
        psi = energy_at(t_trial, trial);
      } catch (const OverflowGuard&) {
        continue;
      }
      if (psi >= psi0 + cfg.armijo_c * alpha * slope - 10.0 * kEps * std::abs(psi0)) {
        phi = std::move(trial);
        t = t_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted && ray_res <= cfg.inner_tol && minus_res <= 10.0 * cfg.inner_tol) {
      // Roundoff floor: no representable ascent remains.
      return finish(t, phi, ray_res, minus_res, it);
    }
  }
  std::ostringstream msg;
  msg << "inner maximization did not reach inner_tol = " << cfg.inner_tol << " in "
      << cfg.max_inner << " iterations";
  throw MaxIterations(msg.str());
}

NehariPoint inner_maximize(const PairField& direction, const NonlinearityFamily& fam, double V0,
                           double inner_tol) {
  SolverConfig cfg;
  cfg.inner_tol = inner_tol;
  return inner_maximize(direction, fam, HalfForm(direction.grid_ptr(), V0), cfg);
}

}  // namespace fracham
