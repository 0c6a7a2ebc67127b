#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "fracham/nehari.hpp"
#include "solver_detail.hpp"

namespace fracham {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max_iterations";
    case SolveStatus::Stagnation:
      return "stagnation";
  }
  return "unknown";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::size_t argmax_abs(const Field& u) {
  const auto vals = u.values();
  const auto it = std::max_element(vals.begin(), vals.end(),
                                   [](double p, double q) { return std::abs(p) < std::abs(q); });
  return static_cast<std::size_t>(it - vals.begin());
}

GroundStateResult finalize(const NehariPoint& p, const NonlinearityFamily& fam,
                           const HalfForm& form, const DilationTerm& x_dV, SolveStatus status,
                           std::vector<TraceRow> trace, int iters) {
  long shift = form.constant_potential() ? recenter_shift(p.w) : 0;
  GroundStateResult r(shift != 0 ? circular_shift(p.w, shift) : p.w);
  r.status = status;
  r.recenter_shift = shift;
  r.ray_t = p.t;
  r.level = energy(r.w, fam, form);
  r.dual_level = dual_level(r.w, fam);
  r.el_residual = el_residual_norm(r.w, fam, form);
  r.nehari_residual = nehari_residual(r.w, fam, form);
  r.pohozaev_residual = pohozaev_residual(r.w, fam, form, x_dV);
  r.decay = decay_profile(r.w);
  const Grid& g = r.w.grid();
  r.peak_x = g.x(r.decay.peak_index);
  r.peak_u_x = g.x(argmax_abs(r.w.u()));
  r.peak_v_x = g.x(argmax_abs(r.w.v()));
  r.trace = std::move(trace);
  r.outer_iters = iters;
  return r;
}

// Uniform double in [0, 1) from raw generator bits (portable across libraries).
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Limited-memory BFGS two-loop recursion with initial inverse Hessian
// gamma P^{-1} (P the Riesz map of the form). Without history this returns
// the preconditioned gradient d0.
struct Pair {
  Field s;
  Field y;
  double rho;
};

Field lbfgs_direction(const Field& G, const Field& d0, const std::deque<Pair>& history,
                      const HalfForm& form, double t) {
  if (history.empty()) return d0;
  Field q = G;
  std::vector<double> alphas(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alphas[i] = history[i].rho * l2_inner(history[i].s, q);
    q = axpy(q, -alphas[i], history[i].y);
  }
  const Pair& last = history.back();
  const Field Py = detail::riesz(form, last.y);
  const double yPy = l2_inner(last.y, Py);
  const double gamma = yPy > 0.0 ? 1.0 / (last.rho * yPy) : 0.5 / (t * t);
  Field z = detail::riesz(form, q) * gamma;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * l2_inner(history[i].y, z);
    z = axpy(z, alphas[i] - beta, history[i].s);
  }
  return z;
}

}  // namespace

GroundStateResult outer_minimize(const PairField& init, const NonlinearityFamily& fam,
                                 const HalfForm& form, const SolverConfig& cfg,
                                 const DilationTerm& x_dV) {
  cfg.validate();
  NehariPoint cur = inner_maximize(init, fam, form, cfg);
  std::vector<TraceRow> trace;
  std::vector<double> levels;
  std::vector<double> residuals;
  std::deque<Pair> history;
  std::optional<Field> prev_a;
  std::optional<Field> prev_G;
  SolveStatus status = SolveStatus::MaxIterations;
  int iter = 0;
  for (;; ++iter) {
    const PairField r = el_residual(cur.w, fam, form);
    const Field rs = r.u() + r.v();  // A(u + v) - f(u) - g(v)
    const double el = std::sqrt(l2_inner(r.u(), r.u()) + l2_inner(r.v(), r.v()));

    // Euclidean gradient of F on the sphere: <F'(a), z> = t int z r.
    Field G = rs * cur.t;
    // Preconditioned gradient, scaled so that a - d0 is the fixed-point
    // update A^{-1}(f(u) + g(v)) / (2t) when V is constant and phi = 0.
    Field d0 = detail::riesz(form, rs) * (0.5 / cur.t);
    d0 = axpy(d0, -2.0 * form.inner(d0, cur.a), cur.a);
    const double grad_norm = cur.t * cur.t * std::sqrt(2.0 * std::max(form.norm_sq(d0), 0.0));

    if (prev_a && cfg.memory > 0) {
      Field sk = cur.a - *prev_a;
      Field yk = G - *prev_G;
      const double sy = l2_inner(sk, yk);
      if (sy > 1e-14 * l2_norm(sk) * l2_norm(yk)) {
        history.push_back(Pair{std::move(sk), std::move(yk), 1.0 / sy});
        if (static_cast<int>(history.size()) > cfg.memory) history.pop_front();
      }
    }
    Field d = lbfgs_direction(G, d0, history, form, cur.t);
    d = axpy(d, -2.0 * form.inner(d, cur.a), cur.a);
    double slope = l2_inner(G, d);
    if (!(slope > 0.0)) {
      history.clear();
      d = d0;
      slope = l2_inner(G, d);
    }
    trace.push_back(TraceRow{iter, cur.energy, grad_norm, cur.iterations});
    levels.push_back(cur.energy);
    residuals.push_back(el);

    if (el <= cfg.outer_tol) {
      status = SolveStatus::Converged;
      break;
    }
    if (iter >= cfg.max_outer) {
      status = SolveStatus::MaxIterations;
      break;
    }
    const int win = cfg.stagnation_window;
    if (iter >= 2 * win) {
      const double change = std::abs(levels[iter - win] - levels[iter]);
      const double before = *std::min_element(residuals.begin(), residuals.end() - win);
      const double recent = *std::min_element(residuals.end() - win, residuals.end());
      if (change < cfg.stagnation_delta * std::max(1.0, std::abs(levels[iter])) &&
          recent > 0.5 * before) {
        status = SolveStatus::Stagnation;
        break;
      }
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < cfg.max_backtracks; ++k, alpha *= cfg.armijo_factor) {
      const Field a_try = axpy(cur.a, -alpha, d);
      try {
        NehariPoint next = inner_maximize(PairField(a_try, a_try), fam, form, cfg, &cur);
        if (next.energy <= cur.energy - cfg.armijo_c * alpha * slope +
                               10.0 * kEps * std::abs(cur.energy)) {
          prev_a = cur.a;
          prev_G = G;
          cur = std::move(next);
          accepted = true;
          break;
        }
      } catch (const NoAscent&) {
      } catch (const OverflowGuard&) {
      } catch (const MaxIterations&) {
      }
    }
    if (!accepted && !history.empty()) {
      // Drop curvature memory and retry once along the preconditioned gradient.
      history.clear();
      prev_a.reset();
      prev_G.reset();
      --iter;
      trace.pop_back();
      levels.pop_back();
      residuals.pop_back();
      continue;
    }
    if (!accepted) {
      status = SolveStatus::Stagnation;
      break;
    }
  }
  return finalize(cur, fam, form, x_dV, status, std::move(trace), iter);
}

GroundStateResult outer_minimize(const PairField& init, const NonlinearityFamily& fam, double V0,
                                 const SolverConfig& cfg) {
  return outer_minimize(init, fam, HalfForm(init.grid_ptr(), V0), cfg);
}

PairField gaussian_start(const HalfForm& form, double width) {
  const double s = 1.0 / (2.0 * width * width);
  Field a = Field::sample(form.grid_ptr(), [s](double x) { return std::exp(-s * x * x); });
  a *= 1.0 / std::sqrt(2.0 * form.norm_sq(a));
  return PairField(a, a);
}

PairField restart_start(const HalfForm& form, const SolverConfig& cfg, int k,
                        const std::optional<PairField>& base) {
  if (k == 0) return base ? *base : gaussian_start(form, cfg.init_width);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(cfg.seed >> 32), static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  const double width = cfg.init_width * std::exp(std::log(2.0) * (2.0 * unit_draw(rng) - 1.0));
  const Grid& g = form.grid();
  const long max_cells =
      static_cast<long>(std::floor(cfg.restart_shift_fraction * g.length() / g.spacing()));
  const long shift = static_cast<long>(std::floor(unit_draw(rng) * (2 * max_cells + 1))) - max_cells;
  const PairField start = base ? *base : gaussian_start(form, width);
  return circular_shift(start, shift);
}

GroundStateResult ground_state(const NonlinearityFamily& fam, const HalfForm& form,
                               const SolverConfig& cfg, const std::optional<PairField>& init,
                               const DilationTerm& x_dV) {
  cfg.validate();
  const int n = cfg.restarts;
  std::vector<std::optional<GroundStateResult>> results(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < n; k = next++) {
      const auto idx = static_cast<std::size_t>(k);
      try {
        results[idx].emplace(outer_minimize(restart_start(form, cfg, k, init), fam, form, cfg, x_dV));
        results[idx]->restart_index = k;
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  const int workers = std::min(cfg.threads, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  const GroundStateResult* best = nullptr;
  for (const auto& r : results) {
    if (r && r->converged() && (!best || r->level < best->level)) best = &*r;
  }
  if (!best) {
    for (const auto& r : results) {
      if (r && (!best || r->el_residual < best->el_residual)) best = &*r;
    }
  }
  if (!best) std::rethrow_exception(errors.front());
  return *best;
}

}  // namespace fracham
