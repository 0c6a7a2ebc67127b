#include "fracham/semiclassical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace fracham {

Potential Potential::single_well(double V0, double Vinf) {
  if (!(V0 > 0.0) || !(Vinf > V0)) throw Error("single_well needs 0 < V0 < Vinf");
  const double dv = Vinf - V0;
  Potential p;
  p.name = "single_well";
  p.V0 = V0;
  p.Vinf = Vinf;
  p.value = [V0, dv](double x) { return V0 + dv * x * x / (1.0 + x * x); };
  p.derivative = [dv](double x) {
    const double d = 1.0 + x * x;
    return dv * 2.0 * x / (d * d);
  };
  p.minimizers = {0.0};
  return p;
}

Potential Potential::double_well(double V0, double Vinf, double s) {
  if (!(V0 > 0.0) || !(Vinf > V0)) throw Error("double_well needs 0 < V0 < Vinf");
  if (!(s > 0.0)) throw Error("double_well needs a positive well offset");
  const double dv = Vinf - V0;
  const double s4 = s * s * s * s;
  Potential p;
  p.name = "double_well";
  p.V0 = V0;
  p.Vinf = Vinf;
  p.value = [V0, dv, s, s4](double x) {
    const double q = x * x - s * s;
    return V0 + dv * q * q / (q * q + s4);
  };
  // d/dx q^2/(q^2+s^4) = 2 q q' s^4 / (q^2+s^4)^2, q' = 2x.
  p.derivative = [dv, s, s4](double x) {
    const double q = x * x - s * s;
    const double d = q * q + s4;
    return dv * 4.0 * x * q * s4 / (d * d);
  };
  p.minimizers = {-s, s};
  return p;
}

Potential Potential::constant(double V0) {
  if (!(V0 > 0.0)) throw Error("constant potential needs V0 > 0");
  Potential p;
  p.name = "constant";
  p.V0 = V0;
  p.Vinf = V0;
  p.value = [V0](double) { return V0; };
  p.derivative = [](double) { return 0.0; };
  p.minimizers = {};
  return p;
}

double Potential::distance_to_minima(double x) const {
  if (minimizers.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double m : minimizers) best = std::min(best, std::abs(x - m));
  return best;
}

void Potential::validate(const Grid& grid, double eps) const {
  if (!(eps > 0.0)) throw Error("epsilon must be positive");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double v = value(eps * grid.x(j));
    if (!std::isfinite(v) || v < V0 - 1e-12) {
      std::ostringstream msg;
      msg << "potential '" << name << "' drops below V0 = " << V0 << " at x = " << grid.x(j);
      throw Error(msg.str());
    }
  }
  if (is_constant()) return;
  const double edge = value(eps * 0.5 * grid.length());
  if (std::abs(edge - Vinf) > 0.05 * Vinf) {
    std::ostringstream msg;
    msg << "box too small for eps = " << eps << ": V(eps L/2) = " << edge
        << " is not within 5% of Vinf = " << Vinf;
    throw Error(msg.str());
  }
}

HalfForm rescaled_form(double eps, const Potential& pot, const GridPtr& grid) {
  if (pot.is_constant()) return HalfForm(grid, pot.V0);
  std::vector<double> v(grid->size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = pot.value(eps * grid->x(j));
  return HalfForm(grid, std::move(v));
}

DilationTerm rescaled_dilation(double eps, const Potential& pot) {
  if (pot.is_constant()) return {};
  auto dv = pot.derivative;
  return [eps, dv](double x) { return eps * x * dv(eps * x); };
}

GroundStateResult solve_rescaled(double eps, const Potential& pot, const NonlinearityFamily& fam,
                                 const GridPtr& grid, const SolverConfig& cfg,
                                 const std::optional<PairField>& init) {
  pot.validate(*grid, eps);
  return ground_state(fam, rescaled_form(eps, pot, grid), cfg, init,
                      rescaled_dilation(eps, pot));
}

std::vector<ThetaLevel> autonomous_level_vs_theta(const std::vector<double>& thetas,
                                                  const NonlinearityFamily& fam,
                                                  const GridPtr& grid, const SolverConfig& cfg) {
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] > 0.0)) throw Error("theta values must be positive");
    if (i > 0 && !(thetas[i] > thetas[i - 1])) throw Error("theta values must be ascending");
  }
  std::vector<ThetaLevel> out;
  out.reserve(thetas.size());
  for (double th : thetas) {
    ThetaLevel row;
    row.theta = th;
    try {
      const GroundStateResult r = ground_state(fam, HalfForm(grid, th), cfg);
      row.level = r.level;
      row.el_residual = r.el_residual;
      row.ok = r.converged();
      if (!row.ok) row.error = to_string(r.status);
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (!out.empty() && out.back().ok && row.ok &&
        row.level < out.back().level - 2.0 * cfg.outer_tol) {
      row.monotonicity_violation = true;
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

long cells_for(double y, const Grid& g) { return std::lround(y / g.spacing()); }

void fill_record(SweepRecord& rec, const GroundStateResult& r, const Potential& pot,
                 const PairField& reference, const HalfForm& ref_form, double ref_norm) {
  rec.ok = r.converged();
  rec.status = to_string(r.status);
  rec.level = r.level;
  rec.el_residual = r.el_residual;
  rec.y_eps = r.peak_x;
  rec.x_eps = rec.eps * r.peak_x;
  rec.dist_to_minima = pot.distance_to_minima(rec.x_eps);
  rec.x1 = rec.eps * r.peak_u_x;
  rec.x2 = rec.eps * r.peak_v_x;
  rec.gap12 = std::abs(rec.x1 - rec.x2);
  const PairField centered = recenter(r.w);
  rec.profile_drift = std::sqrt(w_norm_sq(centered - reference, ref_form)) / ref_norm;
}

}  // namespace

SweepResult concentration_sweep(const std::vector<double>& eps_list, const Potential& pot,
                                const NonlinearityFamily& fam, const GridPtr& grid,
                                const SolverConfig& cfg, const SweepOptions& opts) {
  if (eps_list.size() < 4) throw Error("sweep needs at least 4 epsilon values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw Error("epsilon values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw Error("epsilon values must be strictly descending");
    }
  }
  if (eps_list.front() / eps_list.back() < 2.0) {
    throw Error("sweep needs a ratio of at least 2 between the extreme epsilons");
  }
  cfg.validate();

  const HalfForm ref_form(grid, pot.V0);
  const GroundStateResult autonomous = ground_state(fam, ref_form, cfg);
  const PairField reference = recenter(autonomous.w);
  const double ref_norm = std::sqrt(w_norm_sq(reference, ref_form));

  SweepResult out;
  out.autonomous_level = autonomous.level;
  out.autonomous_el_residual = autonomous.el_residual;
  out.records.resize(eps_list.size());

  auto start_for = [&](double eps, const PairField& profile) {
    return circular_shift(profile, cells_for(opts.init_offset / eps, *grid));
  };
  auto run_one = [&](std::size_t i, const PairField& init, const SolverConfig& c) {
    SweepRecord& rec = out.records[i];
    rec.eps = eps_list[i];
    try {
      const GroundStateResult r = solve_rescaled(rec.eps, pot, fam, grid, c, init);
      fill_record(rec, r, pot, reference, ref_form, ref_norm);
      if (opts.keep_solutions) rec.solution = r.w;
      return std::optional<PairField>(r.w);
    } catch (const Error& e) {
      rec.ok = false;
      rec.status = "error";
      rec.error = e.what();
      return std::optional<PairField>();
    }
  };

  if (opts.mode == SweepMode::Sequential) {
    PairField warm = reference;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      if (auto w = run_one(i, start_for(eps_list[i], warm), cfg)) warm = recenter(*w);
    }
  } else {
    SolverConfig inner = cfg;
    inner.threads = 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < eps_list.size(); i = next++) {
        run_one(i, start_for(eps_list[i], reference), inner);
      }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), eps_list.size());
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
    }
  }
  return out;
}

ConcentrationChecks check_concentration(const SweepResult& sweep, double beta0, double spacing,
                                        double slack, double limsup_factor, double gap_cells) {
  ConcentrationChecks c;
  const auto& recs = sweep.records;
  if (recs.empty()) return c;
  c.all_converged = std::all_of(recs.begin(), recs.end(), [](const auto& r) { return r.ok; });
  c.levels_in_range = std::all_of(recs.begin(), recs.end(), [&](const auto& r) {
    return level_bound_check(r.level, beta0).pass;
  });
  // A grid argmax only locates x_eps to one rescaled cell (eps h in original
  // coordinates), and a narrow core can sit pinned one cell off the well when
  // V(eps x) is nearly flat, so each step may also grow by that resolution.
  c.dist_decreasing = true;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double resolution = recs[i].eps * spacing;
    if (recs[i].dist_to_minima >
        (1.0 + slack) * recs[i - 1].dist_to_minima + resolution * (1.0 + 1e-9)) {
      c.dist_decreasing = false;
    }
  }
  const SweepRecord& last = recs.back();
  const double cell = gap_cells * last.eps * spacing;
  c.final_dist = last.dist_to_minima;
  c.final_gap = last.gap12;
  c.final_dist_small = last.dist_to_minima <= cell;
  c.gap_small = last.gap12 <= cell;
  c.limsup_ratio = last.level / sweep.autonomous_level;
  c.limsup_ok = last.ok && c.limsup_ratio <= limsup_factor;
  return c;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  const auto old_prec = os.precision(17);
  os << "epsilon,level,x_eps,dist_to_L,x1,x2,gap12,profile_drift,el_residual,status\n";
  for (const auto& r : sweep.records) {
    os << r.eps << ',' << r.level << ',' << r.x_eps << ',' << r.dist_to_minima << ',' << r.x1
       << ',' << r.x2 << ',' << r.gap12 << ',' << r.profile_drift << ',' << r.el_residual << ','
       << r.status << '\n';
  }
  os.precision(old_prec);
}

}  // namespace fracham
