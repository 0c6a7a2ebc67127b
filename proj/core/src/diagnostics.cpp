#include "fracham/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracham {

double pohozaev_residual(const PairField& w, const NonlinearityFamily& fam, double V0) {
  return pohozaev_residual(w, fam, HalfForm(w.grid_ptr(), V0));
}

double pohozaev_residual(const PairField& w, const NonlinearityFamily& fam,
                         const HalfForm& form, const std::function<double(double)>& x_dV) {
  const Grid& g = w.grid();
  const auto& V = form.potential();
  double signed_sum = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double u = w.u()[j];
    const double v = w.v()[j];
    double FG;
    try {
      FG = fam.F(u) + fam.G(v);
    } catch (const OverflowGuard& e) {
      throw OverflowGuard(std::string(e.what()) + " in Pohozaev quadrature", g.x(j));
    }
    const double pot = V[j] * u * v;
    const double dil = x_dV ? x_dV(g.x(j)) * u * v : 0.0;
    signed_sum += FG - pot - dil;
    scale += std::abs(FG) + std::abs(pot) + std::abs(dil);
  }
  if (scale == 0.0) return 0.0;
  return std::abs(signed_sum) / scale;
}

double nehari_residual(const PairField& w, const NonlinearityFamily& fam, const HalfForm& form) {
  const double norm_sq = w_norm_sq(w, form);
  if (norm_sq == 0.0) return 0.0;
  const PairField r = el_residual(w, fam, form);
  const double ray = l2_inner(r.u(), w.u()) + l2_inner(r.v(), w.v());
  const double minus = l2_norm(r.u() - r.v());
  return std::max(std::abs(ray) / norm_sq, minus / std::sqrt(norm_sq));
}

namespace {

std::size_t peak_index(const PairField& w) {
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t j = 0; j < w.u().size(); ++j) {
    const double s = std::abs(w.u()[j]) + std::abs(w.v()[j]);
    if (s > best_val) {
      best_val = s;
      best = j;
    }
  }
  return best;
}

}  // namespace

long recenter_shift(const PairField& w) {
  return static_cast<long>(w.grid().origin_index()) - static_cast<long>(peak_index(w));
}

PairField recenter(const PairField& w) { return circular_shift(w, recenter_shift(w)); }

DecayMetrics decay_profile(const PairField& w) {
  const Grid& g = w.grid();
  const std::size_t n = g.size();
  DecayMetrics d;
  d.peak_index = peak_index(w);
  d.linf_u = linf_norm(w.u());
  d.linf_v = linf_norm(w.v());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::abs(w.u()[j]) + std::abs(w.v()[j]);
    d.amplitude = std::max(d.amplitude, s);
    const long off = static_cast<long>(j) - static_cast<long>(d.peak_index);
    const long nn = static_cast<long>(n);
    const long wrapped = ((off % nn) + nn + nn / 2) % nn - nn / 2;
    const double dist = std::abs(static_cast<double>(wrapped)) * g.spacing();
    if (dist >= 0.45 * g.length()) d.tail = std::max(d.tail, s);
    if (dist >= g.length() / 20.0 && dist <= 0.4 * g.length() && s > 0.0) {
      const double lx = std::log(dist), ly = std::log(s);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
  }
  if (count >= 2) {
    const double c = static_cast<double>(count);
    d.envelope_exponent = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  } else {
    d.envelope_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

ResidualReport residual_report(const PairField& w, const NonlinearityFamily& fam,
                               const HalfForm& form) {
  ResidualReport rep;
  const PairField r = el_residual(w, fam, form);
  rep.euler_lagrange_u = l2_norm(r.u());
  rep.euler_lagrange_v = l2_norm(r.v());
  rep.pohozaev = pohozaev_residual(w, fam, form);
  rep.nehari = nehari_residual(w, fam, form);
  const DecayMetrics d = decay_profile(w);
  rep.decay_tail = d.tail;
  rep.linf_u = d.linf_u;
  rep.linf_v = d.linf_v;
  return rep;
}

double asymmetry(const Field& u) {
  const std::size_t n = u.size();
  const std::size_t c = u.grid().origin_index();
  const double scale = linf_norm(u);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t j = 1; j < n / 2; ++j) {
    worst = std::max(worst, std::abs(u[c + j] - u[c - j]));
  }
  return worst / scale;
}

// --- Moser -------------------------------------------------------------------

MoserField moser_field(int n, double r1, const GridPtr& grid, double V0) {
  if (n < 2) throw Error("Moser index n must be >= 2");
  if (!(r1 > 0.0) || !(r1 < 0.5 * grid->length())) {
    throw Error("Moser radius r1 must lie in (0, L/2)");
  }
  if (grid->spacing() > r1 / (4.0 * n)) {
    std::ostringstream msg;
    msg << "grid spacing " << grid->spacing() << " does not resolve r1/n = " << r1 / n
        << " (need h <= r1/(4n) = " << r1 / (4.0 * n) << ")";
    throw UnderResolved(msg.str());
  }
  const double logn = std::log(static_cast<double>(n));
  const double sq = std::sqrt(logn);
  const double inner = r1 / n;
  Field raw = Field::sample(grid, [&](double x) {
    const double ax = std::abs(x);
    if (ax <= inner) return sq;
    if (ax <= r1) return std::log(r1 / ax) / sq;
    return 0.0;
  });
  const double norm = h_half_norm(raw, V0);
  Field normalized = raw * (1.0 / norm);
  return MoserField{n, r1, std::move(raw), std::move(normalized)};
}

double moser_mass(int n, double r1) {
  const double logn = std::log(static_cast<double>(n));
  const double a = r1 / n;
  // int_a^{r1} log(r1/x) dx = r1 - a - a log(r1/a)
  return 2.0 * (a * std::sqrt(logn) + (r1 - a - a * logn) / std::sqrt(logn));
}

double moser_l2_sq(int n, double r1) {
  const double logn = std::log(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  return 4.0 * r1 * (1.0 / logn - 1.0 / dn - 1.0 / (dn * logn));
}

LevelBoundCheck level_bound_check(double level, double beta0, double lower) {
  LevelBoundCheck c;
  c.lower_margin = level - lower;
  c.upper_margin = std::numbers::pi / beta0 - level;
  c.pass = std::isfinite(level) && c.lower_margin > 0.0 && c.upper_margin > 0.0;
  return c;
}

}  // namespace fracham
