#include "fracham/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fracham {

namespace {

Field apply_symbol(const Field& u, auto&& symbol) {
  const Grid& g = u.grid();
  Spectrum uh;
  g.forward(u.values(), uh);
  const auto& k = g.abs_wavenumbers();
  for (std::size_t j = 0; j < uh.size(); ++j) uh[j] *= symbol(k[j]);
  std::vector<double> out(g.size());
  g.inverse(uh, out);
  return Field(u.grid_ptr(), std::move(out));
}

// (h / N) * sum over the full spectrum of sym(k) Re(uh conj(vh)), folded onto
// the half-complex layout.
double spectral_pairing(const Field& u, const Field& v, auto&& symbol) {
  require_same_grid(u, v);
  const Grid& g = u.grid();
  Spectrum uh, vh;
  g.forward(u.values(), uh);
  const bool same = &u == &v;
  if (!same) g.forward(v.values(), vh);
  const Spectrum& wv = same ? uh : vh;
  const auto& k = g.abs_wavenumbers();
  const std::size_t last = uh.size() - 1;
  double acc = 0.0;
  for (std::size_t j = 0; j <= last; ++j) {
    const double weight = (j == 0 || j == last) ? 1.0 : 2.0;
    acc += weight * symbol(k[j]) *
           (uh[j].real() * wv[j].real() + uh[j].imag() * wv[j].imag());
  }
  return acc * g.spacing() / static_cast<double>(g.size());
}

}  // namespace

Field apply_fractional_laplacian(const Field& u, SpectralExponent s) {
  const double p = 2.0 * s.value();
  if (p == 1.0) {
    return apply_symbol(u, [](double k) { return k; });
  }
  return apply_symbol(u, [p](double k) { return k == 0.0 ? 0.0 : std::pow(k, p); });
}

double seminorm_inner(const Field& u, const Field& v) {
  return spectral_pairing(u, v, [](double k) { return k; });
}

double seminorm_sq(const Field& u) { return seminorm_inner(u, u); }

double h_half_inner(const Field& u, const Field& v, double V0) {
  return spectral_pairing(u, v, [V0](double k) { return k + V0; });
}

double h_half_norm(const Field& u, double V0) {
  return std::sqrt(h_half_inner(u, u, V0));
}

double l2_inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  const auto a = u.values();
  const auto b = v.values();
  return u.grid().spacing() * std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double l2_norm(const Field& u) { return std::sqrt(l2_inner(u, u)); }

double linf_norm(const Field& u) {
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::abs(x));
  return m;
}

double integrate(const Field& u) {
  const auto a = u.values();
  return u.grid().spacing() * std::accumulate(a.begin(), a.end(), 0.0);
}

// --- HalfForm ----------------------------------------------------------------

HalfForm::HalfForm(GridPtr grid, double V0)
    : grid_(std::move(grid)), v_(grid_->size(), V0), constant_(true),
      mean_v_(V0), min_v_(V0) {
  if (!(V0 > 0.0)) throw Error("potential V0 must be positive");
}

HalfForm::HalfForm(GridPtr grid, std::vector<double> potential)
    : grid_(std::move(grid)), v_(std::move(potential)), constant_(false) {
  if (v_.size() != grid_->size()) {
    throw GridMismatch("potential samples do not match grid size");
  }
  min_v_ = *std::min_element(v_.begin(), v_.end());
  if (!(min_v_ > 0.0)) throw Error("potential must be positive on the grid");
  mean_v_ = std::accumulate(v_.begin(), v_.end(), 0.0) / static_cast<double>(v_.size());
  constant_ = std::all_of(v_.begin(), v_.end(), [&](double x) { return x == v_.front(); });
}

Field HalfForm::apply(const Field& u) const {
  if (constant_) {
    const double c = v_.front();
    return apply_symbol(u, [c](double k) { return k + c; });
  }
  Field lap = apply_fractional_laplacian(u, SpectralExponent::half());
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = lap[j] + v_[j] * u[j];
  return Field(u.grid_ptr(), std::move(out));
}

Field HalfForm::precondition(const Field& r) const {
  const double c = mean_v_;
  return apply_symbol(r, [c](double k) { return 1.0 / (k + c); });
}

Field HalfForm::solve(const Field& r) const {
  if (constant_) return precondition(r);
  // Preconditioned CG on the L2-symmetric positive operator A.
  Field x = precondition(r);
  Field res = r - apply(x);
  Field z = precondition(res);
  Field p = z;
  double rz = l2_inner(res, z);
  const double stop = 1e-28 * std::max(l2_inner(r, r), 1e-300);
  for (int it = 0; it < 200 && l2_inner(res, res) > stop; ++it) {
    const Field ap = apply(p);
    const double alpha = rz / l2_inner(p, ap);
    x = axpy(x, alpha, p);
    res = axpy(res, -alpha, ap);
    z = precondition(res);
    const double rz_next = l2_inner(res, z);
    p = axpy(z, rz_next / rz, p);
    rz = rz_next;
  }
  return x;
}

double HalfForm::inner(const Field& u, const Field& v) const {
  if (constant_) return h_half_inner(u, v, v_.front());
  require_same_grid(u, v);
  double pot = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) pot += v_[j] * u[j] * v[j];
  return seminorm_inner(u, v) + grid_->spacing() * pot;
}

}  // namespace fracham
