#include "fracham/energy.hpp"

#include <cmath>
#include <sstream>

namespace fracham {

PairField::PairField(Field u, Field v) : u_(std::move(u)), v_(std::move(v)) {
  require_same_grid(u_, v_);
}

PairField PairField::zeros(GridPtr grid) {
  return PairField(Field::zeros(grid), Field::zeros(grid));
}

PairField& PairField::operator+=(const PairField& o) {
  u_ += o.u_;
  v_ += o.v_;
  return *this;
}

PairField& PairField::operator-=(const PairField& o) {
  u_ -= o.u_;
  v_ -= o.v_;
  return *this;
}

PairField& PairField::operator*=(double s) {
  u_ *= s;
  v_ *= s;
  return *this;
}

PairField circular_shift(const PairField& w, long cells) {
  return PairField(circular_shift(w.u(), cells), circular_shift(w.v(), cells));
}

Decomposition decompose(const PairField& w) {
  const std::size_t n = w.u().size();
  std::vector<double> a(n), b(n), mb(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = 0.5 * (w.u()[j] + w.v()[j]);
    b[j] = 0.5 * (w.u()[j] - w.v()[j]);
    mb[j] = -b[j];
  }
  const auto& g = w.grid_ptr();
  Field plus(g, std::move(a));
  return Decomposition{PairField(plus, plus),
                       PairField(Field(g, std::move(b)), Field(g, std::move(mb)))};
}

double w_inner(const PairField& a, const PairField& b, const HalfForm& form) {
  return form.inner(a.u(), b.u()) + form.inner(a.v(), b.v());
}

double w_norm_sq(const PairField& w, const HalfForm& form) { return w_inner(w, w, form); }

namespace {

template <class Fn>
Field map_guarded(const Field& u, Fn&& fn) {
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    try {
      out[j] = fn(u[j]);
    } catch (const OverflowGuard& e) {
      std::ostringstream msg;
      msg << e.what() << " (grid x = " << u.grid().x(j) << ")";
      throw OverflowGuard(msg.str(), u.grid().x(j));
    }
  }
  return Field(u.grid_ptr(), std::move(out));
}

template <class Fn>
double integrate_guarded(const Field& u, Fn&& fn) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    try {
      acc += fn(u[j]);
    } catch (const OverflowGuard& e) {
      std::ostringstream msg;
      msg << e.what() << " (grid x = " << u.grid().x(j) << ")";
      throw OverflowGuard(msg.str(), u.grid().x(j));
    }
  }
  return acc * u.grid().spacing();
}

}  // namespace

Field apply_f(const Field& u, const NonlinearityFamily& fam) {
  return map_guarded(u, [&](double t) { return fam.f(t); });
}

Field apply_g(const Field& v, const NonlinearityFamily& fam) {
  return map_guarded(v, [&](double t) { return fam.g(t); });
}

double phi(const PairField& w, const NonlinearityFamily& fam) {
  return integrate_guarded(w.u(), [&](double t) { return fam.F(t); }) +
         integrate_guarded(w.v(), [&](double t) { return fam.G(t); });
}

double phi_prime_pairing(const PairField& w, const NonlinearityFamily& fam) {
  return integrate_guarded(w.u(), [&](double t) { return fam.f(t) * t; }) +
         integrate_guarded(w.v(), [&](double t) { return fam.g(t) * t; });
}

double energy(const PairField& w, const NonlinearityFamily& fam, const HalfForm& form) {
  return form.inner(w.u(), w.v()) - phi(w, fam);
}

double energy(const PairField& w, const NonlinearityFamily& fam, double V0) {
  return energy(w, fam, HalfForm(w.grid_ptr(), V0));
}

double dual_level(const PairField& w, const NonlinearityFamily& fam) {
  return integrate_guarded(w.u(), [&](double t) { return 0.5 * fam.f(t) * t - fam.F(t); }) +
         integrate_guarded(w.v(), [&](double t) { return 0.5 * fam.g(t) * t - fam.G(t); });
}

PairField el_residual(const PairField& w, const NonlinearityFamily& fam, const HalfForm& form) {
  Field ru = form.apply(w.v()) - apply_f(w.u(), fam);
  Field rv = form.apply(w.u()) - apply_g(w.v(), fam);
  return PairField(std::move(ru), std::move(rv));
}

PairField energy_gradient(const PairField& w, const NonlinearityFamily& fam,
                          const HalfForm& form) {
  const PairField r = el_residual(w, fam, form);
  return PairField(form.solve(r.u()), form.solve(r.v()));
}

PairField energy_gradient(const PairField& w, const NonlinearityFamily& fam, double V0) {
  return energy_gradient(w, fam, HalfForm(w.grid_ptr(), V0));
}

double derivative_pairing(const PairField& w, const PairField& z,
                          const NonlinearityFamily& fam, const HalfForm& form) {
  const Field fu = apply_f(w.u(), fam);
  const Field gv = apply_g(w.v(), fam);
  return form.inner(w.u(), z.v()) + form.inner(w.v(), z.u()) - l2_inner(fu, z.u()) -
         l2_inner(gv, z.v());
}

double el_residual_norm(const PairField& w, const NonlinearityFamily& fam,
                        const HalfForm& form) {
  const PairField r = el_residual(w, fam, form);
  return std::sqrt(l2_inner(r.u(), r.u()) + l2_inner(r.v(), r.v()));
}

}  // namespace fracham
