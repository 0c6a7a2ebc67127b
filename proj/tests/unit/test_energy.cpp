#include <catch_amalgamated.hpp>

#include <cmath>

#include "fracham/energy.hpp"
#include "oracles.hpp"

using namespace fracham;
using Catch::Approx;

namespace {

const NonlinearityFamily& default_family() {
  static const auto fam = builtin_family("cubic_exp", 1.0);
  return fam;
}

Field bump(const GridPtr& g, double c) {
  return Field::sample(g, [c](double x) { return c * std::exp(-x * x / 2); });
}

}  // namespace

TEST_CASE("decomposition formulas", "[energy]") {
  auto g = make_grid(20.0, 256);
  const Field s = Field::sample(g, [](double x) { return std::sin(x); });
  const Field c = Field::sample(g, [](double x) { return std::cos(x); });

  const auto diag = decompose(PairField(s, s));
  CHECK(linf_norm(diag.plus.u() - s) == 0.0);
  CHECK(linf_norm(diag.minus.u()) == 0.0);
  CHECK(linf_norm(diag.minus.v()) == 0.0);

  const auto anti = decompose(PairField(s, -s));
  CHECK(linf_norm(anti.plus.u()) == 0.0);
  CHECK(linf_norm(anti.minus.v() + s) == 0.0);

  const auto mixed = decompose(PairField(s, c));
  CHECK(linf_norm(mixed.plus.u() - 0.5 * (s + c)) <= 1e-15);
  CHECK(linf_norm(mixed.minus.u() - 0.5 * (s - c)) <= 1e-15);
  const PairField back = mixed.plus + mixed.minus;
  CHECK(linf_norm(back.u() - s) <= 1e-15);
  CHECK(linf_norm(back.v() - c) <= 1e-15);
}

TEST_CASE("Phi on special fields", "[energy]") {
  auto g = make_grid(40.0, 2048);
  const auto& fam = default_family();
  CHECK(phi(PairField::zeros(g), fam) == 0.0);
  const Field u = bump(g, 0.7);
  CHECK(phi(PairField(u, Field::zeros(g)), fam) == Approx(integrate(Field::sample(g, [&](double x) {
                                                           return fam.F(0.7 * std::exp(-x * x / 2));
                                                         }))).epsilon(1e-14));
}

TEST_CASE("Phi of a small bump matches nested quadrature", "[energy][oracle]") {
  auto g = make_grid(40.0, 2048);
  const auto& fam = default_family();
  const double c = 0.1;
  const Field u = bump(g, c);
  // int F(c e^{-x^2/2}) dx with F itself by quadrature of f.
  auto F_of_x = [&](double x) {
    return testing::primitive_by_quadrature([&](double s) { return fam.f(s); },
                                            c * std::exp(-x * x / 2));
  };
  const double oracle = 2.0 * testing::primitive_by_quadrature(F_of_x, 20.0);
  CHECK(phi(PairField(u, Field::zeros(g)), fam) == Approx(oracle).epsilon(1e-8));
}

TEST_CASE("energy signs on W- and near zero on the diagonal", "[energy]") {
  auto g = make_grid(40.0, 2048);
  const auto& fam = default_family();
  CHECK(energy(PairField::zeros(g), fam, 1.0) == 0.0);
  testing::FieldSampler rng(21);
  for (int i = 0; i < 10; ++i) {
    const Field u = rng.bumps(g, 1.5);
    CHECK(energy(PairField(u, -u), fam, 1.0) <= 0.0);
  }
  const Field small = bump(g, 1e-3);
  CHECK(energy(PairField(small, small), fam, 1.0) > 0.0);
}

TEST_CASE("energy split through the decomposition", "[energy]") {
  auto g = make_grid(30.0, 512);
  const auto& fam = default_family();
  const HalfForm form(g, 1.0);
  testing::FieldSampler rng(4);
  for (int i = 0; i < 10; ++i) {
    const PairField w = rng.pair(g, 1.2);
    const auto d = decompose(w);
    CHECK(std::abs(w_inner(d.plus, d.minus, form)) <= 1e-10 * w_norm_sq(w, form));
    const double split =
        0.5 * w_norm_sq(d.plus, form) - 0.5 * w_norm_sq(d.minus, form) - phi(w, fam);
    CHECK(split == Approx(energy(w, fam, form)).epsilon(1e-10));
  }
}

TEST_CASE("directional derivative matches central differences", "[energy][oracle]") {
  auto g = make_grid(40.0, 1024);
  const auto& fam = default_family();
  const HalfForm form(g, 1.0);
  testing::FieldSampler rng(7);
  const double eps = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const PairField w = rng.pair(g, 1.2);
    const PairField z = rng.pair(g, 1.0);
    const double fd =
        (energy(w + eps * z, fam, form) - energy(w - eps * z, fam, form)) / (2 * eps);
    const double an = derivative_pairing(w, z, fam, form);
    CHECK(an == Approx(fd).epsilon(1e-6));
    const PairField grad = energy_gradient(w, fam, form);
    CHECK(w_inner(grad, z, form) == Approx(an).epsilon(1e-9));
  }
}

TEST_CASE("gradient with a varying potential is consistent", "[energy]") {
  auto g = make_grid(40.0, 512);
  std::vector<double> pot(g->size());
  for (std::size_t j = 0; j < pot.size(); ++j) pot[j] = 1.0 + 0.5 * std::tanh(g->x(j));
  const HalfForm form(g, pot);
  const auto& fam = default_family();
  testing::FieldSampler rng(8);
  const PairField w = rng.pair(g, 1.0);
  const PairField z = rng.pair(g, 1.0);
  const double eps = 1e-5;
  const double fd = (energy(w + eps * z, fam, form) - energy(w - eps * z, fam, form)) / (2 * eps);
  CHECK(derivative_pairing(w, z, fam, form) == Approx(fd).epsilon(1e-6));
}

TEST_CASE("zero field has zero residual and gradient", "[energy]") {
  auto g = make_grid(20.0, 128);
  const auto& fam = default_family();
  const HalfForm form(g, 1.0);
  CHECK(el_residual_norm(PairField::zeros(g), fam, form) == 0.0);
  const PairField grad = energy_gradient(PairField::zeros(g), fam, 1.0);
  CHECK(linf_norm(grad.u()) == 0.0);
  CHECK(linf_norm(grad.v()) == 0.0);
}

TEST_CASE("overflow in a field carries the grid coordinate", "[energy]") {
  auto g = make_grid(20.0, 128);
  const auto& fam = default_family();
  const Field spike = Field::sample(g, [](double x) { return std::abs(x - 2.5) < 0.1 ? 40.0 : 0.0; });
  try {
    (void)apply_f(spike, fam);
    FAIL("expected OverflowGuard");
  } catch (const OverflowGuard& e) {
    CHECK(std::abs(e.location() - 2.5) <= 0.2);
  }
}
