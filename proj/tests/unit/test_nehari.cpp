#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracham/nehari.hpp"
#include "oracles.hpp"

using namespace fracham;
using Catch::Approx;

namespace {

GridPtr default_grid() {
  static const GridPtr g = make_grid(40.0, 2048);
  return g;
}

const NonlinearityFamily& default_family() {
  static const auto fam = builtin_family("cubic_exp", 1.0);
  return fam;
}

Field bump(const GridPtr& g, double c, double x0 = 0.0) {
  return Field::sample(g, [=](double x) { return c * std::exp(-(x - x0) * (x - x0) / 2); });
}

const GroundStateResult& default_ground_state() {
  static const GroundStateResult r = [] {
    const HalfForm form(default_grid(), 1.0);
    return ground_state(default_family(), form, SolverConfig{});
  }();
  return r;
}

}  // namespace

TEST_CASE("solver configuration validation", "[nehari]") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.armijo_factor = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.outer_tol = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("pure W- direction has no ascent", "[nehari]") {
  auto g = default_grid();
  const Field u = bump(g, 1.0);
  CHECK_THROWS_AS(inner_maximize(PairField(u, -u), default_family(), 1.0, 1e-10), NoAscent);
  CHECK_THROWS_AS(inner_maximize(PairField::zeros(g), default_family(), 1.0, 1e-10), NoAscent);
}

TEST_CASE("symmetric family keeps the diagonal", "[nehari]") {
  auto g = default_grid();
  const Field u = bump(g, 1.0);
  const auto m = inner_maximize(PairField(u, u), default_family(), 1.0, 1e-10);
  CHECK(m.t > 0.0);
  CHECK(l2_norm(m.phi) <= 1e-6 * m.t);
  CHECK(m.ray_residual <= 1e-10);
  CHECK(m.minus_residual <= 1e-10);
  CHECK(m.energy > 0.0);
}

TEST_CASE("cubic ray maximum matches the scalar root oracle", "[nehari][oracle]") {
  auto g = default_grid();
  const auto fam = builtin_family("cubic", 1.0);
  const HalfForm form(g, 1.0);
  for (double width : {0.7, 1.0, 2.0}) {
    const Field u = Field::sample(g, [=](double x) { return std::exp(-x * x / (2 * width * width)); });
    const auto m = inner_maximize(PairField(u, u), fam, 1.0, 1e-12);
    const double t_oracle = testing::cubic_ray_root(m.a, form.norm_sq(m.a));
    CHECK(form.norm_sq(m.a) == Approx(0.5).epsilon(1e-12));
    CHECK(m.t == Approx(t_oracle).epsilon(1e-8));
    // closed form t^2 = <a, a> / int a^4
    double a4 = 0.0;
    for (double v : m.a.values()) a4 += v * v * v * v;
    a4 *= g->spacing();
    CHECK(m.t * m.t == Approx(0.5 / a4).epsilon(1e-8));
  }
}

TEST_CASE("inner maximum dominates random points of the half-space", "[nehari]") {
  auto g = default_grid();
  const HalfForm form(g, 1.0);
  for (const char* name : {"cubic_exp", "cubic_quintic_exp"}) {
    const auto fam = builtin_family(name, 1.0);
    const Field u = bump(g, 1.0, 0.5);
    const Field v = bump(g, 0.6, -0.5);
    SolverConfig cfg;
    const auto m = inner_maximize(PairField(u, v), fam, form, cfg);
    const double best = m.energy;
    testing::FieldSampler rng(17);
    const double wn = std::sqrt(w_norm_sq(m.w, form));
    for (int i = 0; i < 100; ++i) {
      // z = s (a, a) + (psi, -psi) inside a ball of radius ||w|| / 2 around m(w)
      const double s = m.t * (1.0 + rng.uniform(-0.5, 0.5));
      const Field psi = rng.bumps(g, 1.0);
      const PairField minus(psi, -psi);
      const double scale = rng.uniform(0.0, 0.5) * wn / std::sqrt(w_norm_sq(minus, form));
      const PairField z = s * PairField(m.a, m.a) + PairField(m.phi, -m.phi) + scale * minus;
      INFO(name << " sample " << i);
      CHECK(energy(z, fam, form) <= best + 1e-12 * std::abs(best));
    }
  }
}

TEST_CASE("default ground state satisfies the level bound and residual targets", "[nehari][slow]") {
  const auto& r = default_ground_state();
  CHECK(r.converged());
  CHECK(r.level > 0.0);
  CHECK(r.level < std::numbers::pi);
  CHECK(r.el_residual <= 1e-6);
  CHECK(r.nehari_residual <= 1e-6);
  CHECK(r.dual_level == Approx(r.level).epsilon(1e-6));
  CHECK(r.peak_x == 0.0);
}

TEST_CASE("outer trace is non-increasing", "[nehari]") {
  const HalfForm form(default_grid(), 1.0);
  SolverConfig cfg;
  const auto r = outer_minimize(gaussian_start(form, 1.0), default_family(), form, cfg);
  REQUIRE(r.trace.size() >= 2);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const double prev = r.trace[i - 1].level;
    CHECK(r.trace[i].level <= prev + 1e-12 * std::abs(prev));
  }
}

TEST_CASE("translated start gives the same level", "[nehari]") {
  auto g = default_grid();
  const HalfForm form(g, 1.0);
  const auto& fam = default_family();
  SolverConfig cfg;
  const auto base = outer_minimize(gaussian_start(form, 1.0), fam, form, cfg);
  const PairField shifted = circular_shift(gaussian_start(form, 1.0), 137);
  const auto moved = outer_minimize(shifted, fam, form, cfg);
  REQUIRE(base.converged());
  REQUIRE(moved.converged());
  CHECK(moved.level == Approx(base.level).epsilon(1e-6));
}

TEST_CASE("iteration cap is a status with the best point so far", "[nehari]") {
  const HalfForm form(default_grid(), 1.0);
  SolverConfig cfg;
  cfg.max_outer = 1;
  const auto r = outer_minimize(gaussian_start(form, 1.0), default_family(), form, cfg);
  CHECK(r.status == SolveStatus::MaxIterations);
  CHECK(r.level > 0.0);
  CHECK(std::string(to_string(r.status)) == "max_iterations");
}

TEST_CASE("asymmetric family converges off the diagonal", "[nehari]") {
  const HalfForm form(default_grid(), 1.0);
  const auto fam = builtin_family("cubic_quintic_exp", 1.0);
  SolverConfig cfg;
  cfg.restarts = 2;
  const auto r = ground_state(fam, form, cfg);
  CHECK(r.converged());
  CHECK(r.el_residual <= 1e-6);
  CHECK(r.level > 0.0);
  CHECK(r.level < std::numbers::pi);
  CHECK(l2_norm(r.w.u() - r.w.v()) > 1e-3);
}

TEST_CASE("multi-start result does not depend on the thread count", "[nehari]") {
  const HalfForm form(default_grid(), 1.0);
  SolverConfig one;
  one.restarts = 3;
  one.seed = 42;
  SolverConfig many = one;
  many.threads = 3;
  const auto a = ground_state(default_family(), form, one);
  const auto b = ground_state(default_family(), form, many);
  CHECK(a.restart_index == b.restart_index);
  CHECK(a.level == b.level);
  CHECK(a.w.u().data() == b.w.u().data());
}

TEST_CASE("restart starts are exact cell translates", "[nehari]") {
  const HalfForm form(default_grid(), 1.0);
  SolverConfig cfg;
  cfg.seed = 3;
  const PairField base = gaussian_start(form, 1.0);
  CHECK(w_norm_sq(base, form) == Approx(1.0).epsilon(1e-12));
  const PairField k0 = restart_start(form, cfg, 0, base);
  CHECK(k0.u().data() == base.u().data());
  const PairField k2 = restart_start(form, cfg, 2, base);
  CHECK(w_norm_sq(k2, form) == Approx(1.0).epsilon(1e-12));
  const PairField again = restart_start(form, cfg, 2, base);
  CHECK(again.u().data() == k2.u().data());
}

TEST_CASE("scalar diagonal oracle agrees with the system solver", "[nehari][oracle]") {
  auto g = default_grid();
  const HalfForm form(g, 1.0);
  const auto& fam = default_family();
  const auto s = scalar_diagonal_solve(fam, form);
  REQUIRE(s.converged);
  const auto& r = default_ground_state();
  CHECK(std::abs(s.level - r.level) <= 1e-4 * r.level);

  const PairField uu(s.u, s.u);
  CHECK(el_residual_norm(uu, fam, form) <= 1e-6);
  CHECK(s.level == Approx(energy(uu, fam, form)).epsilon(1e-12));
  CHECK(asymmetry(recenter(uu).u()) <= 1e-6);
}

TEST_CASE("scalar oracle requires a symmetric family", "[nehari]") {
  const HalfForm form(make_grid(20.0, 256), 1.0);
  CHECK_THROWS_AS(scalar_diagonal_solve(builtin_family("cubic_quintic_exp", 1.0), form), Error);
}
