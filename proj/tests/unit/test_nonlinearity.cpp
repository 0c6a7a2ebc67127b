#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracham/nonlinearity.hpp"
#include "fracham/spectral.hpp"
#include "oracles.hpp"

using namespace fracham;
using Catch::Approx;

TEST_CASE("default family values and closed-form primitive", "[nonlinearity]") {
  const auto fam = builtin_family("cubic_exp", 1.0);
  CHECK(fam.f(1.0) == Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(fam.f(0.0) == 0.0);
  CHECK(fam.F(0.0) == 0.0);
  CHECK(fam.mu == 4.0);
  // (1/2)[e^{t^2}(t^2 - 1)]_0^1 = 1/2
  CHECK(fam.F(1.0) == Approx(0.5).epsilon(1e-14));
  const double quad = testing::primitive_by_quadrature([&](double s) { return fam.f(s); }, 1.0);
  CHECK(std::abs(quad - fam.F(1.0)) <= 1e-10);
}

TEST_CASE("primitives agree with quadrature for every built-in family", "[nonlinearity][oracle]") {
  for (const auto& name : builtin_family_names()) {
    for (double beta0 : {0.5, 1.0, 2.0}) {
      const auto fam = builtin_family(name, beta0);
      for (double t : {-1.7, -0.3, 1e-3, 0.4, 1.2, 2.0}) {
        const double F = testing::primitive_by_quadrature([&](double s) { return fam.f(s); }, t);
        const double G = testing::primitive_by_quadrature([&](double s) { return fam.g(s); }, t);
        INFO(name << " beta0=" << beta0 << " t=" << t);
        CHECK(fam.F(t) == Approx(F).epsilon(1e-10).margin(1e-300));
        CHECK(fam.G(t) == Approx(G).epsilon(1e-10).margin(1e-300));
      }
    }
  }
}

TEST_CASE("F' = f and f' by central differences", "[nonlinearity]") {
  for (const auto& name : builtin_family_names()) {
    const auto fam = builtin_family(name, 1.0);
    const double h = 1e-5;
    for (double t = -5.0; t <= 5.0; t += 0.37) {
      const double dF = (fam.F(t + h) - fam.F(t - h)) / (2 * h);
      const double dG = (fam.G(t + h) - fam.G(t - h)) / (2 * h);
      INFO(name << " t=" << t);
      CHECK(dF == Approx(fam.f(t)).epsilon(1e-6));
      CHECK(dG == Approx(fam.g(t)).epsilon(1e-6));
      const double df = (fam.f(t + h) - fam.f(t - h)) / (2 * h);
      CHECK(df == Approx(fam.df(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("f(t)/t^2 vanishes at the origin", "[nonlinearity]") {
  const auto fam = builtin_family("cubic_exp", 1.0);
  double prev = INFINITY;
  for (double t = 1e-1; t >= 1e-6; t /= 10) {
    const double r = fam.f(t) / (t * t);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("sign-restricted variant vanishes on the negative axis", "[nonlinearity]") {
  const auto fam = builtin_family("cubic_exp", 1.0, true);
  for (double t : {-3.0, -1.0, -1e-8, 0.0}) {
    CHECK(fam.f(t) == 0.0);
    CHECK(fam.F(t) == 0.0);
    CHECK(fam.df(t) == 0.0);
  }
  CHECK(fam.f(1.0) == Approx(std::exp(1.0)));
}

TEST_CASE("unknown family names and bad exponents are rejected", "[nonlinearity]") {
  CHECK_THROWS_AS(builtin_family("quartic", 1.0), UnknownFamily);
  CHECK_THROWS_AS(builtin_family("cubic_exp", 0.0), Error);
}

TEST_CASE("overflow guard reports the offending argument", "[nonlinearity]") {
  const auto fam = builtin_family("cubic_exp", 1.0);
  try {
    (void)fam.f(30.0);
    FAIL("expected OverflowGuard");
  } catch (const OverflowGuard& e) {
    CHECK(e.location() == 30.0);
  }
}

TEST_CASE("hypothesis audit of the default family passes", "[nonlinearity][audit]") {
  const auto fam = builtin_family("cubic_exp", 1.0);
  const auto audit = audit_hypotheses(fam, audit_sample_grid());
  for (const auto& c : audit.checks) {
    INFO(c.id << " margin " << c.margin << " at t=" << c.worst_t);
    CHECK(c.status == AuditStatus::Pass);
    CHECK(!c.sample_set.empty());
    CHECK(c.n_samples > 0);
  }
  CHECK(audit.all_pass());
  CHECK(audit.at("H3").margin >= 0.0);
}

TEST_CASE("audit flags the linear family at the origin", "[nonlinearity][audit]") {
  const auto fam = builtin_family("linear", 1.0);
  const auto audit = audit_hypotheses(fam, audit_sample_grid());
  CHECK(audit.at("H2").status == AuditStatus::Fail);
  CHECK(!audit.all_pass());
}

TEST_CASE("audit sample grid is sorted, unique and excludes zero", "[nonlinearity][audit]") {
  const auto ts = audit_sample_grid(10.0, 2001, 61);
  CHECK(std::is_sorted(ts.begin(), ts.end()));
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) CHECK(ts[i] < ts[i + 1]);
  CHECK(std::none_of(ts.begin(), ts.end(), [](double t) { return t == 0.0; }));
  CHECK(ts.front() == -10.0);
  CHECK(ts.back() == 10.0);
}

TEST_CASE("Trudinger-Moser functional", "[nonlinearity]") {
  auto g = make_grid(40.0, 2048);
  CHECK(trudinger_moser_functional(Field::zeros(g), 1.0) == 0.0);
  const Field bump = Field::sample(g, [](double x) { return 1e-3 * std::exp(-x * x); });
  const double beta = std::numbers::pi;
  const double lead = beta * l2_norm(bump) * l2_norm(bump);
  CHECK(trudinger_moser_functional(bump, beta) == Approx(lead).epsilon(1e-3));
  CHECK_THROWS_AS(trudinger_moser_functional(Field::constant(g, 30.0), 1.0), OverflowGuard);
  CHECK_THROWS_AS(trudinger_moser_functional(bump, 0.0), Error);
}
