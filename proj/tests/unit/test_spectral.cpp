#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracham/field_io.hpp"
#include "fracham/spectral.hpp"
#include "oracles.hpp"

using namespace fracham;
using Catch::Approx;
constexpr double kPi = std::numbers::pi;

namespace {

Field cosine_mode(const GridPtr& g, int m) {
  const double L = g->length();
  return Field::sample(g, [&](double x) { return std::cos(2.0 * kPi * m * x / L); });
}

double max_abs_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

}  // namespace

TEST_CASE("grid rejects invalid shapes", "[grid]") {
  CHECK_THROWS_AS(make_grid(40.0, 8), InvalidGrid);
  CHECK_THROWS_AS(make_grid(40.0, 1001), InvalidGrid);
  CHECK_THROWS_AS(make_grid(-1.0, 64), InvalidGrid);
  CHECK_THROWS_AS(make_grid(std::nan(""), 64), InvalidGrid);
  auto g = make_grid(40.0, 64);
  CHECK(g->x(g->origin_index()) == 0.0);
  CHECK(g->spacing() == Approx(40.0 / 64));
}

TEST_CASE("fields reject non-finite samples and mismatched grids", "[grid]") {
  auto g = make_grid(10.0, 16);
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  try {
    Field f(g, bad);
    FAIL("expected InvalidField");
  } catch (const InvalidField& e) {
    CHECK(e.index() == 3);
  }
  auto g2 = make_grid(10.0, 32);
  CHECK_THROWS_AS(Field::zeros(g) + Field::zeros(g2), GridMismatch);
}

TEST_CASE("multiplier eigenrelation on cosine modes", "[spectral]") {
  auto g = make_grid(40.0, 2048);
  for (int m = 1; m <= 10; ++m) {
    const double k = 2.0 * kPi * m / g->length();
    for (double s : {0.25, 0.5}) {
      const Field u = cosine_mode(g, m);
      const Field lu = apply_fractional_laplacian(u, SpectralExponent(s));
      const Field expect = std::pow(k, 2.0 * s) * u;
      CHECK(max_abs_diff(lu, expect) <= 1e-10 * std::pow(k, 2.0 * s));
    }
  }
}

TEST_CASE("constants are annihilated", "[spectral]") {
  auto g = make_grid(40.0, 256);
  for (double s : {0.25, 0.5, 0.75}) {
    const Field lu = apply_fractional_laplacian(Field::constant(g, 3.5), SpectralExponent(s));
    CHECK(linf_norm(lu) <= 1e-13);
  }
}

TEST_CASE("semigroup: quarter composed with quarter is half", "[spectral]") {
  auto g = make_grid(40.0, 1024);
  testing::FieldSampler rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Field u = rng.bumps(g, 1.0);
    const auto q = SpectralExponent::quarter();
    const Field twice = apply_fractional_laplacian(apply_fractional_laplacian(u, q), q);
    const Field half = apply_fractional_laplacian(u, SpectralExponent::half());
    CHECK(max_abs_diff(twice, half) <= 1e-10 * linf_norm(half));
  }
}

TEST_CASE("spectral exponent must lie in (0, 1)", "[spectral]") {
  CHECK_THROWS_AS(SpectralExponent(0.0), Error);
  CHECK_THROWS_AS(SpectralExponent(1.0), Error);
  CHECK_NOTHROW(SpectralExponent(0.3));
}

TEST_CASE("Gaussian matches principal-value quadrature of the singular integral", "[spectral][oracle]") {
  const double L = 40.0;
  auto g = make_grid(L, 2048);
  auto gauss = [L](double x) {
    // Periodic extension; the nearest image is enough at L = 40.
    x -= L * std::round(x / L);
    return std::exp(-x * x);
  };
  const Field u = Field::sample(g, gauss);
  const Field lu = apply_fractional_laplacian(u, SpectralExponent::half());
  double worst = 0.0;
  for (std::size_t j = 0; j < g->size(); j += 8) {
    const double x = g->x(j);
    if (std::abs(x) > 5.0) continue;
    worst = std::max(worst, std::abs(lu[j] - testing::pv_half_laplacian(gauss, x, L)));
  }
  INFO("max abs deviation on |x| <= 5: " << worst);
  CHECK(worst <= 1e-5);
}

TEST_CASE("Parseval value of the form on a cosine mode", "[spectral]") {
  auto g = make_grid(40.0, 512);
  const double V0 = 1.3;
  for (int m : {1, 4, 17}) {
    const Field u = cosine_mode(g, m);
    const double k = 2.0 * kPi * m / g->length();
    CHECK(h_half_inner(u, u, V0) == Approx((k + V0) * g->length() / 2).epsilon(1e-10));
    const Field w = cosine_mode(g, m + 1);
    CHECK(std::abs(h_half_inner(u, w, V0)) <= 1e-12 * h_half_norm(u, V0) * h_half_norm(w, V0));
  }
}

TEST_CASE("Gagliardo double sum agrees with the spectral seminorm", "[spectral][oracle]") {
  auto g = make_grid(40.0, 1024);
  testing::FieldSampler rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const Field u = rng.bumps(g, 1.0);
    const Field v = rng.bumps(g, 1.0);
    const double spectral = seminorm_inner(u, v);
    const double direct = testing::gagliardo_double_sum(u, v);
    const double scale = std::sqrt(seminorm_sq(u) * seminorm_sq(v));
    INFO("spectral " << spectral << " double sum " << direct);
    CHECK(std::abs(spectral - direct) <= 0.01 * scale);
  }
}

TEST_CASE("form is symmetric, positive and translation invariant", "[spectral]") {
  auto g = make_grid(30.0, 512);
  testing::FieldSampler rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Field u = rng.bumps(g, 2.0);
    const Field v = rng.bumps(g, 2.0);
    CHECK(h_half_inner(u, v, 1.0) == Approx(h_half_inner(v, u, 1.0)).epsilon(1e-13));
    CHECK(h_half_inner(u, u, 1.0) > 0.0);
    const long cells = static_cast<long>(rng.uniform(-200, 200));
    CHECK(h_half_inner(circular_shift(u, cells), circular_shift(u, cells), 1.0) ==
          Approx(h_half_inner(u, u, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature helpers", "[spectral]") {
  auto g = make_grid(40.0, 2048);
  CHECK(std::abs(integrate(cosine_mode(g, 1))) <= 1e-12);
  CHECK(l2_norm(Field::constant(g, -2.0)) == Approx(2.0 * std::sqrt(40.0)).epsilon(1e-14));
  const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(std::abs(integrate(gauss) - std::sqrt(kPi)) <= 1e-10);
  CHECK(linf_norm(gauss) == 1.0);
}

TEST_CASE("Plancherel with the documented FFT normalization", "[spectral]") {
  auto g = make_grid(20.0, 256);
  testing::FieldSampler rng(9);
  const Field u = rng.bumps(g, 1.0);
  const Field v = rng.bumps(g, 1.0);
  Spectrum uh, vh;
  g->forward(u.values(), uh);
  g->forward(v.values(), vh);
  double spectral_sum = 0.0;
  const std::size_t n = g->size();
  for (std::size_t j = 0; j < uh.size(); ++j) {
    const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
    spectral_sum += w * (uh[j] * std::conj(vh[j])).real();
  }
  spectral_sum *= g->spacing() / static_cast<double>(n);
  CHECK(spectral_sum == Approx(l2_inner(u, v)).epsilon(1e-10));
}

TEST_CASE("preconditioned solve inverts the form operator", "[spectral]") {
  auto g = make_grid(40.0, 512);
  std::vector<double> pot(g->size());
  for (std::size_t j = 0; j < pot.size(); ++j) {
    const double x = g->x(j);
    pot[j] = 1.0 + x * x / (1.0 + x * x);
  }
  testing::FieldSampler rng(1);
  const Field r = rng.bumps(g, 1.0);
  for (const HalfForm& form : {HalfForm(g, 1.5), HalfForm(g, pot)}) {
    const Field x = form.solve(r);
    CHECK(l2_norm(form.apply(x) - r) <= 1e-10 * l2_norm(r));
  }
}

TEST_CASE("field dumps round-trip exactly", "[io]") {
  auto g = make_grid(12.5, 64);
  testing::FieldSampler rng(2);
  const Field u = rng.bumps(g, 1.0);
  std::stringstream bin;
  write_field_binary(u, bin);
  const Field ub = read_field_binary(bin);
  CHECK(ub.grid().length() == 12.5);
  CHECK(ub.data() == u.data());
  std::stringstream csv;
  write_field_csv(u, csv);
  const Field uc = read_field_csv(csv);
  CHECK(uc.grid().size() == 64);
  CHECK(uc.grid().length() == Approx(12.5).epsilon(1e-14));
  CHECK(uc.data() == u.data());
  std::stringstream junk("not a field");
  CHECK_THROWS_AS(read_field_binary(junk), Error);
}
