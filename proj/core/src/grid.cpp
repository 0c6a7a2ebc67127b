#include "fracham/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"

namespace fracham {

Grid::Grid(double length, std::size_t n_points) : length_(length), n_(n_points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidGrid("grid length must be positive and finite");
  }
  if (n_points < kMinPoints || n_points % 2 != 0) {
    std::ostringstream msg;
    msg << "grid n_points must be even and >= " << kMinPoints << " (got "
        << n_points << ")";
    throw InvalidGrid(msg.str());
  }
  h_ = length_ / static_cast<double>(n_);

  const double dk = 2.0 * std::numbers::pi / length_;
  const auto n = static_cast<long>(n_);
  wavenumbers_.resize(n_);
  for (long j = 0; j < n; ++j) {
    const long jj = (j < n / 2) ? j : j - n;
    wavenumbers_[static_cast<std::size_t>(j)] = dk * static_cast<double>(jj);
  }
  abs_k_.resize(spectrum_size());
  for (std::size_t j = 0; j < abs_k_.size(); ++j) {
    abs_k_[j] = dk * static_cast<double>(j);
  }
  plan_ = detail::FftPlan::get(n_);
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

void Grid::forward(std::span<const double> in, Spectrum& out) const {
  out.resize(spectrum_size());
  plan_->forward(in.data(), out.data());
}

void Grid::inverse(const Spectrum& in, std::span<double> out) const {
  plan_->inverse(in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

GridPtr make_grid(double length, std::size_t n_points) {
  return std::make_shared<const Grid>(length, n_points);
}

// --- Field -----------------------------------------------------------------

namespace {
void check_finite(const std::vector<double>& v) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j])) {
      std::ostringstream msg;
      msg << "non-finite field sample at index " << j;
      throw InvalidField(msg.str(), j);
    }
  }
}
}  // namespace

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidGrid("field requires a grid");
  if (values_.size() != grid_->size()) {
    throw GridMismatch("field length does not match grid size");
  }
  check_finite(values_);
}

Field Field::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

Field Field::constant(GridPtr grid, double c) {
  const std::size_t n = grid->size();
  return Field(std::move(grid), std::vector<double>(n, c));
}

Field Field::operator-() const {
  std::vector<double> out(values_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -values_[j];
  return Field(grid_, std::move(out), true);
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  check_finite(values_);
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  check_finite(values_);
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  check_finite(values_);
  return *this;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid().same_as(b.grid())) {
    throw GridMismatch("fields live on different grids");
  }
}

Field axpy(const Field& a, double s, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] + s * b[j];
  return Field(a.grid_ptr(), std::move(out));
}

Field circular_shift(const Field& u, long cells) {
  const auto n = static_cast<long>(u.size());
  long s = cells % n;
  if (s < 0) s += n;
  std::vector<double> out(u.size());
  for (long j = 0; j < n; ++j) {
    out[static_cast<std::size_t>((j + s) % n)] = u[static_cast<std::size_t>(j)];
  }
  return Field(u.grid_ptr(), std::move(out));
}

SpectralExponent::SpectralExponent(double s) : s_(s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw Error("spectral exponent must lie in (0, 1)");
  }
}

}  // namespace fracham
