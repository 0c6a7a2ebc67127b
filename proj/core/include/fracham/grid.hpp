#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracham/errors.hpp"

namespace fracham {

namespace detail {
class FftPlan;
}

using Spectrum = std::vector<std::complex<double>>;

// Uniform periodic grid on [-L/2, L/2) with N points, x_j = -L/2 + j h.
//
// FFT normalization: forward transform is unnormalized, the inverse carries
// 1/N. Spectra are stored in r2c half-complex layout (N/2 + 1 entries); entry
// j holds wavenumber k_j = 2 pi j / L. The Nyquist entry j = N/2 is shared by
// +k and -k and enters every symmetric multiplier through |k|.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  Grid(double length, std::size_t n_points);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  double x(std::size_t j) const noexcept {
    return -0.5 * length_ + static_cast<double>(j) * h_;
  }
  std::vector<double> coordinates() const;

  /// Index of the grid point x = 0.
  std::size_t origin_index() const noexcept { return n_ / 2; }

  /// Wavenumbers in standard FFT ordering, length N (index N/2 is -pi/h).
  const std::vector<double>& wavenumbers() const noexcept {
    return wavenumbers_;
  }
  /// |k_j| for the half-complex layout, length N/2 + 1.
  const std::vector<double>& abs_wavenumbers() const noexcept {
    return abs_k_;
  }

  void forward(std::span<const double> in, Spectrum& out) const;
  void inverse(const Spectrum& in, std::span<double> out) const;

  bool same_as(const Grid& other) const noexcept {
    return this == &other || (length_ == other.length_ && n_ == other.n_);
  }

 private:
  double length_;
  std::size_t n_;
  double h_;
  std::vector<double> wavenumbers_;
  std::vector<double> abs_k_;
  std::shared_ptr<const detail::FftPlan> plan_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double length, std::size_t n_points);

/// Real samples on a grid. Values are finite and immutable once built.
class Field {
 public:
  Field(GridPtr grid, std::vector<double> values);

  static Field zeros(GridPtr grid);
  static Field constant(GridPtr grid, double c);
  template <class Fn>
  static Field sample(GridPtr grid, Fn&& fn) {
    std::vector<double> v(grid->size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid->x(j));
    return Field(std::move(grid), std::move(v));
  }

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  Field operator-() const;
  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  Field(GridPtr grid, std::vector<double> values, bool /*trusted*/)
      : grid_(std::move(grid)), values_(std::move(values)) {}

  GridPtr grid_;
  std::vector<double> values_;
};

/// Throws GridMismatch unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

/// a + s * b without intermediate temporaries.
Field axpy(const Field& a, double s, const Field& b);

/// Circular shift by whole cells: result[j] = u[j - cells (mod N)].
Field circular_shift(const Field& u, long cells);

/// Exponent s of (-Delta)^s, restricted to (0, 1).
class SpectralExponent {
 public:
  explicit SpectralExponent(double s);
  double value() const noexcept { return s_; }

  static SpectralExponent quarter() { return SpectralExponent(0.25); }
  static SpectralExponent half() { return SpectralExponent(0.5); }

 private:
  double s_;
};

}  // namespace fracham
