#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace fracham::detail {

// Real-to-complex / complex-to-real FFTW plans for one transform length.
// Plans are created once per length (planner calls are serialized) and
// executed through the new-array interface, which FFTW documents as safe
// to call concurrently.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return n_; }

  // Unnormalized forward transform; `in` has n entries, `out` n/2 + 1.
  void forward(const double* in, std::complex<double>* out) const;
  // Unnormalized inverse; `in` is clobbered by FFTW, so it is copied first.
  void inverse(const std::complex<double>* in, double* out) const;

  static std::shared_ptr<const FftPlan> get(std::size_t n);

 private:
  std::size_t n_;
  void* r2c_;
  void* c2r_;
};

}  // namespace fracham::detail
