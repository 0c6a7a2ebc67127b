#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace fracham::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  // Planning needs scratch arrays; FFTW_ESTIMATE leaves them untouched.
  std::vector<double> real(n);
  std::vector<std::complex<double>> cplx(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int len = static_cast<int>(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  r2c_ = fftw_plan_dft_r2c_1d(
      len, real.data(), reinterpret_cast<fftw_complex*>(cplx.data()), flags);
  c2r_ = fftw_plan_dft_c2r_1d(
      len, reinterpret_cast<fftw_complex*>(cplx.data()), real.data(),
      flags | FFTW_DESTROY_INPUT);
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

void FftPlan::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(const std::complex<double>* in, double* out) const {
  std::vector<std::complex<double>> scratch(in, in + n_ / 2 + 1);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

std::shared_ptr<const FftPlan> FftPlan::get(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::weak_ptr<const FftPlan>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[n];
  if (auto plan = slot.lock()) return plan;
  auto plan = std::make_shared<const FftPlan>(n);
  slot = plan;
  return plan;
}

}  // namespace fracham::detail
