#include "detail/fft.hpp"

#include <mutex>

#include "shuttle/error.hpp"

namespace shuttle::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  require(n > 0, "FFT size must be positive");
  std::vector<std::complex<double>> a(n);
  std::lock_guard lock(planner_mutex());
  // In-place plans, since execution is always in place. FFTW_ESTIMATE keeps plans, and therefore results, independent of timing.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int size = static_cast<int>(n);
  forward_ = fftw_plan_dft_1d(size, as_fftw(a), as_fftw(a), FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft_1d(size, as_fftw(a), as_fftw(a), FFTW_BACKWARD, flags);
  if (forward_ == nullptr || backward_ == nullptr) throw NumericalError("FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(backward_);
}

void Fft::forward(std::vector<std::complex<double>>& v) const {
  fftw_execute_dft(forward_, as_fftw(v), as_fftw(v));
}

void Fft::backward(std::vector<std::complex<double>>& v) const {
  fftw_execute_dft(backward_, as_fftw(v), as_fftw(v));
}

}  // namespace shuttle::detail
