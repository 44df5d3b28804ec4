#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

namespace shuttle::detail {

/// In-place complex FFTW transforms of one size. Planning is serialized behind a
/// process-wide mutex; execution on distinct arrays is thread-safe.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::vector<std::complex<double>>& v) const;
  /// Unnormalized inverse; callers fold the 1/n into their multipliers.
  void backward(std::vector<std::complex<double>>& v) const;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace shuttle::detail
