#pragma once

// FFT convolution for long MA filters. Plans are created once (under a lock,
// since the FFTW planner is not thread safe) and executed on fresh aligned
// buffers, which is safe to do concurrently.

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "lrdreg/error.hpp"

namespace lrdreg {

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

inline std::size_t fft_size(std::size_t at_least) {
  std::size_t n = 1;
  while (n < at_least) n <<= 1;
  return n;
}

}  // namespace detail

/// Computes out[i] = sum_{k=0}^{K} c_k eta[i + K - k] for i < n, the same
/// quantity as the direct filter, via one forward and one inverse real FFT.
class FftFilter {
 public:
  FftFilter(std::span<const double> c, std::size_t n) : K_(c.size() - 1), n_(n) {
    require(!c.empty() && n >= 1, ErrorCategory::config, "fft filter: empty coefficients or length");
    N_ = detail::fft_size(n + K_);
    const std::size_t M = N_ / 2 + 1;
    auto real = detail::fftw_buffer<double>(N_);
    auto spec = detail::fftw_buffer<fftw_complex>(M);
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      const int N = static_cast<int>(N_);
      forward_ = fftw_plan_dft_r2c_1d(N, real.get(), spec.get(), FFTW_ESTIMATE);
      inverse_ = fftw_plan_dft_c2r_1d(N, spec.get(), real.get(), FFTW_ESTIMATE);
    }
    require(forward_ && inverse_, ErrorCategory::config, "fft filter: planning failed");
    for (std::size_t i = 0; i < N_; ++i) real[i] = i < c.size() ? c[i] : 0.0;
    fftw_execute_dft_r2c(forward_, real.get(), spec.get());
    transfer_.resize(M);
    for (std::size_t j = 0; j < M; ++j) transfer_[j] = {spec[j][0], spec[j][1]};
  }

  FftFilter(const FftFilter&) = delete;
  FftFilter& operator=(const FftFilter&) = delete;

  ~FftFilter() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (inverse_) fftw_destroy_plan(inverse_);
  }

  std::size_t truncation() const noexcept { return K_; }

  std::vector<double> apply(std::span<const double> eta) const {
    require(eta.size() >= n_ + K_, ErrorCategory::config, "fft filter: insufficient pre-sample");
    const std::size_t M = N_ / 2 + 1;
    auto real = detail::fftw_buffer<double>(N_);
    auto spec = detail::fftw_buffer<fftw_complex>(M);
    for (std::size_t i = 0; i < N_; ++i) real[i] = i < n_ + K_ ? eta[i] : 0.0;
    fftw_execute_dft_r2c(forward_, real.get(), spec.get());
    for (std::size_t j = 0; j < M; ++j) {
      const std::complex<double> v = std::complex<double>(spec[j][0], spec[j][1]) * transfer_[j];
      spec[j][0] = v.real();
      spec[j][1] = v.imag();
    }
    fftw_execute_dft_c2r(inverse_, spec.get(), real.get());
    const double scale = 1.0 / static_cast<double>(N_);
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = real[i + K_] * scale;
    return out;
  }

 private:
  std::size_t K_, n_, N_ = 0;
  fftw_plan forward_ = nullptr, inverse_ = nullptr;
  std::vector<std::complex<double>> transfer_;
};

}  // namespace lrdreg
