// Thin wrapper over FFTW for unnormalized complex transforms.
#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>

namespace hardy::fft {

namespace detail {

// FFTW planning is not thread-safe; execution with fftw_execute_dft is.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void run(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
                int sign) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  if (in.empty()) return;
  fftw_plan plan = PlanCache::instance().get(in.size(), sign);
  // FFTW never writes to the input of an out-of-place c2c transform.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace detail

/// out[k] = sum_j in[j] exp(-2 pi i j k / n)
inline void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  detail::run(in, out, FFTW_FORWARD);
}

/// out[j] = sum_k in[k] exp(+2 pi i j k / n)
inline void backward(std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out) {
  detail::run(in, out, FFTW_BACKWARD);
}

}  // namespace hardy::fft
