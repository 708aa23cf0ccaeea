#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "whitham/errors.hpp"

namespace whitham::fft {

using cplx = std::complex<double>;

enum class Direction : int { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

namespace detail {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created with FFTW_ESTIMATE so that the chosen algorithm, and hence
// every output bit, is independent of timing measurements.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const std::vector<int>& dims, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(dims, static_cast<int>(dir));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    std::vector<cplx> scratch(total);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ptr, ptr, static_cast<int>(dir),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

} // namespace detail

/// Unnormalized in-place DFT over a row-major array with the given extents.
/// Forward uses e^{-i...}, Backward e^{+i...}, FFTW sign conventions.
inline void transform(std::span<cplx> data, const std::vector<int>& dims, Direction dir) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (total != data.size())
    throw PreconditionError("fft: array size " + std::to_string(data.size()) + " does not match extents");
  fftw_plan plan = detail::PlanCache::instance().get(dims, dir);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

inline void forward(std::span<cplx> data) { transform(data, {static_cast<int>(data.size())}, Direction::Forward); }
inline void backward(std::span<cplx> data) { transform(data, {static_cast<int>(data.size())}, Direction::Backward); }

} // namespace whitham::fft
