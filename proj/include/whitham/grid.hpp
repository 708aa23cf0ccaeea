#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "whitham/errors.hpp"

namespace whitham {

/// Periodic grid of n points on [0, period) standing in for the real line.
///
/// Frequency lattice xi_j = 2 pi j / period, j in [-n/2, n/2), stored in FFT
/// order (index j >= n/2 holds frequency j - n). Physical coordinates are
/// reported in the centered window [-period/2, period/2).
class GridSpec {
public:
  GridSpec(std::size_t n, double period) : n_(n), period_(period) {
    if (n < 4 || (n & (n - 1)) != 0)
      throw PreconditionError("grid size must be a power of two >= 4, got " + std::to_string(n));
    if (!(period > 0.0) || !std::isfinite(period))
      throw PreconditionError("grid period must be positive and finite");
  }

  std::size_t size() const noexcept { return n_; }
  double period() const noexcept { return period_; }
  double dx() const noexcept { return period_ / static_cast<double>(n_); }
  double dxi() const noexcept { return 2.0 * std::numbers::pi / period_; }
  double nyquist() const noexcept { return std::numbers::pi * static_cast<double>(n_) / period_; }

  /// Signed lattice index of storage slot j.
  long index(std::size_t j) const noexcept {
    return j < n_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
  }
  double frequency(std::size_t j) const noexcept { return dxi() * static_cast<double>(index(j)); }
  /// Storage slot for signed lattice index k in [-n/2, n/2).
  std::size_t slot(long k) const noexcept {
    return static_cast<std::size_t>(k >= 0 ? k : k + static_cast<long>(n_));
  }

  /// Centered coordinate of grid point m: m dx wrapped into [-period/2, period/2).
  double x(std::size_t m) const noexcept {
    return (m < n_ / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n_)) * dx();
  }

  /// Longest time a wave moving at speed max_speed can run before crossing a
  /// quarter of the period.
  double guard_time(double max_speed = 1.0) const noexcept { return period_ / (4.0 * max_speed); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
  std::size_t n_;
  double period_;
};

} // namespace whitham
