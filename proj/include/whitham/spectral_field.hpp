#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "whitham/errors.hpp"
#include "whitham/fft.hpp"
#include "whitham/grid.hpp"

namespace whitham {

using cplx = std::complex<double>;

/// A field stored by its Fourier coefficients on a GridSpec lattice.
///
/// Coefficients follow the normalization
///   fhat(xi) = (1/2pi) \int f(x) e^{-i x xi} dx,   f(x) = \int fhat(xi) e^{i x xi} dxi,
/// discretized as c_j = dx/(2pi) * DFT(f)_j and f(x_m) = dxi * sum_j c_j e^{i xi_j x_m}.
/// Under this convention ||f||_2^2 = 2pi * dxi * sum_j |c_j|^2.
class SpectralField {
public:
  explicit SpectralField(GridSpec grid) : grid_(grid), c_(grid.size()) {}

  SpectralField(GridSpec grid, std::vector<cplx> coefficients) : grid_(grid), c_(std::move(coefficients)) {
    if (c_.size() != grid_.size()) throw PreconditionError("coefficient count does not match grid size");
  }

  static SpectralField from_real(GridSpec grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw PreconditionError("sample count does not match grid size");
    std::vector<cplx> c(values.begin(), values.end());
    fft::forward(c);
    const double scale = grid.dx() / (2.0 * std::numbers::pi);
    for (auto& v : c) v *= scale;
    return {grid, std::move(c)};
  }

  static SpectralField from_complex(GridSpec grid, std::span<const cplx> values) {
    if (values.size() != grid.size()) throw PreconditionError("sample count does not match grid size");
    std::vector<cplx> c(values.begin(), values.end());
    fft::forward(c);
    const double scale = grid.dx() / (2.0 * std::numbers::pi);
    for (auto& v : c) v *= scale;
    return {grid, std::move(c)};
  }

  /// Samples a real function of the centered coordinate x.
  template <class F> static SpectralField from_function(GridSpec grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = f(grid.x(m));
    return from_real(grid, v);
  }

  /// Builds a field directly from its Fourier side, c_j = g(xi_j).
  template <class G> static SpectralField from_spectrum(GridSpec grid, G&& g) {
    std::vector<cplx> c(grid.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = g(grid.frequency(j));
    return {grid, std::move(c)};
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return c_.size(); }
  std::span<const cplx> coefficients() const noexcept { return c_; }
  std::span<cplx> coefficients() noexcept { return c_; }
  const cplx& operator[](std::size_t j) const { return c_[j]; }
  cplx& operator[](std::size_t j) { return c_[j]; }

  std::vector<cplx> to_complex() const {
    std::vector<cplx> v(c_);
    fft::backward(v);
    const double scale = grid_.dxi();
    for (auto& x : v) x *= scale;
    return v;
  }

  std::vector<double> to_real() const {
    const auto v = to_complex();
    std::vector<double> r(v.size());
    std::transform(v.begin(), v.end(), r.begin(), [](const cplx& z) { return z.real(); });
    return r;
  }

  /// Physical-space values on a grid refined by `factor` (trigonometric
  /// interpolation). The Nyquist coefficient is split evenly between +/- n/2.
  std::vector<cplx> to_complex_padded(std::size_t factor) const {
    const std::size_t n = c_.size();
    const std::size_t np = n * factor;
    std::vector<cplx> v(np);
    for (std::size_t j = 1; j < n / 2; ++j) {
      v[j] = c_[j];
      v[np - j] = c_[n - j];
    }
    v[0] = c_[0];
    if (factor == 1) {
      v[n / 2] = c_[n / 2];
    } else {
      v[n / 2] = 0.5 * c_[n / 2];
      v[np - n / 2] = 0.5 * c_[n / 2];
    }
    fft::backward(v);
    const double scale = grid_.dxi();
    for (auto& x : v) x *= scale;
    return v;
  }

  /// sum_j |c_j|^2 dxi, i.e. ||fhat||^2 in L^2(dxi).
  double spectral_energy() const {
    double s = 0.0;
    for (const auto& v : c_) s += std::norm(v);
    return s * grid_.dxi();
  }

  /// Physical L^2 norm via Parseval.
  double l2_norm() const { return std::sqrt(2.0 * std::numbers::pi * spectral_energy()); }

  /// Pointwise Fourier multiplier c_j -> m(xi_j) c_j.
  template <class M> SpectralField multiplied(M&& m) const {
    SpectralField out(*this);
    for (std::size_t j = 0; j < c_.size(); ++j) out.c_[j] *= m(grid_.frequency(j));
    return out;
  }

  /// Largest |c(-xi) - conj c(xi)| over the lattice, ignoring the unpaired Nyquist slot.
  double hermitian_defect() const {
    const std::size_t n = c_.size();
    double d = std::fabs(c_[0].imag());
    for (std::size_t j = 1; j < n / 2; ++j) d = std::max(d, std::abs(c_[n - j] - std::conj(c_[j])));
    return d;
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  SpectralField& operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

  void check_same_grid(const SpectralField& o) const {
    if (!(grid_ == o.grid_)) throw PreconditionError("fields live on different grids");
  }

private:
  GridSpec grid_;
  std::vector<cplx> c_;
};

} // namespace whitham
