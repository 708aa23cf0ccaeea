#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "whitham/dispersion.hpp"
#include "whitham/spectral_field.hpp"

namespace whitham::norms {

/// sup_x |f(x)| read off a trigonometric interpolant refined by `pad`.
inline double sup_norm(const SpectralField& f, std::size_t pad = 4) {
  const auto v = f.to_complex_padded(pad);
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

/// ||(1 + |xi|^w) fhat||_inf.
inline double z_norm(const SpectralField& f, double weight_exponent) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double xi = std::fabs(f.grid().frequency(j));
    m = std::max(m, (1.0 + std::pow(xi, weight_exponent)) * std::abs(f[j]));
  }
  return m;
}

/// ||<xi>^N fhat|| scaled to the physical H^N norm.
inline double sobolev_norm(const SpectralField& f, double order) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double xi = f.grid().frequency(j);
    s += std::pow(1.0 + xi * xi, order) * std::norm(f[j]);
  }
  return std::sqrt(2.0 * std::numbers::pi * s * f.grid().dxi());
}

/// ||x f||_2 with x the centered coordinate. Multiplying the inverse transform
/// by the centered coordinate is exactly spectral differentiation of fhat along
/// the periodic xi-lattice (x f <-> i d/dxi fhat).
inline double weighted_norm(const SpectralField& f) {
  const auto v = f.to_complex();
  const auto& g = f.grid();
  double s = 0.0;
  for (std::size_t m = 0; m < v.size(); ++m) s += std::norm(g.x(m) * v[m]);
  return std::sqrt(s * g.dx());
}

/// ||x f||_2 from a sixth-order centered difference of fhat in xi; an
/// independent route to weighted_norm for localized profiles.
inline double weighted_norm_finite_difference(const SpectralField& f) {
  const std::size_t n = f.size();
  const auto at = [&](long j) {
    const long nn = static_cast<long>(n);
    return f[static_cast<std::size_t>(((j % nn) + nn) % nn)];
  };
  const double h = f.grid().dxi();
  double s = 0.0;
  for (long j = 0; j < static_cast<long>(n); ++j) {
    const cplx d = (-at(j - 3) + 9.0 * at(j - 2) - 45.0 * at(j - 1) + 45.0 * at(j + 1) - 9.0 * at(j + 2) + at(j + 3)) /
                   (60.0 * h);
    s += std::norm(d);
  }
  return std::sqrt(2.0 * std::numbers::pi * s * h);
}

/// ||d/dx (x f)||_2.
inline double weighted_derivative_norm(const SpectralField& f) {
  const auto v = f.to_complex();
  const auto& g = f.grid();
  std::vector<cplx> xf(v.size());
  for (std::size_t m = 0; m < v.size(); ++m) xf[m] = g.x(m) * v[m];
  const auto h = SpectralField::from_complex(g, xf);
  double s = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) s += std::norm(g.frequency(j) * h[j]);
  return std::sqrt(2.0 * std::numbers::pi * s * g.dxi());
}

/// H(u) = \int (1/2) u L u + (s/4) u^4 dx, L = Lambda(D)/D, for a real field with
/// nonlinearity sign s (+1 defocusing (u^3)_x, -1 focusing, 0 linear).
inline double hamiltonian(const Symbol& sym, const SpectralField& u_hat, double nonlinear_sign = 1.0) {
  const auto& g = u_hat.grid();
  double quad = 0.0;
  for (std::size_t j = 0; j < u_hat.size(); ++j) {
    const double xi = g.frequency(j);
    const double l = xi == 0.0 ? sym(0.0, 1) : sym(xi) / xi;
    quad += l * std::norm(u_hat[j]);
  }
  quad *= 2.0 * std::numbers::pi * g.dxi();
  double quart = 0.0;
  if (nonlinear_sign != 0.0) {
    // u^4 has twice the bandwidth of u; doubling the grid makes the sum exact.
    const auto v = u_hat.to_complex_padded(2);
    for (const auto& z : v) {
      const double r2 = z.real() * z.real();
      quart += r2 * r2;
    }
    quart *= g.dx() / 2.0;
  }
  return 0.5 * quad + 0.25 * nonlinear_sign * quart;
}

} // namespace whitham::norms
