#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "whitham/errors.hpp"
#include "whitham/fft.hpp"
#include "whitham/lp_toolkit.hpp"
#include "whitham/sampling.hpp"
#include "whitham/spectral_field.hpp"

namespace whitham::multiplier {

template <std::size_t D> using Point = std::array<double, D>;
template <std::size_t D> using Function = std::function<cplx(const Point<D>&)>;

/// Sampling box [-half_width, half_width) per axis with `samples` points each.
template <std::size_t D> struct Box {
  Point<D> half_width;
  std::array<int, D> samples;

  static Box cube(double half, int n) {
    Box b;
    b.half_width.fill(half);
    b.samples.fill(n);
    return b;
  }
};

struct SNormOptions {
  int pad = 4;
  double edge_tolerance = 1e-8;
  std::size_t max_points = std::size_t{1} << 23;
};

/// ||m||_S = (2pi)^{-D} || \int m(xi) e^{i z.xi} dxi ||_{L^1(dz)}.
///
/// With this normalization a trilinear operator with symbol m satisfies
/// ||T_m(f1,f2,f3)||_{L^2} <= ||m||_S ||f1||_2 ||f2||_inf ||f3||_inf exactly.
/// The kernel is evaluated by a zero-padded D-dimensional FFT of the samples
/// and integrated with the trapezoid rule on the resulting z-lattice.
template <std::size_t D> double s_norm(const Function<D>& m, const Box<D>& box, const SNormOptions& opt = {}) {
  static_assert(D >= 1 && D <= 3, "s_norm supports 1 to 3 dimensions");
  if (opt.pad < 4) throw PreconditionError("s_norm needs a zero-padding factor of at least 4");
  std::array<int, D> padded;
  std::array<double, D> step;
  std::size_t total = 1;
  for (std::size_t a = 0; a < D; ++a) {
    if (box.samples[a] < 4 || !(box.half_width[a] > 0.0)) throw PreconditionError("s_norm: degenerate box");
    padded[a] = box.samples[a] * opt.pad;
    step[a] = 2.0 * box.half_width[a] / box.samples[a];
    total *= static_cast<std::size_t>(padded[a]);
  }
  if (total > opt.max_points)
    throw PreconditionError("s_norm: padded lattice of " + std::to_string(total) + " points exceeds the memory budget");

  std::vector<cplx> data(total);
  double peak = 0.0, edge = 0.0;
  std::array<int, D> idx{};
  const auto offset = [&](const std::array<int, D>& i) {
    std::size_t o = 0;
    for (std::size_t a = 0; a < D; ++a) o = o * static_cast<std::size_t>(padded[a]) + static_cast<std::size_t>(i[a]);
    return o;
  };
  std::size_t count = 1;
  for (std::size_t a = 0; a < D; ++a) count *= static_cast<std::size_t>(box.samples[a]);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rem = c;
    for (std::size_t a = D; a-- > 0;) {
      idx[a] = static_cast<int>(rem % static_cast<std::size_t>(box.samples[a]));
      rem /= static_cast<std::size_t>(box.samples[a]);
    }
    Point<D> xi;
    bool on_edge = false;
    for (std::size_t a = 0; a < D; ++a) {
      xi[a] = -box.half_width[a] + idx[a] * step[a];
      on_edge = on_edge || idx[a] == 0 || idx[a] == box.samples[a] - 1;
    }
    const cplx v = m(xi);
    peak = std::max(peak, std::abs(v));
    if (on_edge) edge = std::max(edge, std::abs(v));
    data[offset(idx)] = v;
  }
  if (peak == 0.0) return 0.0;
  if (edge > opt.edge_tolerance * peak)
    throw NumericalError("s_norm: multiplier not decayed at the box edge (" + std::to_string(edge / peak) +
                         " of peak); aliasing risk");

  std::vector<int> dims(padded.begin(), padded.end());
  fft::transform(data, dims, fft::Direction::Backward);
  double cell = 1.0;
  double sum = 0.0;
  for (const auto& v : data) sum += std::abs(v);
  for (std::size_t a = 0; a < D; ++a) {
    const double dz = 2.0 * std::numbers::pi / (padded[a] * step[a]);
    cell *= step[a] * dz / (2.0 * std::numbers::pi);
  }
  return sum * cell;
}

/// S-norm of m localized to the dyadic annuli k_i on each axis:
/// m(xi) psi_{k1}(xi_1) psi_{k2}(xi_2) psi_{k3}(xi_3).
inline double localized_s_norm(const Function<3>& m, std::array<int, 3> k, int samples_per_axis,
                               const SNormOptions& opt = {}) {
  Box<3> box;
  for (std::size_t a = 0; a < 3; ++a) {
    box.half_width[a] = 1.6 * std::ldexp(1.0, k[a]);
    box.samples[a] = samples_per_axis;
  }
  return s_norm<3>(
      [&](const Point<3>& xi) {
        return m(xi) * lp::psi_l(k[0], xi[0]) * lp::psi_l(k[1], xi[1]) * lp::psi_l(k[2], xi[2]);
      },
      box, opt);
}

/// Symbol of a trilinear operator: m(xi1, xi2, xi3) with xi3 = xi - xi1 - xi2.
using TrilinearSymbol = std::function<cplx(double, double, double)>;

inline constexpr std::size_t kDenseLimit = 256;

/// F[T_m(f1,f2,f3)](xi) = sum over lattice pairs of m(xi1, xi2, xi - xi1 - xi2)
/// f1hat(xi1) f2hat(xi2) f3hat(xi - xi1 - xi2) dxi^2, with output indices
/// wrapped periodically. O(n^3); refuses grids beyond the dense limit.
inline SpectralField apply_trilinear(const TrilinearSymbol& m, const SpectralField& f1, const SpectralField& f2,
                                     const SpectralField& f3, unsigned jobs = 1) {
  f1.check_same_grid(f2);
  f1.check_same_grid(f3);
  const auto& g = f1.grid();
  const std::size_t n = g.size();
  if (n > kDenseLimit)
    throw PreconditionError("apply_trilinear: dense application limited to n <= " + std::to_string(kDenseLimit) +
                            ", got " + std::to_string(n));
  // Skip empty input modes up front.
  std::vector<std::size_t> nz1, nz2;
  for (std::size_t j = 0; j < n; ++j) {
    if (f1[j] != cplx(0.0)) nz1.push_back(j);
    if (f2[j] != cplx(0.0)) nz2.push_back(j);
  }
  SpectralField out(g);
  const double w = g.dxi() * g.dxi();
  parallel_shards(n, jobs, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t j = begin; j < end; ++j) {
      cplx acc = 0.0;
      for (std::size_t j1 : nz1) {
        for (std::size_t j2 : nz2) {
          const std::size_t j3 = (j + 2 * n - j1 - j2) % n;
          const cplx c3 = f3[j3];
          if (c3 == cplx(0.0)) continue;
          acc += m(g.frequency(j1), g.frequency(j2), g.frequency(j3)) * f1[j1] * f2[j2] * c3;
        }
      }
      out[j] = acc * w;
    }
  });
  return out;
}

/// Dense table of m over the lattice (n^3 entries), for repeated application.
inline std::vector<cplx> tabulate(const TrilinearSymbol& m, const GridSpec& g) {
  if (g.size() > kDenseLimit)
    throw PreconditionError("tabulate: dense multiplier storage limited to n <= " + std::to_string(kDenseLimit));
  const std::size_t n = g.size();
  std::vector<cplx> t(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) t[(a * n + b) * n + c] = m(g.frequency(a), g.frequency(b), g.frequency(c));
  return t;
}

} // namespace whitham::multiplier
