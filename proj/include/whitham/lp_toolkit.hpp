#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <string>
#include <utility>

#include "whitham/errors.hpp"
#include "whitham/spectral_field.hpp"

namespace whitham::lp {

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, built from the mollifier
/// profile h(x) = exp(-1/x).
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

/// Even cutoff: 1 on [-5/4, 5/4], 0 outside [-3/2, 3/2].
inline double phi(double xi) { return 1.0 - smooth_step((std::fabs(xi) - 1.25) * 4.0); }

/// Annular piece psi(xi) = phi(xi) - phi(2 xi), supported in 5/8 <= |xi| <= 3/2.
inline double psi(double xi) { return phi(xi) - phi(2.0 * xi); }

inline double phi_l(int l, double xi) { return phi(std::ldexp(xi, -l)); }
inline double psi_l(int l, double xi) { return psi(std::ldexp(xi, -l)); }

/// phi_k^l: psi_k for k > l, phi_l for k = l, zero below.
inline double phi_kl(int k, int l, double xi) {
  if (k > l) return psi_l(k, xi);
  if (k == l) return phi_l(l, xi);
  return 0.0;
}

/// phi_{>l} = 1 - phi_l.
inline double phi_above(int l, double xi) { return 1.0 - phi_l(l, xi); }

/// A frequency window: one dyadic annulus psi_k, everything below (phi_l),
/// or everything above (1 - phi_l).
struct Band {
  enum class Kind { Dyadic, Below, Above };
  Kind kind;
  int index;

  static Band dyadic(int k) { return {Kind::Dyadic, k}; }
  static Band below(int l) { return {Kind::Below, l}; }
  static Band above(int l) { return {Kind::Above, l}; }

  double weight(double xi) const {
    switch (kind) {
    case Kind::Dyadic: return psi_l(index, xi);
    case Kind::Below: return phi_l(index, xi);
    case Kind::Above: return phi_above(index, xi);
    }
    return 0.0;
  }

  std::string label() const {
    switch (kind) {
    case Kind::Dyadic: return "P_" + std::to_string(index);
    case Kind::Below: return "P_<=" + std::to_string(index);
    case Kind::Above: return "P_>" + std::to_string(index);
    }
    return "?";
  }
};

/// What project() does with a dyadic band beyond the lattice.
enum class OutOfLattice { Error, Zero };

/// True when the dyadic band k can be represented on `grid`.
inline bool resolvable(const GridSpec& grid, const Band& band) {
  if (band.kind != Band::Kind::Dyadic) return true;
  return std::ldexp(1.0, band.index - 1) <= grid.nyquist();
}

/// Littlewood-Paley projection: multiplies the field's spectrum by the band's bump.
inline SpectralField project(const SpectralField& field, const Band& band,
                             OutOfLattice policy = OutOfLattice::Error) {
  if (!resolvable(field.grid(), band)) {
    if (policy == OutOfLattice::Error)
      throw BandError("band " + band.label() + " lies above the Nyquist frequency " +
                      std::to_string(field.grid().nyquist()));
    std::clog << "warning: band " << band.label() << " above Nyquist, projecting to zero\n";
    return SpectralField(field.grid());
  }
  return field.multiplied([&](double xi) { return band.weight(xi); });
}

/// Dyadic time partition q_0, ..., q_{L+1} of [0, t].
///
/// For t >= 4, L = ceil(log2 t) - 1 and with c_m(s) = rho(s / 2^m) (rho = 1 on
/// [0,1], 0 beyond 2) and an end cutoff e(s) falling from 1 to 0 over [t-2, t]:
///   q_0 = e c_0,  q_m = e (c_m - c_{m-1}),  q_L = e (1 - c_{L-1}),  q_{L+1} = 1 - e.
/// For t < 4 the partition degenerates to the two pieces q_0 and q_{L+1}.
class TimePartition {
public:
  explicit TimePartition(double t) : t_(t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("time partition needs finite t >= 0");
    if (t >= 4.0)
      L_ = static_cast<int>(std::ceil(std::log2(t))) - 1;
    else
      L_ = t <= 2.0 ? 0 : 1;
  }

  double t() const noexcept { return t_; }
  int L() const noexcept { return L_; }
  int pieces() const noexcept { return L_ + 2; }
  bool degenerate() const noexcept { return t_ < 4.0; }

  double q(int m, double s) const {
    if (m < 0 || m > L_ + 1) throw PreconditionError("time partition piece index out of range");
    if (s < 0.0 || s > t_) return 0.0;
    if (degenerate()) {
      const double first = degenerate_first(s);
      if (m == 0) return first;
      if (m == L_ + 1) return 1.0 - first;
      return 0.0;
    }
    const double e = end_cutoff(s);
    if (m == L_ + 1) return 1.0 - e;
    if (m == 0) return e * c(0, s);
    if (m == L_) return e * (1.0 - c(L_ - 1, s));
    return e * (c(m, s) - c(m - 1, s));
  }

  double sum(double s) const {
    double acc = 0.0;
    for (int m = 0; m <= L_ + 1; ++m) acc += q(m, s);
    return acc;
  }

  /// Nominal support [lo, hi] of piece m.
  std::pair<double, double> support(int m) const {
    if (m == 0) return {0.0, std::min(2.0, t_)};
    if (m == L_ + 1) return {std::max(0.0, t_ - 2.0), t_};
    return {std::ldexp(1.0, m - 1), std::min(std::ldexp(1.0, m + 1), t_)};
  }

private:
  static double c(int m, double s) { return 1.0 - smooth_step(std::ldexp(s, -m) - 1.0); }
  double end_cutoff(double s) const { return smooth_step((t_ - s) / 2.0); }

  double degenerate_first(double s) const {
    if (t_ == 0.0) return 1.0;
    const double a = std::max(t_ - 2.0, 0.0);
    const double b = std::min(t_, 2.0);
    return 1.0 - smooth_step((s - a) / (b - a));
  }

  double t_;
  int L_;
};

inline TimePartition build_time_partition(double t) { return TimePartition(t); }

/// Writes xi, phi, psi, phi_l, psi_l over [lo, hi] as CSV.
inline void write_bump_table(std::ostream& os, double lo, double hi, double step, int l) {
  if (!(step > 0.0) || hi < lo) throw PreconditionError("bump table needs lo <= hi and step > 0");
  os << "xi,phi,psi,phi_l,psi_l\n";
  char buf[160];
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    const double xi = lo + static_cast<double>(i) * step;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", xi, phi(xi), psi(xi), phi_l(l, xi),
                  psi_l(l, xi));
    os << buf;
  }
}

} // namespace whitham::lp
