#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "whitham/dispersion.hpp"
#include "whitham/errors.hpp"
#include "whitham/lp_toolkit.hpp"
#include "whitham/spectral_field.hpp"
#include "whitham/stats.hpp"

namespace whitham {

/// Accumulated modified-scattering phase
///   H(xi, t) = -6 pi s xi / |Lambda''(xi)| \int_0^t |fhat(xi, r)|^2 phi_{>1}(|xi| r^{1/3}) dr / r
/// together with the latest profile fhat and the corrected profile g = e^{iH} fhat.
class ScatteringState {
public:
  static constexpr double kMaxLogStep = 0.05;
  static constexpr double kCurvatureGuard = 1e-14;

  /// Starts at t = 0 with the initial profile.
  ScatteringState(const Symbol& sym, const SpectralField& f_hat0, double nonlinear_sign = 1.0)
      : grid_(f_hat0.grid()), H_(grid_.size(), 0.0), prefactor_(grid_.size(), 0.0), f_hat_(f_hat0), g_(f_hat0) {
    for (std::size_t j = 0; j < grid_.size(); ++j) {
      const double xi = grid_.frequency(j);
      if (xi == 0.0) continue;
      double ratio; // Lambda''(xi) / xi
      if (std::fabs(xi) < 0.5) {
        ratio = second_derivative_over_xi(sym, xi);
      } else {
        const double d2 = sym(xi, 2);
        if (std::fabs(d2) < kCurvatureGuard)
          throw NumericalError("scattering phase: |Lambda''| below guard at xi = " + std::to_string(xi));
        ratio = d2 / xi;
      }
      // xi / |Lambda''| = sign(xi) / |Lambda''/xi|
      prefactor_[j] = -6.0 * std::numbers::pi * nonlinear_sign * (xi > 0.0 ? 1.0 : -1.0) / std::fabs(ratio);
    }
  }

  const GridSpec& grid() const noexcept { return grid_; }
  double last_t() const noexcept { return last_t_; }
  const std::vector<double>& H() const noexcept { return H_; }
  const SpectralField& f_hat() const noexcept { return f_hat_; }
  const SpectralField& g() const noexcept { return g_; }
  /// Latest g, standing in for the (unreachable) limit profile.
  const SpectralField& w_inf_estimate() const noexcept { return g_; }
  double prefactor(std::size_t j) const { return prefactor_[j]; }

  /// Adds the phase increment over [last_t, t_new]. |fhat|^2 is interpolated
  /// linearly in log time (linearly in time on the first interval from 0); the
  /// cutoff weight is integrated by Gauss-Legendre where it is in transition.
  void accumulate_phase(const SpectralField& f_hat_new, double t_new) {
    f_hat_.check_same_grid(f_hat_new);
    if (!(t_new > last_t_))
      throw PreconditionError("accumulate_phase: times must increase (" + std::to_string(t_new) +
                              " after " + std::to_string(last_t_) + ")");
    if (last_t_ > 0.0 && std::log(t_new / last_t_) > kMaxLogStep * (1.0 + 1e-9))
      throw PreconditionError("accumulate_phase: log-time step " + std::to_string(std::log(t_new / last_t_)) +
                              " exceeds " + std::to_string(kMaxLogStep));
    for (std::size_t j = 0; j < grid_.size(); ++j) {
      if (prefactor_[j] == 0.0) continue;
      const double a0 = std::norm(f_hat_[j]);
      const double a1 = std::norm(f_hat_new[j]);
      if (a0 == 0.0 && a1 == 0.0) continue;
      H_[j] += prefactor_[j] * interval_integral(std::fabs(grid_.frequency(j)), last_t_, t_new, a0, a1);
    }
    f_hat_ = f_hat_new;
    last_t_ = t_new;
    for (std::size_t j = 0; j < grid_.size(); ++j) g_[j] = std::polar(1.0, H_[j]) * f_hat_[j];
  }

  /// \int_{t0}^{t1} A(r) phi_{>1}(axi r^{1/3}) dr / r with A interpolating a0, a1.
  static double interval_integral(double axi, double t0, double t1, double a0, double a1) {
    // phi_{>1}(y) = 1 - phi(y/2) vanishes for y <= 5/2 and equals 1 for y >= 3.
    const double r_off = std::pow(2.5 / axi, 3.0);
    const double r_full = std::pow(3.0 / axi, 3.0);
    const double lo = std::max(t0, r_off);
    if (lo >= t1) return 0.0;
    const bool head = t0 == 0.0;
    const double log_t0 = head ? 0.0 : std::log(t0);
    const double dlog = head ? 0.0 : std::log(t1 / t0);
    auto amplitude = [&](double r) {
      if (head) return a0 + (a1 - a0) * r / t1;
      return a0 + (a1 - a0) * (std::log(r) - log_t0) / dlog;
    };
    double total = 0.0;
    // Fully switched-on part: closed form.
    const double on_lo = std::max(lo, r_full);
    if (on_lo < t1) {
      if (head) {
        // \int (a0 + (a1-a0) r/t1) dr/r
        total += a0 * std::log(t1 / on_lo) + (a1 - a0) * (t1 - on_lo) / t1;
      } else {
        const double u0 = (std::log(on_lo) - log_t0) / dlog;
        const double L = std::log(t1 / on_lo);
        total += L * (a0 + (a1 - a0) * 0.5 * (u0 + 1.0));
      }
    }
    // Transition part [lo, min(t1, r_full)], in log time.
    const double tr_hi = std::min(t1, r_full);
    if (lo < tr_hi) {
      const double tau0 = std::log(lo), tau1 = std::log(tr_hi);
      const int pieces = std::max(1, static_cast<int>(std::ceil((tau1 - tau0) / 0.01)));
      const double h = (tau1 - tau0) / pieces;
      for (int p = 0; p < pieces; ++p) {
        const double mid = tau0 + (p + 0.5) * h;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
          const double r = std::exp(mid + 0.5 * h * kGaussNodes[q]);
          total += 0.5 * h * kGaussWeights[q] * amplitude(r) * lp::phi_above(1, axi * std::cbrt(r));
        }
      }
    }
    return total;
  }

private:
  static constexpr std::array<double, 8> kGaussNodes = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> kGaussWeights = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

  GridSpec grid_;
  std::vector<double> H_;
  std::vector<double> prefactor_;
  SpectralField f_hat_;
  SpectralField g_;
  double last_t_ = 0.0;
};

/// Snapshot of (t, fhat, g) for dyadic comparisons.
struct ScatteringSnapshot {
  double t = 0.0;
  SpectralField f_hat;
  SpectralField g;
};

inline ScatteringSnapshot snapshot(const ScatteringState& s) { return {s.last_t(), s.f_hat(), s.g()}; }

struct ConvergenceReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double corrected = 0.0;   // sup_band (1+|xi|^w) |g(t2) - g(t1)|
  double uncorrected = 0.0; // same for fhat
  double xi_at_corrected = 0.0;
};

struct Band1D {
  double xi_min = 0.5;
  double xi_max = 4.0;
};

/// Smallest frequency at which the scattering statement applies at time t.
inline double scattering_threshold(double t, double alpha) { return std::pow(t, -1.0 / 3.0 + alpha); }

inline ConvergenceReport convergence_report(const ScatteringSnapshot& a, const ScatteringSnapshot& b, Band1D band,
                                            double weight_exp, double alpha) {
  a.f_hat.check_same_grid(b.f_hat);
  if (!(band.xi_min > 0.0 && band.xi_max > band.xi_min)) throw PreconditionError("band needs 0 < xi_min < xi_max");
  const double t_lo = std::min(a.t, b.t);
  const double threshold = scattering_threshold(std::max(t_lo, 1.0), alpha);
  if (band.xi_min < threshold)
    throw BandError("band starts at " + std::to_string(band.xi_min) + ", below the threshold t^(-1/3+alpha) = " +
                    std::to_string(threshold));
  ConvergenceReport r;
  r.t1 = a.t;
  r.t2 = b.t;
  const auto& grid = a.f_hat.grid();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double axi = std::fabs(grid.frequency(j));
    if (axi < band.xi_min || axi > band.xi_max) continue;
    const double w = 1.0 + std::pow(axi, weight_exp);
    const double dg = w * std::abs(b.g[j] - a.g[j]);
    if (dg > r.corrected) {
      r.corrected = dg;
      r.xi_at_corrected = grid.frequency(j);
    }
    r.uncorrected = std::max(r.uncorrected, w * std::abs(b.f_hat[j] - a.f_hat[j]));
  }
  return r;
}

/// kappa from increments ~ t^{-kappa} over consecutive dyads.
inline double fit_kappa(const std::vector<ConvergenceReport>& dyads) {
  if (dyads.size() < 2) throw PreconditionError("fit_kappa needs at least two dyads");
  std::vector<double> t, y;
  for (const auto& d : dyads) {
    if (!(d.corrected > 0.0)) throw NumericalError("fit_kappa: zero increment");
    t.push_back(d.t1);
    y.push_back(d.corrected);
  }
  return -fit_power_law(t, y).slope;
}

/// Cauchy-type check over consecutive dyads: corrected increments may grow by
/// at most `noise` from one dyad to the next, and at the last dyad they must
/// sit below `max_final_ratio` times the uncorrected ones.
struct CauchyVerdict {
  std::size_t dyads = 0;
  bool enough_dyads = false;
  bool nonincreasing = false;
  double final_ratio = 0.0;
  bool final_ratio_ok = false;

  bool passed() const { return enough_dyads && nonincreasing && final_ratio_ok; }
};

inline CauchyVerdict cauchy_verdict(const std::vector<ConvergenceReport>& dyads, std::size_t min_dyads = 3,
                                    double noise = 0.2, double max_final_ratio = 0.5) {
  CauchyVerdict v;
  v.dyads = dyads.size();
  v.enough_dyads = dyads.size() >= min_dyads;
  v.nonincreasing = true;
  for (std::size_t i = 1; i < dyads.size(); ++i)
    if (dyads[i].corrected > (1.0 + noise) * dyads[i - 1].corrected) v.nonincreasing = false;
  if (!dyads.empty() && dyads.back().uncorrected > 0.0) {
    v.final_ratio = dyads.back().corrected / dyads.back().uncorrected;
    v.final_ratio_ok = v.final_ratio <= max_final_ratio;
  }
  return v;
}

/// Sample times t0 2^{i/per_octave} up to t_end (inclusive when it lands on
/// the lattice), merged with `extra`; consecutive log gaps stay <= the phase
/// step limit when per_octave >= 14.
inline std::vector<double> dyadic_schedule(double t_end, int octaves, int per_octave, std::vector<double> extra = {}) {
  if (!(t_end > 0.0) || octaves < 1 || per_octave < 1) throw PreconditionError("dyadic_schedule: bad arguments");
  std::vector<double> out;
  const double t0 = std::ldexp(t_end, -octaves);
  for (int i = 0; i <= octaves * per_octave; ++i) {
    const double t = i % per_octave == 0 ? std::ldexp(t0, i / per_octave)
                                         : t0 * std::exp2(static_cast<double>(i) / per_octave);
    out.push_back(t);
  }
  for (double e : extra)
    if (e > 0.0 && e <= t_end) out.push_back(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace whitham
