#pragma once

#include <cmath>
#include <complex>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whitham/dispersion.hpp"
#include "whitham/errors.hpp"
#include "whitham/norms.hpp"
#include "whitham/sampling.hpp"
#include "whitham/spectral_field.hpp"
#include "whitham/stats.hpp"

namespace whitham {

/// Linear flow E(t) f = e^{i t Lambda(D)} f.
inline SpectralField propagate(const Symbol& sym, const SpectralField& f, double t) {
  if (!std::isfinite(t)) throw DomainError("propagation time must be finite");
  if (t == 0.0) return f;
  return f.multiplied([&](double xi) { return std::polar(1.0, t * sym(xi)); });
}

/// Critical points of Phi(xi; x, t) = x xi / t + Lambda(xi).
struct StationaryInfo {
  bool has_stationary_point = false;
  double xi0 = 0.0;        // positive root; -xi0 is the other one
  double curvature = 0.0;  // Lambda''(xi0)
  double local_scale = 0.0; // t^{-1/2} |Lambda''(xi0)|^{-1/2}
};

inline StationaryInfo stationary_profile(const Symbol& sym, double x, double t) {
  if (!(t > 0.0)) throw PreconditionError("stationary_profile needs t > 0");
  StationaryInfo info;
  const double c = -x / t;
  try {
    info.xi0 = invert_group_velocity(sym, c);
  } catch (const DomainError&) {
    return info;
  }
  info.has_stationary_point = true;
  info.curvature = sym(info.xi0, 2);
  info.local_scale = 1.0 / std::sqrt(t * std::fabs(info.curvature));
  return info;
}

/// I_lambda(u1, u2) = sup over grid pairs with periodic distance <= lambda of
/// |u1(y1) u2(y2)|; sliding-window maxima keep this O(n).
inline double interaction_sup(const GridSpec& grid, std::span<const double> u1, std::span<const double> u2,
                              double lambda) {
  const std::size_t n = grid.size();
  if (u1.size() != n || u2.size() != n) throw PreconditionError("interaction_sup: fields do not match the grid");
  if (!(lambda >= 0.0)) throw PreconditionError("interaction_sup: lambda must be non-negative");
  const auto w = static_cast<std::size_t>(std::floor(lambda / grid.dx() * (1.0 + 1e-12)));
  double best = 0.0;
  if (2 * w + 1 >= n) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m1 = std::max(m1, std::fabs(u1[i]));
      m2 = std::max(m2, std::fabs(u2[i]));
    }
    return m1 * m2;
  }
  // Monotone deque over the periodic extension u2[i - w .. i + w].
  std::deque<long> dq;
  const long nn = static_cast<long>(n);
  const long wl = static_cast<long>(w);
  auto val = [&](long j) { return std::fabs(u2[static_cast<std::size_t>(((j % nn) + nn) % nn)]); };
  for (long j = -wl; j < wl; ++j) {
    while (!dq.empty() && val(dq.back()) <= val(j)) dq.pop_back();
    dq.push_back(j);
  }
  for (long i = 0; i < nn; ++i) {
    const long incoming = i + wl;
    while (!dq.empty() && val(dq.back()) <= val(incoming)) dq.pop_back();
    dq.push_back(incoming);
    while (dq.front() < i - wl) dq.pop_front();
    best = std::max(best, std::fabs(u1[static_cast<std::size_t>(i)]) * val(dq.front()));
  }
  return best;
}

inline double interaction_sup(const SpectralField& u1, const SpectralField& u2, double lambda) {
  u1.check_same_grid(u2);
  const auto a = u1.to_real();
  const auto b = u2.to_real();
  return interaction_sup(u1.grid(), a, b, lambda);
}

/// Envelope t^{-1/3-beta/3} <(x+t)/t^{1/3}>^{-1/4+beta/2} (Z + t^{-1/6} W) for
/// the low-frequency dispersive decay bound.
inline double decay_envelope(double x, double t, double beta, double z_norm, double weight_norm) {
  const double y = (x + t) / std::cbrt(t);
  const double bracket = std::sqrt(1.0 + y * y);
  return std::pow(t, -(1.0 + beta) / 3.0) * std::pow(bracket, -0.25 + 0.5 * beta) *
         (z_norm + std::pow(t, -1.0 / 6.0) * weight_norm);
}

struct DecaySample {
  double t = 0.0;
  double sup = 0.0;            // sup_x ||D|^beta E f|
  double x_at_sup = 0.0;
  double envelope_ratio = 0.0; // sup_x of |..| / envelope(x, t)
};

struct DecayReport {
  double beta = 0.0;
  double z_norm = 0.0;
  double weight_norm = 0.0;
  std::vector<DecaySample> samples;
  LineFit fit;                 // log sup vs log t over the fitted window
  double max_envelope_ratio = 0.0;

  double exponent() const { return fit.slope; }
};

struct DecayOptions {
  std::size_t pad = 4;
  double z_weight = 4.0;
  double fit_fraction = 0.5; // fit the latter part of the time list
  double max_speed = 1.0;
  unsigned jobs = 1;
};

/// Measures sup_x ||D|^beta E(t) f| over `times` and its envelope ratio; fits
/// the decay exponent on the last `fit_fraction` of the (sorted) time list.
inline DecayReport decay_scan(const Symbol& sym, const SpectralField& f, std::span<const double> times, double beta,
                              const DecayOptions& opt = {}) {
  if (!(beta >= 0.0)) throw PreconditionError("decay_scan: beta must be non-negative");
  if (times.size() < 2) throw PreconditionError("decay_scan: need at least two times");
  const auto& grid = f.grid();
  for (double t : times) {
    if (!(t >= 1.0)) throw PreconditionError("decay_scan: times must be >= 1");
    if (t > grid.guard_time(opt.max_speed))
      throw PreconditionError("wraparound: t = " + std::to_string(t) + " exceeds guard time " +
                              std::to_string(grid.guard_time(opt.max_speed)));
  }
  DecayReport rep;
  rep.beta = beta;
  rep.z_norm = norms::z_norm(f, opt.z_weight);
  rep.weight_norm = norms::weighted_norm(f);
  const auto g = beta == 0.0 ? f : f.multiplied([&](double xi) { return std::pow(std::fabs(xi), beta); });

  rep.samples.resize(times.size());
  const double dxp = grid.dx() / static_cast<double>(opt.pad);
  parallel_shards(times.size(), opt.jobs, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      const double t = times[i];
      const auto v = propagate(sym, g, t).to_complex_padded(opt.pad);
      DecaySample s;
      s.t = t;
      const std::size_t np = v.size();
      for (std::size_t m = 0; m < np; ++m) {
        const double x = (m < np / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(np)) * dxp;
        const double a = std::abs(v[m]);
        if (a > s.sup) {
          s.sup = a;
          s.x_at_sup = x;
        }
        s.envelope_ratio = std::max(s.envelope_ratio, a / decay_envelope(x, t, beta, rep.z_norm, rep.weight_norm));
      }
      rep.samples[i] = s;
    }
  });
  for (const auto& s : rep.samples) rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, s.envelope_ratio);

  std::vector<DecaySample> sorted = rep.samples;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  const auto first = static_cast<std::size_t>(std::floor(static_cast<double>(sorted.size()) * (1.0 - opt.fit_fraction)));
  std::vector<double> ts, ys;
  for (std::size_t i = std::min(first, sorted.size() - 2); i < sorted.size(); ++i) {
    ts.push_back(sorted[i].t);
    ys.push_back(sorted[i].sup);
  }
  rep.fit = fit_power_law(ts, ys);
  return rep;
}

/// Log-spaced times t0 * (t1/t0)^{i/(count-1)}.
inline std::vector<double> log_spaced(double t0, double t1, std::size_t count) {
  if (count < 2 || !(t0 > 0.0) || !(t1 > t0)) throw PreconditionError("log_spaced needs 0 < t0 < t1, count >= 2");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

} // namespace whitham
