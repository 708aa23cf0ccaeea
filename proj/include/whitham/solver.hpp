#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whitham/dispersion.hpp"
#include "whitham/errors.hpp"
#include "whitham/fft.hpp"
#include "whitham/grid.hpp"
#include "whitham/lp_toolkit.hpp"
#include "whitham/norms.hpp"
#include "whitham/oscillatory.hpp"
#include "whitham/spectral_field.hpp"

namespace whitham {

enum class Scheme { IFRK4, ETDRK4 };

/// Cubic-term dealiasing. two_thirds zeroes |j| >= n/3; one_half (|j| >= n/4)
/// is the rule that is actually alias-free for a cubic product.
enum class Dealias { TwoThirds, OneHalf, None };

struct InitialCondition {
  enum class Kind { Gaussian, Spectrum };
  Kind kind = Kind::Gaussian;
  double width = 1.0;   // u0 = eps * exp(-((x - center)/width)^2)
  double center = 0.0;
  std::optional<SpectralField> spectrum; // Kind::Spectrum: coefficients of u0 (already scaled)
};

struct SolverConfig {
  GridSpec grid{4096, 512.0};
  Symbol symbol = Symbol::whitham();
  double dt = 0.1;
  double t_end = 100.0;
  Scheme scheme = Scheme::IFRK4;
  Dealias dealias = Dealias::TwoThirds;
  double epsilon = 0.01;
  InitialCondition ic;
  double nonlinear_sign = 1.0;  // +1: +(u^3)_x (defocusing), -1 focusing, 0 linear
  double sobolev_index = 4.0;
  double z_weight = 4.0;
  std::vector<int> dtf_bands;
  double blowup_factor = 100.0;
  double max_group_speed = 1.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double l2_norm = 0.0;
  double hamiltonian = 0.0;
  double sup_norm = 0.0;
  double sobolev_norm = 0.0;
  double z_norm = 0.0;
  double weight1 = 0.0;   // ||x f||_2
  double weight2 = 0.0;   // ||d_x (x f)||_2
  std::vector<double> dtf_band_norms; // ||P_k d_t fhat||_2 per configured band

  bool finite() const {
    for (double v : {t, l2_norm, hamiltonian, sup_norm, sobolev_norm, z_norm, weight1, weight2})
      if (!std::isfinite(v)) return false;
    return std::all_of(dtf_band_norms.begin(), dtf_band_norms.end(), [](double v) { return std::isfinite(v); });
  }
};

inline std::string to_string(Scheme s) { return s == Scheme::IFRK4 ? "ifrk4" : "etdrk4"; }
inline std::string to_string(Dealias d) {
  switch (d) {
  case Dealias::TwoThirds: return "two_thirds";
  case Dealias::OneHalf: return "one_half";
  case Dealias::None: return "none";
  }
  return "?";
}

inline std::vector<double> dealias_mask(const GridSpec& grid, Dealias d) {
  const std::size_t n = grid.size();
  std::vector<double> m(n, 1.0);
  const double cut = d == Dealias::TwoThirds ? static_cast<double>(n) / 3.0
                     : d == Dealias::OneHalf ? static_cast<double>(n) / 4.0
                                             : static_cast<double>(n) / 2.0;
  for (std::size_t j = 0; j < n; ++j)
    if (std::fabs(static_cast<double>(grid.index(j))) >= cut) m[j] = 0.0;
  return m;
}

/// Initial Fourier data u0hat for a config.
inline SpectralField initial_state(const SolverConfig& cfg) {
  if (cfg.ic.kind == InitialCondition::Kind::Spectrum) {
    if (!cfg.ic.spectrum) throw ConfigError("spectral initial condition without data");
    if (!(cfg.ic.spectrum->grid() == cfg.grid)) throw ConfigError("spectral initial condition grid mismatch");
    return *cfg.ic.spectrum;
  }
  if (!(cfg.ic.width > 0.0)) throw ConfigError("gaussian width must be positive");
  auto u = SpectralField::from_function(cfg.grid, [&](double x) {
    const double y = (x - cfg.ic.center) / cfg.ic.width;
    return cfg.epsilon * std::exp(-y * y);
  });
  u[cfg.grid.size() / 2] = 0.0;
  return u;
}

/// The cubic term s * i xi F[u^3] with dealiasing, plus max |u| seen.
class Nonlinearity {
public:
  Nonlinearity(const SolverConfig& cfg)
      : grid_(cfg.grid), sign_(cfg.nonlinear_sign), mask_(dealias_mask(cfg.grid, cfg.dealias)), work_(cfg.grid.size()) {}

  double sign() const noexcept { return sign_; }
  double last_sup() const noexcept { return last_sup_; }

  /// out = s * mask * i xi * F[(mask u)^3]
  void operator()(std::span<const cplx> u_hat, std::span<cplx> out) {
    const std::size_t n = grid_.size();
    if (sign_ == 0.0) {
      std::fill(out.begin(), out.end(), cplx(0.0));
      last_sup_ = 0.0;
      return;
    }
    for (std::size_t j = 0; j < n; ++j) work_[j] = mask_[j] * u_hat[j];
    fft::backward(work_);
    const double dxi = grid_.dxi();
    double sup = 0.0;
    for (auto& z : work_) {
      const double u = z.real() * dxi;
      sup = std::max(sup, std::fabs(u));
      z = u * u * u;
    }
    last_sup_ = sup;
    fft::forward(work_);
    const double scale = grid_.dx() / (2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n; ++j)
      out[j] = sign_ * mask_[j] * cplx(0.0, grid_.frequency(j)) * (work_[j] * scale);
  }

private:
  GridSpec grid_;
  double sign_;
  std::vector<double> mask_;
  std::vector<cplx> work_;
  double last_sup_ = 0.0;
};

/// Time stepper for u_t = i Lambda(D) u + N(u) in Fourier variables. The
/// linear part is integrated exactly (integrating factor / exponential
/// integrator); the stepper accepts signed step sizes, so stepping backwards
/// in time inverts the flow.
class Stepper {
public:
  explicit Stepper(const SolverConfig& cfg)
      : cfg_(cfg), nonlinear_(cfg), n_(cfg.grid.size()), lambda_(n_), a_(n_), b_(n_), c_(n_), d_(n_), tmp_(n_) {
    for (std::size_t j = 0; j < n_; ++j) lambda_[j] = cfg.symbol(cfg.grid.frequency(j));
  }

  const SolverConfig& config() const noexcept { return cfg_; }
  double last_sup() const noexcept { return nonlinear_.last_sup(); }
  Nonlinearity& nonlinearity() noexcept { return nonlinear_; }

  void step(std::span<cplx> u, double h) {
    if (h == 0.0) return;
    prepare(h);
    if (cfg_.scheme == Scheme::IFRK4)
      step_ifrk4(u, h);
    else
      step_etdrk4(u);
    u[n_ / 2] = 0.0;
  }

private:
  void prepare(double h) {
    if (h == cached_h_) return;
    cached_h_ = h;
    e_half_.assign(n_, cplx());
    e_full_.assign(n_, cplx());
    for (std::size_t j = 0; j < n_; ++j) {
      e_half_[j] = std::polar(1.0, 0.5 * h * lambda_[j]);
      e_full_[j] = std::polar(1.0, h * lambda_[j]);
    }
    if (cfg_.scheme == Scheme::ETDRK4) etd_coefficients(h);
  }

  void step_ifrk4(std::span<cplx> u, double h) {
    auto& N = nonlinear_;
    N(u, a_);
    for (std::size_t j = 0; j < n_; ++j) tmp_[j] = e_half_[j] * (u[j] + 0.5 * h * a_[j]);
    N(tmp_, b_);
    for (std::size_t j = 0; j < n_; ++j) tmp_[j] = e_half_[j] * u[j] + 0.5 * h * b_[j];
    N(tmp_, c_);
    for (std::size_t j = 0; j < n_; ++j) tmp_[j] = e_full_[j] * u[j] + h * e_half_[j] * c_[j];
    N(tmp_, d_);
    for (std::size_t j = 0; j < n_; ++j)
      u[j] = e_full_[j] * u[j] +
             (h / 6.0) * (e_full_[j] * a_[j] + 2.0 * e_half_[j] * (b_[j] + c_[j]) + d_[j]);
  }

  // Cox-Matthews ETDRK4 with Kassam-Trefethen contour-averaged coefficients.
  void etd_coefficients(double h) {
    constexpr int M = 64;
    q_.assign(n_, cplx());
    f1_.assign(n_, cplx());
    f2_.assign(n_, cplx());
    f3_.assign(n_, cplx());
    for (std::size_t j = 0; j < n_; ++j) {
      const cplx hl(0.0, h * lambda_[j]);
      cplx q, a1, a2, a3;
      for (int m = 0; m < M; ++m) {
        const cplx r = hl + std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.5) / M);
        const cplx er = std::exp(r);
        const cplx r3 = r * r * r;
        q += (std::exp(0.5 * r) - 1.0) / r;
        a1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
        a2 += (2.0 + r + er * (r - 2.0)) / r3;
        a3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
      }
      q_[j] = h * q / double(M);
      f1_[j] = h * a1 / double(M);
      f2_[j] = h * a2 / double(M);
      f3_[j] = h * a3 / double(M);
    }
  }

  void step_etdrk4(std::span<cplx> v) {
    auto& N = nonlinear_;
    N(v, a_); // Nv
    std::vector<cplx>& av = tmp_;
    for (std::size_t j = 0; j < n_; ++j) av[j] = e_half_[j] * v[j] + q_[j] * a_[j];
    N(av, b_); // Na
    std::vector<cplx> bv(n_);
    for (std::size_t j = 0; j < n_; ++j) bv[j] = e_half_[j] * v[j] + q_[j] * b_[j];
    N(bv, c_); // Nb
    std::vector<cplx> cv(n_);
    for (std::size_t j = 0; j < n_; ++j) cv[j] = e_half_[j] * av[j] + q_[j] * (2.0 * c_[j] - a_[j]);
    N(cv, d_); // Nc
    for (std::size_t j = 0; j < n_; ++j)
      v[j] = e_full_[j] * v[j] + a_[j] * f1_[j] + 2.0 * (b_[j] + c_[j]) * f2_[j] + d_[j] * f3_[j];
  }

  SolverConfig cfg_;
  Nonlinearity nonlinear_;
  std::size_t n_;
  std::vector<double> lambda_;
  std::vector<cplx> a_, b_, c_, d_, tmp_;
  std::vector<cplx> e_half_, e_full_, q_, f1_, f2_, f3_;
  double cached_h_ = std::numeric_limits<double>::quiet_NaN();
};

/// Heuristic stability number dt * max|xi| * 3 * amplitude^2 for the explicit
/// treatment of the cubic term (RK4 is stable on the imaginary axis up to 2.83).
inline double nonlinear_cfl(const SolverConfig& cfg, double amplitude) {
  const auto mask = dealias_mask(cfg.grid, cfg.dealias);
  double xi_max = 0.0;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j] != 0.0) xi_max = std::max(xi_max, std::fabs(cfg.grid.frequency(j)));
  return std::fabs(cfg.nonlinear_sign) * cfg.dt * xi_max * 3.0 * amplitude * amplitude;
}

inline void validate(const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be positive and finite");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (cfg.t_end > cfg.grid.guard_time(cfg.max_group_speed))
    throw ConfigError("t_end = " + std::to_string(cfg.t_end) + " exceeds the wraparound guard time " +
                      std::to_string(cfg.grid.guard_time(cfg.max_group_speed)));
  if (!(cfg.epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (cfg.nonlinear_sign != 1.0 && cfg.nonlinear_sign != -1.0 && cfg.nonlinear_sign != 0.0)
    throw ConfigError("nonlinearity sign must be +1, -1 or 0");
  if (!(cfg.blowup_factor > 0.0)) throw ConfigError("blowup factor must be positive");
  for (int k : cfg.dtf_bands)
    if (!lp::resolvable(cfg.grid, lp::Band::dyadic(k)))
      throw BandError("dtf band " + std::to_string(k) + " lies above the Nyquist frequency");
}

/// ||P_k d_t fhat||_2 = ||P_k N(u)||_2 (physical L^2) from the exact nonlinear term.
inline double dtf_band_norm(Nonlinearity& N, const SpectralField& u_hat, int k) {
  const auto& g = u_hat.grid();
  const lp::Band band = lp::Band::dyadic(k);
  if (!lp::resolvable(g, band)) throw BandError("band " + band.label() + " lies above the Nyquist frequency");
  std::vector<cplx> out(g.size());
  N(u_hat.coefficients(), out);
  double s = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) s += std::norm(band.weight(g.frequency(j)) * out[j]);
  return std::sqrt(2.0 * std::numbers::pi * s * g.dxi());
}

/// Central finite-difference cross-check of dtf_band_norm from profiles at t -/+ delta.
inline double dtf_band_norm_fd(const SpectralField& f_before, const SpectralField& f_after, double delta, int k) {
  f_before.check_same_grid(f_after);
  const auto& g = f_before.grid();
  const lp::Band band = lp::Band::dyadic(k);
  if (!lp::resolvable(g, band)) throw BandError("band " + band.label() + " lies above the Nyquist frequency");
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    s += std::norm(band.weight(g.frequency(j)) * (f_after[j] - f_before[j]) / (2.0 * delta));
  return std::sqrt(2.0 * std::numbers::pi * s * g.dxi());
}

inline SpectralField profile_of(const Symbol& sym, const SpectralField& u_hat, double t) {
  return propagate(sym, u_hat, -t);
}

inline DiagnosticsRecord compute_diagnostics(const SolverConfig& cfg, Nonlinearity& N, const SpectralField& u_hat,
                                             double t) {
  DiagnosticsRecord r;
  r.t = t;
  const auto f = profile_of(cfg.symbol, u_hat, t);
  r.l2_norm = u_hat.l2_norm();
  r.hamiltonian = norms::hamiltonian(cfg.symbol, u_hat, cfg.nonlinear_sign);
  r.sup_norm = norms::sup_norm(u_hat);
  r.sobolev_norm = norms::sobolev_norm(u_hat, cfg.sobolev_index);
  r.z_norm = norms::z_norm(f, cfg.z_weight);
  r.weight1 = norms::weighted_norm(f);
  r.weight2 = norms::weighted_derivative_norm(f);
  for (int k : cfg.dtf_bands) r.dtf_band_norms.push_back(dtf_band_norm(N, u_hat, k));
  return r;
}

struct Sample {
  double t;
  const SpectralField& u_hat;
  const SpectralField& f_hat;
  const DiagnosticsRecord& diagnostics;
};

/// Integrates one configured run from u0 at t = start, landing exactly on
/// every requested time (the last step into each sample is shortened).
class Solver {
public:
  explicit Solver(const SolverConfig& cfg) : Solver(cfg, initial_state(cfg), 0.0) {}

  Solver(const SolverConfig& cfg, SpectralField u0, double t0)
      : cfg_(cfg), stepper_(cfg), u_(std::move(u0)), t_(t0) {
    validate(cfg_);
    if (!(u_.grid() == cfg_.grid)) throw ConfigError("initial state grid mismatch");
    u_[cfg_.grid.size() / 2] = 0.0;
    const double amp = std::max(cfg_.epsilon, norms::sup_norm(u_));
    ceiling_ = cfg_.blowup_factor * amp;
    cfl_ = nonlinear_cfl(cfg_, amp);
    if (cfl_ > 2.8) throw ConfigError("dt too large for the cubic term: stability number " + std::to_string(cfl_));
  }

  double t() const noexcept { return t_; }
  const SpectralField& state() const noexcept { return u_; }
  double stability_number() const noexcept { return cfl_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  const SolverConfig& config() const noexcept { return cfg_; }

  void advance_to(double target) {
    if (!std::isfinite(target)) throw PreconditionError("target time must be finite");
    if (std::fabs(target) > cfg_.grid.guard_time(cfg_.max_group_speed) * (1.0 + 1e-12))
      throw PreconditionError("target time exceeds the wraparound guard time");
    const double span = target - t_;
    if (span == 0.0) return;
    const auto count = static_cast<std::size_t>(std::ceil(std::fabs(span) / cfg_.dt - 1e-9));
    const double h = span / static_cast<double>(std::max<std::size_t>(count, 1));
    const double start = t_;
    for (std::size_t i = 1; i <= count; ++i) {
      stepper_.step(u_.coefficients(), h);
      ++steps_;
      check_health();
      t_ = i == count ? target : start + static_cast<double>(i) * h;
    }
  }

  DiagnosticsRecord diagnostics() { return compute_diagnostics(cfg_, stepper_.nonlinearity(), u_, t_); }

  SpectralField profile() const { return profile_of(cfg_.symbol, u_, t_); }

private:
  void check_health() {
    const double sup = stepper_.last_sup();
    if (!std::isfinite(sup)) throw NumericalError("NaN detected at t = " + std::to_string(t_));
    if (sup > ceiling_)
      throw NumericalError("blowup: sup-norm " + std::to_string(sup) + " exceeds ceiling " + std::to_string(ceiling_) +
                           " near t = " + std::to_string(t_));
    for (const auto& z : u_.coefficients())
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NumericalError("NaN detected at t = " + std::to_string(t_));
  }

  SolverConfig cfg_;
  Stepper stepper_;
  SpectralField u_;
  double t_;
  double ceiling_ = 0.0;
  double cfl_ = 0.0;
  std::size_t steps_ = 0;
};

/// One step of size cfg.dt from state.
inline SpectralField step(const SpectralField& state, const SolverConfig& cfg) {
  Stepper s(cfg);
  SpectralField out(state);
  s.step(out.coefficients(), cfg.dt);
  return out;
}

using SampleObserver = std::function<void(const Sample&)>;

/// Runs to each sample time (sorted, within [0, t_end]) and reports diagnostics;
/// the observer sees every sample without the run holding the trajectory.
inline std::vector<DiagnosticsRecord> run(const SolverConfig& cfg, std::span<const double> sample_times,
                                          const SampleObserver& observer) {
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (!(t >= 0.0 && t <= cfg.t_end)) throw PreconditionError("sample time outside [0, t_end]");
    if (i > 0 && t < sample_times[i - 1]) throw PreconditionError("sample times must be sorted");
  }
  Solver solver(cfg);
  std::vector<DiagnosticsRecord> records;
  for (double t : sample_times) {
    solver.advance_to(t);
    auto rec = solver.diagnostics();
    if (!rec.finite()) throw NumericalError("non-finite diagnostics at t = " + std::to_string(t));
    if (observer) {
      const auto f = solver.profile();
      observer(Sample{t, solver.state(), f, rec});
    }
    records.push_back(std::move(rec));
  }
  return records;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> u_hat;
  std::vector<SpectralField> f_hat;
  std::vector<DiagnosticsRecord> diagnostics;
};

inline Trajectory run(const SolverConfig& cfg, std::span<const double> sample_times) {
  Trajectory tr;
  tr.diagnostics = run(cfg, sample_times, [&](const Sample& s) {
    tr.times.push_back(s.t);
    tr.u_hat.push_back(s.u_hat);
    tr.f_hat.push_back(s.f_hat);
  });
  return tr;
}

} // namespace whitham
