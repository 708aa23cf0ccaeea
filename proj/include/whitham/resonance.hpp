#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "whitham/dispersion.hpp"
#include "whitham/errors.hpp"
#include "whitham/sampling.hpp"

namespace whitham::resonance {

/// Frequencies (xi, eta, sigma) of a cubic interaction and the sign channel
/// (iota1, iota2, iota3) of the three input profiles. The remaining input
/// frequency is xi - eta - sigma.
struct ResonancePoint {
  double xi = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
  int iota1 = 1;
  int iota2 = 1;
  int iota3 = 1;

  double rest() const { return xi - eta - sigma; }
};

/// Phi = Lambda(xi) - Lambda(xi - eta - sigma) - Lambda(eta) - Lambda(sigma).
inline double phi(const Symbol& sym, const ResonancePoint& p) {
  return sym(p.xi) - sym(p.rest()) - sym(p.eta) - sym(p.sigma);
}

struct Gradient {
  double d_xi;
  double d_eta;
  double d_sigma;
};

inline Gradient phi_gradient(const Symbol& sym, const ResonancePoint& p) {
  const double da = sym(p.rest(), 1);
  return {sym(p.xi, 1) - da, da - sym(p.eta, 1), da - sym(p.sigma, 1)};
}

/// (a+b)^p - a^p - b^p for 0 <= a <= b without cancellation.
inline long double binomial_excess(long double a, long double b, int p) {
  if (a == 0.0L) return 0.0L;
  const long double r = a / b;
  return std::pow(b, p) * (std::expm1(p * std::log1p(r)) - std::pow(r, p));
}

/// Lambda(a) + Lambda(b) - Lambda(a + b) for a, b >= 0.
///
/// For the Whitham symbol with a + b < 1/2 this is summed from the Maclaurin
/// series, where every bracket (a+b)^p - a^p - b^p is positive, so tiny gaps
/// keep full relative accuracy.
inline double two_wave_gap(const Symbol& sym, double a, double b) {
  if (a > b) std::swap(a, b);
  if (a < 0.0) throw DomainError("two-wave gap needs non-negative frequencies");
  if (a == 0.0) return 0.0;
  if (sym.kind() == SymbolKind::Whitham && a + b < 0.5) {
    long double acc = 0.0L;
    for (std::size_t n = kWhithamSeries.size() - 1; n >= 1; --n)
      acc -= kWhithamSeries[n] * binomial_excess(a, b, static_cast<int>(2 * n + 1));
    return static_cast<double>(acc);
  }
  return sym(a) + sym(b) - sym(a + b);
}

/// Lambda(a) + Lambda(b) + Lambda(c) - Lambda(a + b + c) as a sum of two
/// non-negative two-wave gaps.
inline double three_wave_gap(const Symbol& sym, double c, double a, double b) {
  return two_wave_gap(sym, a, b) + two_wave_gap(sym, a + b, c);
}

/// a^{1/2} (a ^ 1)^{1/2} (b ^ 1)^2 for 0 <= a <= b.
inline double resonance_comparand(double a, double b) {
  return std::sqrt(a) * std::sqrt(std::min(a, 1.0)) * std::pow(std::min(b, 1.0), 2);
}

struct BoundReport {
  std::string region;
  std::size_t samples = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::vector<double> argmin;
  std::vector<double> argmax;

  bool passed() const { return samples > 0 && min_ratio > 0.0 && std::isfinite(max_ratio); }
  double spread() const { return max_ratio / min_ratio; }

  void absorb(double ratio, const std::vector<double>& point) {
    ++samples;
    if (ratio < min_ratio) {
      min_ratio = ratio;
      argmin = point;
    }
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = point;
    }
  }

  void merge(const BoundReport& o) {
    samples += o.samples;
    if (o.min_ratio < min_ratio) {
      min_ratio = o.min_ratio;
      argmin = o.argmin;
    }
    if (o.max_ratio > max_ratio) {
      max_ratio = o.max_ratio;
      argmax = o.argmax;
    }
  }
};

struct ScanOptions {
  std::uint64_t seed = 20240601;
  unsigned jobs = 1;
};

namespace detail {

template <class Sample>
BoundReport sharded_scan(std::size_t cells, unsigned jobs, std::string region, Sample&& sample) {
  std::vector<BoundReport> shards(std::max(1u, jobs));
  parallel_shards(cells, jobs, [&](std::size_t begin, std::size_t end, unsigned s) {
    for (std::size_t i = begin; i < end; ++i) sample(i, shards[s]);
  });
  BoundReport out;
  out.region = std::move(region);
  for (const auto& s : shards) out.merge(s);
  return out;
}

inline std::size_t strata_per_axis(std::size_t samples, int dims) {
  const double root = std::pow(static_cast<double>(samples), 1.0 / dims);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(root)));
}

} // namespace detail

/// Ratio of Lambda(a)+Lambda(b)-Lambda(a+b) to a^{1/2}(a^1)^{1/2}(b^1)^2 over
/// 0 <= a <= b <= box, using one jittered sample per cell of a square grid.
inline BoundReport check_two_wave_bound(const Symbol& sym, double box, std::size_t samples,
                                        const ScanOptions& opt = {}) {
  if (!(box > 0.0)) throw PreconditionError("degenerate box: upper edge must be positive");
  if (samples < 1) throw PreconditionError("need at least one sample");
  const std::size_t m = detail::strata_per_axis(samples, 2);
  const double h = box / static_cast<double>(m);
  return detail::sharded_scan(m * m, opt.jobs, "two-wave [0," + std::to_string(box) + "]^2",
                              [&](std::size_t cell, BoundReport& rep) {
                                const double u = counter_uniform(opt.seed, cell, 0);
                                const double v = counter_uniform(opt.seed, cell, 1);
                                double a = (static_cast<double>(cell % m) + u) * h;
                                double b = (static_cast<double>(cell / m) + v) * h;
                                if (a > b) std::swap(a, b);
                                const double comp = resonance_comparand(a, b);
                                if (!(comp > 0.0)) return;
                                rep.absorb(two_wave_gap(sym, a, b) / comp, {a, b});
                              });
}

/// As check_two_wave_bound for Lambda(a)+Lambda(b)+Lambda(c)-Lambda(a+b+c)
/// over 0 <= c <= a <= b <= box (cubic strata).
inline BoundReport check_three_wave_bound(const Symbol& sym, double box, std::size_t samples,
                                          const ScanOptions& opt = {}) {
  if (!(box > 0.0)) throw PreconditionError("degenerate box: upper edge must be positive");
  if (samples < 1) throw PreconditionError("need at least one sample");
  const std::size_t m = detail::strata_per_axis(samples, 3);
  const double h = box / static_cast<double>(m);
  return detail::sharded_scan(m * m * m, opt.jobs, "three-wave [0," + std::to_string(box) + "]^3",
                              [&](std::size_t cell, BoundReport& rep) {
                                std::array<double, 3> x{};
                                std::size_t rem = cell;
                                for (int d = 0; d < 3; ++d) {
                                  x[d] = (static_cast<double>(rem % m) + counter_uniform(opt.seed, cell, d)) * h;
                                  rem /= m;
                                }
                                std::sort(x.begin(), x.end());
                                const double c = x[0], a = x[1], b = x[2];
                                const double comp = resonance_comparand(a, b);
                                if (!(comp > 0.0)) return;
                                rep.absorb(three_wave_gap(sym, c, a, b) / comp, {c, a, b});
                              });
}

/// Four-wave sums under 2^k ~ |xi1| ~ |xi2| ~ |xi3| >> |xi4|, sum xi_i = 0.
struct FourWaveReport {
  int k = 0;
  int regime_threshold = 100;
  std::size_t feasible = 0;
  std::size_t rejected = 0;
  std::size_t same_sign_channel = 0;  // (+,+,+,-) after reordering
  std::size_t split_sign_channel = 0; // (+,+,-,-)
  BoundReport primary;                // against 2^{k/2} (k >= threshold) or 2^{3k}
  BoundReport high_comparand;         // always against 2^{k/2}

  bool passed() const { return feasible > 0 && primary.min_ratio > 0.0; }
};

/// |sum Lambda(xi_i)| with xi1, xi2 > 0, xi3 = -(xi1 + xi2 + xi4).
inline double four_wave_sum(const Symbol& sym, double xi1, double xi2, double xi4) {
  if (xi4 >= 0.0) return two_wave_gap(sym, xi1, xi2) + two_wave_gap(sym, xi1 + xi2, xi4);
  const double d = -xi4;
  const double c = xi1 + xi2 - d;
  return std::fabs(two_wave_gap(sym, xi1, xi2) - two_wave_gap(sym, c, d));
}

/// Samples xi1, xi2 in [2^{k-1}, 2^{k+1}] (square strata), xi4 uniform in
/// [-2^{k-5}, 2^{k-5}], and xi3 fixed by the zero-sum constraint; samples with
/// |xi3| outside the band are rejected.
inline FourWaveReport check_four_wave_bound(const Symbol& sym, int k, std::size_t samples,
                                            const ScanOptions& opt = {}, int regime_threshold = 100) {
  if (samples < 1) throw PreconditionError("need at least one sample");
  const double lo = std::ldexp(1.0, k - 1);
  const double hi = std::ldexp(1.0, k + 1);
  const double small = std::ldexp(1.0, k - 5);
  const double primary_scale = k >= regime_threshold ? std::pow(2.0, 0.5 * k) : std::pow(2.0, 3.0 * k);
  const double high_scale = std::pow(2.0, 0.5 * k);
  const std::size_t m = detail::strata_per_axis(samples, 2);
  const double h = (hi - lo) / static_cast<double>(m);

  struct Shard {
    FourWaveReport rep;
  };
  std::vector<Shard> shards(std::max(1u, opt.jobs));
  parallel_shards(m * m, opt.jobs, [&](std::size_t begin, std::size_t end, unsigned s) {
    auto& rep = shards[s].rep;
    for (std::size_t cell = begin; cell < end; ++cell) {
      const double xi1 = lo + (static_cast<double>(cell % m) + counter_uniform(opt.seed, cell, 0)) * h;
      const double xi2 = lo + (static_cast<double>(cell / m) + counter_uniform(opt.seed, cell, 1)) * h;
      const double xi4 = small * (2.0 * counter_uniform(opt.seed, cell, 2) - 1.0);
      const double xi3 = -(xi1 + xi2 + xi4);
      if (std::fabs(xi3) < lo || std::fabs(xi3) > hi) {
        ++rep.rejected;
        continue;
      }
      ++rep.feasible;
      if (xi4 >= 0.0) ++rep.same_sign_channel; else ++rep.split_sign_channel;
      const double value = four_wave_sum(sym, xi1, xi2, xi4);
      rep.primary.absorb(value / primary_scale, {xi1, xi2, xi3, xi4});
      rep.high_comparand.absorb(value / high_scale, {xi1, xi2, xi3, xi4});
    }
  });
  FourWaveReport out;
  out.k = k;
  out.regime_threshold = regime_threshold;
  out.primary.region = "four-wave k=" + std::to_string(k);
  out.high_comparand.region = out.primary.region + " vs 2^{k/2}";
  for (const auto& s : shards) {
    out.feasible += s.rep.feasible;
    out.rejected += s.rep.rejected;
    out.same_sign_channel += s.rep.same_sign_channel;
    out.split_sign_channel += s.rep.split_sign_channel;
    out.primary.merge(s.rep.primary);
    out.high_comparand.merge(s.rep.high_comparand);
  }
  if (out.feasible == 0)
    throw PreconditionError("infeasible sample set: zero-sum constraint never stays in band for k=" +
                            std::to_string(k));
  return out;
}

/// Multipliers of Phi_xi = m1 Phi + m2 Phi_eta + m3 Phi_sigma and the identity residual.
struct PhiXiDecomposition {
  double m1;
  double m2;
  double m3;
  double residual;
  double phi_xi;
};

inline constexpr double kDefaultDenominatorGuard = 1e-8;

/// Evaluates the three quotient multipliers literally:
///   m1 = Q,  Q = (Lambda'(xi) - Lambda'(r)) / (Lambda(|xi|) - iota1 Lambda(r)),
///   m2 = -iota2 Q (iota2 Lambda(eta) - iota1 Lambda(r)) / (Lambda'(eta) - Lambda'(r)),
///   m3 = -iota3 Q (iota3 Lambda(sigma) - iota1 Lambda(r)) / (Lambda'(sigma) - Lambda'(r)),
/// with r = xi - eta - sigma. The identity holds for xi > 0 and channels with
/// iota1 + iota2 + iota3 = 1.
inline PhiXiDecomposition phixi_decomposition(const Symbol& sym, const ResonancePoint& p,
                                              double guard = kDefaultDenominatorGuard) {
  auto is_sign = [](int s) { return s == 1 || s == -1; };
  if (!is_sign(p.iota1) || !is_sign(p.iota2) || !is_sign(p.iota3))
    throw PreconditionError("sign channel entries must be +1 or -1");
  if (p.iota1 + p.iota2 + p.iota3 != 1)
    throw PreconditionError("phi_xi identity needs iota1 + iota2 + iota3 = 1");
  if (!(p.xi > 0.0)) throw PreconditionError("phi_xi identity is stated for xi > 0");
  const double r = p.rest();
  const double lam_r = sym(r);
  const double dlam_r = sym(r, 1);
  const double den1 = sym(std::fabs(p.xi)) - p.iota1 * lam_r;
  const double den2 = sym(p.eta, 1) - dlam_r;
  const double den3 = sym(p.sigma, 1) - dlam_r;
  if (std::fabs(den1) < guard) throw NumericalError("near-singular quotient: Lambda(|xi|) - iota1 Lambda(xi-eta-sigma)");
  if (std::fabs(den2) < guard) throw NumericalError("near-singular quotient: Lambda'(eta) - Lambda'(xi-eta-sigma)");
  if (std::fabs(den3) < guard) throw NumericalError("near-singular quotient: Lambda'(sigma) - Lambda'(xi-eta-sigma)");
  const double q = (sym(p.xi, 1) - dlam_r) / den1;
  const double m1 = q;
  const double m2 = -p.iota2 * q * (p.iota2 * sym(p.eta) - p.iota1 * lam_r) / den2;
  const double m3 = -p.iota3 * q * (p.iota3 * sym(p.sigma) - p.iota1 * lam_r) / den3;
  const auto g = phi_gradient(sym, p);
  const double ph = phi(sym, p);
  const double residual = std::fabs(g.d_xi - (m1 * ph + m2 * g.d_eta + m3 * g.d_sigma));
  return {m1, m2, m3, residual, g.d_xi};
}

/// Sampled sup of |m1|, |m2|, |m3| over the comparable-frequency region
/// xi, eta, sigma in [2^k, 2^{k+1}] with channel (-,+,+); guarded points only.
struct MultiplierSizeScan {
  int k = 0;
  std::size_t used = 0;
  std::size_t rejected = 0;
  double sup_m1 = 0.0;
  double sup_m2 = 0.0;
  double sup_m3 = 0.0;

  double scaled_m1() const { return sup_m1 * std::ldexp(1.0, k); }
};

inline MultiplierSizeScan scan_multiplier_sizes(const Symbol& sym, int k, std::size_t samples,
                                                std::uint64_t seed = 7, double guard = kDefaultDenominatorGuard) {
  MultiplierSizeScan out;
  out.k = k;
  const double lo = std::ldexp(1.0, k);
  for (std::size_t i = 0; i < samples; ++i) {
    ResonancePoint p;
    p.xi = lo * (1.0 + counter_uniform(seed, i, 0));
    p.eta = lo * (1.0 + counter_uniform(seed, i, 1));
    p.sigma = lo * (1.0 + counter_uniform(seed, i, 2));
    p.iota1 = -1;
    p.iota2 = 1;
    p.iota3 = 1;
    try {
      const auto d = phixi_decomposition(sym, p, guard);
      ++out.used;
      out.sup_m1 = std::max(out.sup_m1, std::fabs(d.m1));
      out.sup_m2 = std::max(out.sup_m2, std::fabs(d.m2));
      out.sup_m3 = std::max(out.sup_m3, std::fabs(d.m3));
    } catch (const NumericalError&) {
      ++out.rejected;
    }
  }
  return out;
}

} // namespace whitham::resonance
