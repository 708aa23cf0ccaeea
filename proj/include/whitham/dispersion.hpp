#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "whitham/errors.hpp"

namespace whitham {

/// Maclaurin coefficients of the Whitham symbol, Lambda(x) = sum_n c[n] x^(2n+1),
/// where Lambda(x) = x * sqrt(tanh(x) / x). The series converges for |x| < pi/2.
///
/// Built from the tanh recurrence (2k+1) t_k = -sum t_j t_{k-1-j} followed by a
/// power-series square root, all in long double at compile time.
template <std::size_t N = 28>
constexpr std::array<long double, N> whitham_series_coefficients() {
  std::array<long double, N> t{};
  t[0] = 1.0L;
  for (std::size_t k = 1; k < N; ++k) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < k; ++j) acc += t[j] * t[k - 1 - j];
    t[k] = -acc / static_cast<long double>(2 * k + 1);
  }
  std::array<long double, N> s{};
  s[0] = 1.0L;
  for (std::size_t k = 1; k < N; ++k) {
    long double acc = t[k];
    for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / 2.0L;
  }
  return s;
}

inline constexpr auto kWhithamSeries = whitham_series_coefficients();

enum class SymbolKind { Whitham, KdV, FractionalKdV, HalfWave };

/// A real, odd dispersion relation Lambda(xi) together with its first three
/// derivatives.
///
/// - Whitham:        xi * sqrt(tanh(xi)/xi)
/// - KdV:            xi - xi^3/6, the long-wave truncation of Whitham
/// - FractionalKdV:  xi |xi|^alpha, alpha in (-1, 2]
/// - HalfWave:       sign(xi) sqrt|xi|, the deep-water limit (alpha = -1/2)
///
/// For Whitham, |xi| < zero_threshold is evaluated from the Maclaurin series
/// through xi^9, differentiated term by term.
class Symbol {
public:
  static constexpr double kDefaultZeroThreshold = 0.05;
  static constexpr int kSeriesTerms = 5; // through xi^9

  static Symbol whitham(double zero_threshold = kDefaultZeroThreshold) {
    if (!(zero_threshold > 0.0) || zero_threshold > 0.5)
      throw DomainError("zero_threshold must lie in (0, 0.5]");
    return Symbol(SymbolKind::Whitham, 0.0, zero_threshold);
  }
  static Symbol kdv() { return Symbol(SymbolKind::KdV, 2.0, 0.0); }
  static Symbol fractional_kdv(double alpha) {
    if (!(alpha > -1.0 && alpha <= 2.0))
      throw DomainError("fractional KdV exponent must lie in (-1, 2], got " + std::to_string(alpha));
    return Symbol(SymbolKind::FractionalKdV, alpha, 0.0);
  }
  static Symbol half_wave() { return Symbol(SymbolKind::HalfWave, -0.5, 0.0); }

  SymbolKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double zero_threshold() const noexcept { return zero_threshold_; }

  std::string name() const {
    switch (kind_) {
    case SymbolKind::Whitham: return "whitham";
    case SymbolKind::KdV: return "kdv";
    case SymbolKind::FractionalKdV: return "fkdv(" + std::to_string(alpha_) + ")";
    case SymbolKind::HalfWave: return "half-wave";
    }
    return "unknown";
  }

  /// Lambda^(order)(xi), order in 0..3.
  double operator()(double xi, int order = 0) const;

  /// Whitham only: direct closed-form branch and series branch, exposed for
  /// crossover checks. Both accept any finite xi.
  static double whitham_direct(double xi, int order);
  // terms = 0 selects kSeriesTerms + order: each derivative loses two powers of
  // the crossover frequency, so higher orders carry extra terms.
  static double whitham_series(double xi, int order, int terms = 0);

  friend bool operator==(const Symbol&, const Symbol&) = default;

private:
  Symbol(SymbolKind kind, double alpha, double zero_threshold)
      : kind_(kind), alpha_(alpha), zero_threshold_(zero_threshold) {}

  double power_law(double xi, int order) const;

  SymbolKind kind_;
  double alpha_;
  double zero_threshold_;
};

inline double eval(const Symbol& sym, double xi, int order = 0) { return sym(xi, order); }

namespace detail {

// Parity of Lambda^(order) for an odd Lambda: odd orders give even functions.
inline double apply_odd_parity(double value_at_abs, double xi, int order) {
  const bool even_function = (order % 2) == 1;
  return (xi < 0.0 && !even_function) ? -value_at_abs : value_at_abs;
}

inline void check_order(int order) {
  if (order < 0 || order > 3)
    throw DomainError("unsupported derivative order " + std::to_string(order) + " (supported: 0..3)");
}

} // namespace detail

inline double Symbol::whitham_series(double xi, int order, int terms) {
  detail::check_order(order);
  if (terms <= 0) terms = kSeriesTerms + order;
  // d^order/dxi^order of c_n xi^(2n+1), Horner in xi^2. For order >= 2 the
  // n = 0 term vanishes and the remaining powers shift down by one step.
  const long double x = xi;
  const long double x2 = x * x;
  const int first = order >= 2 ? 1 : 0;
  long double acc = 0.0L;
  for (int n = terms - 1; n >= first; --n) {
    const int p = 2 * n + 1;
    long double falling = 1.0L;
    for (int j = 0; j < order; ++j) falling *= static_cast<long double>(p - j);
    acc = acc * x2 + kWhithamSeries[static_cast<std::size_t>(n)] * falling;
  }
  return static_cast<double>((order % 2 == 0) ? acc * x : acc);
}

inline double Symbol::whitham_direct(double xi, int order) {
  detail::check_order(order);
  const long double x = std::fabs(static_cast<long double>(xi));
  if (x == 0.0L) return order == 1 ? 1.0 : (order == 3 ? -1.0 : 0.0);
  const long double e = std::exp(-2.0L * x);
  const long double th = (1.0L - e) / (1.0L + e);
  const long double sech2 = 4.0L * e / ((1.0L + e) * (1.0L + e));
  const long double q = x * th;
  const long double lam = std::sqrt(q);
  if (order == 0) return detail::apply_odd_parity(static_cast<double>(lam), xi, 0);
  const long double q1 = th + x * sech2;
  if (order == 1) return static_cast<double>(q1 / (2.0L * lam));
  const long double q2 = 2.0L * sech2 * (1.0L - x * th);
  const long double lam3 = lam * lam * lam;
  if (order == 2) {
    const long double v = q2 / (2.0L * lam) - q1 * q1 / (4.0L * lam3);
    return detail::apply_odd_parity(static_cast<double>(v), xi, 2);
  }
  const long double q3 = -6.0L * sech2 * th - 2.0L * x * sech2 * (sech2 - 2.0L * th * th);
  const long double lam5 = lam3 * lam * lam;
  const long double v = q3 / (2.0L * lam) - 3.0L * q1 * q2 / (4.0L * lam3) + 3.0L * q1 * q1 * q1 / (8.0L * lam5);
  return static_cast<double>(v);
}

inline double Symbol::power_law(double xi, int order) const {
  // Lambda = sign(xi) |xi|^p with p = alpha + 1.
  const double p = alpha_ + 1.0;
  double coef = 1.0;
  for (int j = 0; j < order; ++j) coef *= (p - j);
  const double exponent = p - order;
  const double ax = std::fabs(xi);
  if (ax == 0.0) {
    if (order >= 1 && alpha_ < 1.0 && !(order == 1 && alpha_ == 0.0))
      throw DomainError("fractional symbol derivative of order " + std::to_string(order) +
                        " is singular at xi = 0 for alpha = " + std::to_string(alpha_));
    if (coef == 0.0 || exponent > 0.0) return 0.0;
    if (exponent == 0.0) {
      // Even-order derivatives are odd functions and jump at 0.
      if (order % 2 == 1) return coef;
      throw DomainError("fractional symbol derivative is discontinuous at xi = 0");
    }
    throw DomainError("fractional symbol derivative is singular at xi = 0");
  }
  return detail::apply_odd_parity(coef * std::pow(ax, exponent), xi, order);
}

inline double Symbol::operator()(double xi, int order) const {
  detail::check_order(order);
  if (!std::isfinite(xi)) throw DomainError("symbol evaluated at non-finite frequency");
  switch (kind_) {
  case SymbolKind::Whitham:
    if (std::fabs(xi) < zero_threshold_) return whitham_series(xi, order);
    return whitham_direct(xi, order);
  case SymbolKind::KdV:
    switch (order) {
    case 0: return xi - xi * xi * xi / 6.0;
    case 1: return 1.0 - 0.5 * xi * xi;
    case 2: return -xi;
    default: return -1.0;
    }
  case SymbolKind::FractionalKdV:
  case SymbolKind::HalfWave: return power_law(xi, order);
  }
  return 0.0;
}

/// Lambda''(xi)/xi, finite at xi = 0 for Whitham and KdV (limit -1).
inline double second_derivative_over_xi(const Symbol& sym, double xi) {
  if (sym.kind() == SymbolKind::Whitham && std::fabs(xi) < 0.5) {
    // sum_{n>=1} c_n (2n+1)(2n) xi^(2n-2), full-length series.
    const long double x2 = static_cast<long double>(xi) * xi;
    long double acc = 0.0L;
    for (std::size_t n = kWhithamSeries.size() - 1; n >= 1; --n)
      acc = acc * x2 + kWhithamSeries[n] * static_cast<long double>((2 * n + 1) * (2 * n));
    return static_cast<double>(acc);
  }
  if (sym.kind() == SymbolKind::KdV) return -1.0;
  if (xi == 0.0) throw DomainError("Lambda''(xi)/xi undefined at 0 for this symbol");
  return sym(xi, 2) / xi;
}

/// Unique xi0 > 0 with Lambda'(xi0) = c (the stationary point of
/// x xi / t + Lambda(xi) for c = -x/t).
///
/// Throws DomainError when c is outside the range of Lambda' on (0, inf), i.e.
/// when the phase has no stationary point.
inline double invert_group_velocity(const Symbol& sym, double c) {
  if (!std::isfinite(c)) throw DomainError("group velocity must be finite");
  bool decreasing = true;
  double lo = 0.0;
  switch (sym.kind()) {
  case SymbolKind::Whitham:
    if (!(c > 0.0 && c < 1.0))
      throw DomainError("no stationary point: group velocity " + std::to_string(c) + " outside (0,1)");
    break;
  case SymbolKind::KdV:
    if (!(c < 1.0))
      throw DomainError("no stationary point: group velocity " + std::to_string(c) + " not below 1");
    break;
  case SymbolKind::FractionalKdV:
  case SymbolKind::HalfWave:
    if (sym.alpha() == 0.0) throw DomainError("no isolated stationary point: Lambda' is constant");
    if (!(c > 0.0)) throw DomainError("no stationary point: group velocity must be positive");
    decreasing = sym.alpha() < 0.0;
    lo = std::numeric_limits<double>::min();
    break;
  }
  auto residual = [&](double x) { return sym(x, 1) - c; };
  // Expand the bracket until the residual changes sign.
  double hi = 1.0;
  auto past_root = [&](double x) { return decreasing ? residual(x) < 0.0 : residual(x) > 0.0; };
  while (!past_root(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw DomainError("no stationary point found for group velocity " + std::to_string(c));
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (past_root(x)) hi = x; else lo = x;
    // Newton step, accepted only inside the bracket.
    const double d = sym(x, 2);
    double next = (d != 0.0) ? x - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

} // namespace whitham
