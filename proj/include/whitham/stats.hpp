#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "whitham/errors.hpp"

namespace whitham {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_line: x and y differ in length");
  if (x.size() < 2) throw PreconditionError("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = x.size();
  return f;
}

/// Least-squares exponent p in y ~ C t^p.
inline LineFit fit_power_law(std::span<const double> t, std::span<const double> y) {
  std::vector<double> lx(t.size()), ly(y.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_power_law: data must be positive");
    lx[i] = std::log(t[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

} // namespace whitham
