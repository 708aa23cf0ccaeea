#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "whitham/lp_toolkit.hpp"
#include "whitham/multiplier.hpp"
#include "whitham/norms.hpp"

using namespace whitham;
using namespace whitham::multiplier;

namespace {

// (2pi)^{-1} \int |\int m(xi) e^{i z xi} dxi| dz for an even real m, by direct quadrature.
double direct_s_norm_1d(double (*m)(double), double support) {
  const int nxi = 3000;
  const double hxi = support / nxi;
  double total = 0.0;
  const double hz = 0.01;
  for (double z = 0.0; z < 150.0; z += hz) {
    double k = 0.0;
    for (int i = 0; i < nxi; ++i) {
      const double xi = (i + 0.5) * hxi;
      k += m(xi) * std::cos(z * xi);
    }
    k *= 2.0 * hxi;
    total += (z == 0.0 ? 1.0 : 2.0) * std::fabs(k) * hz;
  }
  return total / (2.0 * std::numbers::pi);
}

double phi1(double x) { return lp::phi(x); }

} // namespace

TEST(Multiplier, OneDimensionalAgainstDirectQuadrature) {
  // Independent numpy quadrature of the same kernel: 2.139247 (z up to 400, dz = 0.005).
  auto m = [](const Point<1>& x) { return cplx(lp::phi(x[0])); };
  const double direct = direct_s_norm_1d(phi1, 1.5);
  EXPECT_NEAR(direct, 2.139247, 5e-4);
  // The z-lattice spacing is 2 pi / (pad * box width); default padding is ~0.2% low.
  EXPECT_NEAR(s_norm<1>(m, Box<1>::cube(1.75, 256)), direct, 3e-3 * direct);
  SNormOptions fine;
  fine.pad = 32;
  EXPECT_NEAR(s_norm<1>(m, Box<1>::cube(1.75, 256), fine), direct, 3e-4 * direct);
}

TEST(Multiplier, TensorizationIsExact) {
  auto one = [](const Point<1>& x) { return cplx(lp::psi(x[0])); };
  auto three = [](const Point<3>& x) { return cplx(lp::psi(x[0]) * lp::psi(x[1]) * lp::psi(x[2])); };
  const double a = s_norm<1>(one, Box<1>::cube(1.75, 24));
  const double b = s_norm<3>(three, Box<3>::cube(1.75, 24));
  EXPECT_NEAR(b, a * a * a, 1e-10 * b);
}

TEST(Multiplier, DilationInvariant) {
  const double base = s_norm<1>([](const Point<1>& x) { return cplx(lp::phi(x[0])); }, Box<1>::cube(1.75, 512));
  for (int l : {-2, 3}) {
    const double s = std::ldexp(1.0, l);
    const double v = s_norm<1>([s](const Point<1>& x) { return cplx(lp::phi(x[0] / s)); }, Box<1>::cube(1.75 * s, 512));
    EXPECT_NEAR(v, base, 1e-9 * base) << "l = " << l;
  }
}

TEST(Multiplier, ModulationDoesNotChangeNorm) {
  const double base = s_norm<1>([](const Point<1>& x) { return cplx(lp::phi(x[0])); }, Box<1>::cube(1.75, 256));
  const double shifted =
      s_norm<1>([](const Point<1>& x) { return std::polar(lp::phi(x[0]), 0.4 * x[0]); }, Box<1>::cube(1.75, 256));
  EXPECT_NEAR(shifted, base, 1e-3 * base);
}

TEST(Multiplier, Preconditions) {
  auto m = [](const Point<1>& x) { return cplx(lp::phi(x[0])); };
  SNormOptions opt;
  opt.pad = 2;
  EXPECT_THROW(s_norm<1>(m, Box<1>::cube(1.75, 64), opt), PreconditionError);
  EXPECT_THROW(s_norm<1>(m, Box<1>::cube(1.2, 64)), NumericalError);
  SNormOptions small;
  small.max_points = 1000;
  EXPECT_THROW(s_norm<3>([](const Point<3>&) { return cplx(0.0); }, Box<3>::cube(1.0, 16), small), PreconditionError);
}

TEST(Multiplier, TrilinearConstantSymbolIsPointwiseCube) {
  const GridSpec g(64, 32.0);
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x / 4.0) * std::cos(x); });
  const auto h = SpectralField::from_function(g, [](double x) { return std::exp(-x * x / 9.0); });
  const auto expect = SpectralField::from_function(g, [](double x) {
    return std::exp(-x * x / 4.0) * std::cos(x) * std::exp(-2.0 * x * x / 9.0);
  });
  const auto got = apply_trilinear([](double, double, double) { return cplx(1.0); }, f, h, h, 3);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(got[j] - expect[j]), 0.0, 1e-14);
}

TEST(Multiplier, TrilinearBoundedByHolder) {
  const GridSpec g(64, 64.0);
  auto m = [](double a, double b, double c) { return cplx(lp::phi(a) * lp::phi(b) * lp::phi(c)); };
  const double S = s_norm<3>([&](const Point<3>& x) { return m(x[0], x[1], x[2]); }, Box<3>::cube(1.75, 48));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto random_field = [&](std::uint64_t stream) {
      return SpectralField::from_function(g, [&](double x) {
        double v = 0.0;
        for (int q = 1; q <= 6; ++q)
          v += (counter_uniform(seed, stream, q) - 0.5) * std::cos(0.3 * q * x + 6.0 * counter_uniform(seed, stream, 10 + q));
        return v * std::exp(-x * x / 50.0);
      });
    };
    const auto f1 = random_field(1), f2 = random_field(2), f3 = random_field(3);
    const auto t = apply_trilinear(m, f1, f2, f3);
    EXPECT_LE(t.l2_norm(), S * f1.l2_norm() * norms::sup_norm(f2) * norms::sup_norm(f3));
  }
  EXPECT_THROW(apply_trilinear(m, SpectralField(GridSpec(512, 1.0)), SpectralField(GridSpec(512, 1.0)),
                               SpectralField(GridSpec(512, 1.0))),
               PreconditionError);
}
