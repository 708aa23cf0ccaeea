#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "whitham/dispersion.hpp"
#include "whitham/errors.hpp"

using whitham::Symbol;

namespace {

// Values from tests/oracles/symbol_oracle.py (mpmath, 50 digits).
constexpr double kLam001 = 0.0099998333386109292;
constexpr double kLam1 = 0.87269362089782969154;
constexpr double kDLam1 = 0.67696638847559691683;
constexpr double kD2Lam1 = -0.41040652201376677615;
constexpr double kD3Lam1 = 0.21170956946517268631;
constexpr double kXi0Half = 1.5173628121818368922;

struct OracleRow {
  double xi;
  double d[4];
};
constexpr OracleRow kRows[] = {
    {0.3, {0.29562439638074066052, 0.95704838289260335579, -0.27325866230909909441, -0.74369183763588482915}},
    {2.5, {1.570520851621708244, 0.33526930373828333778, -0.096403659240104765546, 0.092906938677864637322}},
    {7.0, {2.6457491110473065228, 0.18898647939326065467, -0.013506891436377480654, 0.0029082298602165783195}},
};

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

} // namespace

TEST(Dispersion, FrozenOracleValues) {
  const auto w = Symbol::whitham();
  EXPECT_LT(rel(w(0.01), kLam001), 1e-14);
  EXPECT_LT(rel(w(1.0), kLam1), 1e-14);
  EXPECT_LT(rel(w(1.0, 1), kDLam1), 1e-14);
  EXPECT_LT(rel(w(1.0, 2), kD2Lam1), 1e-13);
  EXPECT_LT(rel(w(1.0, 3), kD3Lam1), 1e-12);
  for (const auto& row : kRows)
    for (int k = 0; k < 4; ++k) EXPECT_LT(rel(w(row.xi, k), row.d[k]), 1e-12) << "xi=" << row.xi << " k=" << k;
}

TEST(Dispersion, LowFrequencyBehaviour) {
  const auto w = Symbol::whitham();
  EXPECT_NEAR(w(0.01), 0.01 - 1e-6 / 6.0, 1e-10);
  EXPECT_DOUBLE_EQ(w(0.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(w(0.0), 0.0);
  EXPECT_DOUBLE_EQ(w(0.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(w(0.0, 3), -1.0);
  // 1 - Lambda'(xi) ~ xi^2 / 2 and Lambda''(xi) ~ -xi.
  for (double xi : {1e-3, 1e-4, 1e-5}) {
    EXPECT_NEAR((1.0 - w(xi, 1)) / (xi * xi), 0.5, 1e-3);
    EXPECT_NEAR(w(xi, 2) / xi, -1.0, 1e-3);
  }
}

TEST(Dispersion, SeriesMatchesDirectAtCrossover) {
  const double t = Symbol::kDefaultZeroThreshold;
  for (double xi : {t, -t, 0.9 * t}) {
    for (int k = 0; k < 4; ++k) {
      const double s = Symbol::whitham_series(xi, k);
      const double d = Symbol::whitham_direct(xi, k);
      EXPECT_LT(std::fabs(s - d), 1e-12) << "xi=" << xi << " k=" << k;
    }
  }
}

TEST(Dispersion, Oddness) {
  const auto w = Symbol::whitham();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double xi = u(rng);
    worst = std::max(worst, std::fabs(w(xi) + w(-xi)));
    EXPECT_EQ(w(xi, 1), w(-xi, 1));
    EXPECT_EQ(w(xi, 2), -w(-xi, 2));
    EXPECT_EQ(w(xi, 3), w(-xi, 3));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Dispersion, DerivativeConsistency) {
  const auto w = Symbol::whitham();
  for (double xi : {0.1, 0.4, 1.0, 3.0, 12.0, 80.0}) {
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-4 * std::max(1.0, xi);
      const double fd = (w(xi + h, k) - w(xi - h, k)) / (2 * h);
      EXPECT_LT(rel(fd, w(xi, k + 1)), 1e-6) << "xi=" << xi << " k=" << k;
    }
  }
}

TEST(Dispersion, GroupVelocityMonotoneInUnitInterval) {
  const auto w = Symbol::whitham();
  double prev = w(0.0, 1);
  for (double xi = 0.01; xi < 200.0; xi *= 1.05) {
    const double v = w(xi, 1);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(w(xi, 2), 0.0);
    prev = v;
  }
}

TEST(Dispersion, HighFrequencyAsymptotics) {
  const auto w = Symbol::whitham();
  for (double xi = 1e3; xi <= 1e6; xi *= 3.0) {
    EXPECT_LT(std::fabs(w(xi) / std::sqrt(xi) - 1.0), 1e-3);
    EXPECT_NEAR(w(xi, 1) / std::pow(xi, -0.5), 0.5, 1e-3);
    EXPECT_NEAR(w(xi, 2) / std::pow(xi, -1.5), -0.25, 1e-3);
    EXPECT_NEAR(w(xi, 3) / std::pow(xi, -2.5), 0.375, 1e-3);
  }
}

TEST(Dispersion, InvertGroupVelocity) {
  const auto w = Symbol::whitham();
  EXPECT_LT(std::fabs(whitham::invert_group_velocity(w, 0.5) - kXi0Half), 1e-12);
  EXPECT_NEAR(whitham::invert_group_velocity(w, kDLam1), 1.0, 1e-10);
  EXPECT_LT(whitham::invert_group_velocity(w, 1.0 - 1e-8), 1e-3);
  for (double c : {0.05, 0.3, 0.9, 0.999}) {
    const double xi0 = whitham::invert_group_velocity(w, c);
    EXPECT_LT(std::fabs(w(xi0, 1) - c), 1e-12);
  }
  EXPECT_THROW(whitham::invert_group_velocity(w, 1.0), whitham::DomainError);
  EXPECT_THROW(whitham::invert_group_velocity(w, 0.0), whitham::DomainError);
  EXPECT_THROW(whitham::invert_group_velocity(w, -0.2), whitham::DomainError);
}

TEST(Dispersion, Errors) {
  const auto w = Symbol::whitham();
  EXPECT_THROW(w(std::numeric_limits<double>::infinity()), whitham::DomainError);
  EXPECT_THROW(w(std::nan("")), whitham::DomainError);
  EXPECT_THROW(w(1.0, 4), whitham::DomainError);
  EXPECT_THROW(Symbol::fractional_kdv(2.5), whitham::DomainError);
  EXPECT_THROW(Symbol::fractional_kdv(0.5)(0.0, 1), whitham::DomainError);
}

TEST(Dispersion, ComparisonSymbols) {
  const auto kdv = Symbol::kdv();
  EXPECT_DOUBLE_EQ(kdv(1.0), 1.0 - 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(kdv(2.0, 3), -1.0);
  const auto fk = Symbol::fractional_kdv(0.5);
  EXPECT_NEAR(fk(4.0), 8.0, 1e-14);
  EXPECT_NEAR(fk(-4.0), -8.0, 1e-14);
  EXPECT_NEAR(fk(4.0, 1), 1.5 * 2.0, 1e-14);
  const auto hw = Symbol::half_wave();
  EXPECT_NEAR(hw(4.0), 2.0, 1e-15);
  EXPECT_NEAR(hw(-4.0), -2.0, 1e-15);
  EXPECT_NEAR(hw(4.0, 1), 0.25, 1e-15);
}

TEST(Dispersion, SecondDerivativeOverXi) {
  const auto w = Symbol::whitham();
  EXPECT_DOUBLE_EQ(whitham::second_derivative_over_xi(w, 0.0), -1.0);
  for (double xi : {1e-6, 0.01, 0.3, 0.49, 0.51, 2.0}) EXPECT_LT(rel(whitham::second_derivative_over_xi(w, xi), w(xi, 2) / xi), 1e-11);
}
