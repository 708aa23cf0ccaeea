#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "whitham/norms.hpp"
#include "whitham/oscillatory.hpp"

using namespace whitham;

namespace {
const Symbol W = Symbol::whitham();
}

TEST(Oscillatory, PropagationIsUnitaryAndGroupProperty) {
  const GridSpec g(1024, 128.0);
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x); });
  const auto a = propagate(W, f, 3.0);
  EXPECT_NEAR(a.l2_norm(), f.l2_norm(), 1e-14 * f.l2_norm());
  const auto b = propagate(W, propagate(W, f, 1.0), 2.0);
  double gap = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) gap = std::max(gap, std::abs(a[j] - b[j]));
  EXPECT_LT(gap, 1e-15);
  const auto back = propagate(W, a, -3.0);
  gap = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) gap = std::max(gap, std::abs(back[j] - f[j]));
  EXPECT_LT(gap, 1e-15);
  EXPECT_LT(propagate(W, f, 5.0).hermitian_defect(), 1e-15);
}

TEST(Oscillatory, StationaryPointSolvesGroupVelocity) {
  for (double c : {0.1, 0.5, 0.9}) {
    const double t = 50.0;
    const auto s = stationary_profile(W, -c * t, t);
    ASSERT_TRUE(s.has_stationary_point);
    EXPECT_NEAR(W(s.xi0, 1), c, 1e-10);
    EXPECT_NEAR(s.local_scale, 1.0 / std::sqrt(t * std::fabs(W(s.xi0, 2))), 1e-12);
  }
  // faster than the maximal group speed: no stationary point
  EXPECT_FALSE(stationary_profile(W, -2.0 * 50.0, 50.0).has_stationary_point);
  EXPECT_FALSE(stationary_profile(W, 10.0, 50.0).has_stationary_point);
}

TEST(Oscillatory, InteractionSupMatchesBruteForce) {
  const GridSpec g(256, 32.0);
  std::vector<double> u1(g.size()), u2(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    u1[m] = std::sin(0.37 * m) * std::exp(-0.01 * m);
    u2[m] = std::cos(1.3 * m + 0.2) * (1.0 + 0.5 * std::sin(0.05 * m));
  }
  for (double lambda : {0.0, 0.5, 1.0, 3.3, 40.0}) {
    const long w = static_cast<long>(std::floor(lambda / g.dx() * (1.0 + 1e-12)));
    double brute = 0.0;
    const long n = static_cast<long>(g.size());
    for (long i = 0; i < n; ++i)
      for (long d = -std::min(w, n); d <= std::min(w, n); ++d)
        brute = std::max(brute, std::fabs(u1[i]) * std::fabs(u2[((i + d) % n + n) % n]));
    EXPECT_DOUBLE_EQ(interaction_sup(g, u1, u2, lambda), brute) << "lambda = " << lambda;
  }
  EXPECT_THROW(interaction_sup(g, u1, u2, -1.0), PreconditionError);
}

TEST(Oscillatory, LowFrequencyDecayNearMinusOneThird) {
  const GridSpec g(16384, 4096.0);
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x); });
  const auto times = log_spaced(50.0, 1000.0, 10);
  DecayOptions opt;
  opt.jobs = 4;
  const auto rep = decay_scan(W, f, times, 0.0, opt);
  EXPECT_NEAR(rep.exponent(), -1.0 / 3.0, 0.05);
  EXPECT_LT(rep.max_envelope_ratio, 1.0);
  EXPECT_GT(rep.max_envelope_ratio, 0.05);
}

TEST(Oscillatory, DecayScanIsThreadIndependent) {
  const GridSpec g(4096, 1024.0);
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x / 4.0); });
  const auto times = log_spaced(10.0, 200.0, 6);
  DecayOptions one, many;
  many.jobs = 3;
  const auto a = decay_scan(W, f, times, 0.5, one);
  const auto b = decay_scan(W, f, times, 0.5, many);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_EQ(a.samples[i].sup, b.samples[i].sup);
}

TEST(Oscillatory, DecayScanRefusesWraparound) {
  const GridSpec g(1024, 256.0); // guard time 64
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x); });
  const std::vector<double> times = {10.0, 100.0};
  EXPECT_THROW(decay_scan(W, f, times, 0.0), PreconditionError);
  const std::vector<double> early = {0.5, 10.0};
  EXPECT_THROW(decay_scan(W, f, early, 0.0), PreconditionError);
}

TEST(Oscillatory, LogSpaced) {
  const auto t = log_spaced(1.0, 1000.0, 4);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_DOUBLE_EQ(t[0], 1.0);
  EXPECT_NEAR(t[1], 10.0, 1e-12);
  EXPECT_NEAR(t[3], 1000.0, 1e-9);
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), PreconditionError);
}
