#include <gtest/gtest.h>

#include <cmath>

#include "whitham/errors.hpp"
#include "whitham/lp_toolkit.hpp"
#include "whitham/norms.hpp"
#include "whitham/sampling.hpp"

using namespace whitham;

TEST(LittlewoodPaley, BumpShape) {
  EXPECT_DOUBLE_EQ(lp::phi(0.0), 1.0);
  EXPECT_DOUBLE_EQ(lp::phi(1.25), 1.0);
  EXPECT_DOUBLE_EQ(lp::phi(1.5), 0.0);
  EXPECT_DOUBLE_EQ(lp::phi(-3.0), 0.0);
  for (double x = 0.0; x < 2.0; x += 0.01) {
    EXPECT_GE(lp::phi(x), 0.0);
    EXPECT_LE(lp::phi(x), 1.0);
    EXPECT_GE(lp::phi(x), lp::phi(x + 0.01) - 1e-15);
    EXPECT_EQ(lp::phi(x), lp::phi(-x));
  }
}

TEST(LittlewoodPaley, PsiSupportedOnAnnulus) {
  for (int k = -3; k <= 5; ++k) {
    const double s = std::ldexp(1.0, k);
    EXPECT_EQ(lp::psi_l(k, 0.6 * s), 0.0);
    EXPECT_EQ(lp::psi_l(k, 1.6 * s), 0.0);
    EXPECT_DOUBLE_EQ(lp::psi_l(k, s), 1.0);
  }
}

TEST(LittlewoodPaley, PartitionOfUnity) {
  for (int i = 0; i < 5000; ++i) {
    const double xi = std::ldexp(counter_uniform(3, i), static_cast<int>(i % 20) - 8) * (i % 2 ? 1.0 : -1.0);
    double sum = lp::phi_l(-12, xi);
    for (int k = -11; k <= 14; ++k) sum += lp::psi_l(k, xi);
    EXPECT_NEAR(sum, 1.0, 1e-14) << "xi = " << xi;
  }
}

TEST(LittlewoodPaley, AdjacentOverlapOnly) {
  for (double xi = 0.01; xi < 100.0; xi *= 1.01) {
    int active = 0;
    for (int k = -10; k <= 10; ++k) active += lp::psi_l(k, xi) > 0.0;
    EXPECT_LE(active, 2);
  }
}

TEST(LittlewoodPaley, ProjectionsSumToField) {
  const GridSpec g(1024, 64.0);
  const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x) * (1.0 + x); });
  auto sum = lp::project(f, lp::Band::below(-6));
  for (int k = -5; lp::resolvable(g, lp::Band::dyadic(k)); ++k) sum += lp::project(f, lp::Band::dyadic(k));
  double gap = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (std::fabs(g.frequency(j)) < 0.5 * g.nyquist()) gap = std::max(gap, std::abs(sum[j] - f[j]));
  EXPECT_LT(gap, 1e-15);
}

TEST(LittlewoodPaley, BandAboveNyquistThrows) {
  const GridSpec g(64, 2.0 * std::numbers::pi); // Nyquist 32
  const auto f = SpectralField::from_function(g, [](double x) { return std::cos(x); });
  EXPECT_THROW(lp::project(f, lp::Band::dyadic(8)), BandError);
  const auto z = lp::project(f, lp::Band::dyadic(8), lp::OutOfLattice::Zero);
  EXPECT_EQ(z.l2_norm(), 0.0);
}

TEST(LittlewoodPaley, BernsteinConstantStable) {
  // ||P_k f||_inf <= C 2^{k/2} ||P_k f||_2 with C independent of resolution
  std::vector<double> cs;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    const GridSpec g(n, 128.0);
    const auto f = SpectralField::from_function(g, [](double x) { return std::exp(-x * x / 8.0) * std::cos(3.0 * x); });
    const auto p = lp::project(f, lp::Band::dyadic(2));
    cs.push_back(norms::sup_norm(p) / (2.0 * p.l2_norm()));
  }
  EXPECT_LT(cs.front(), 10.0);
  EXPECT_NEAR(cs[0], cs[2], 1e-3 * cs[0]);
}

TEST(TimePartition, SumsToOne) {
  for (double t : {0.5, 2.0, 3.5, 4.0, 17.0, 1000.0}) {
    const lp::TimePartition q(t);
    for (int i = 0; i <= 400; ++i) {
      const double s = t * i / 400.0;
      EXPECT_NEAR(q.sum(s), 1.0, 1e-14);
      for (int m = 0; m < q.pieces(); ++m) EXPECT_GE(q.q(m, s), -1e-15);
    }
  }
}

TEST(TimePartition, PiecesLiveOnDyadicIntervals) {
  const lp::TimePartition q(1000.0);
  EXPECT_EQ(q.pieces(), 11);
  for (int m = 1; m < q.pieces() - 2; ++m) {
    EXPECT_EQ(q.q(m, std::ldexp(0.9, m - 1)), 0.0);
    EXPECT_EQ(q.q(m, std::ldexp(2.1, m)), 0.0);
  }
  EXPECT_EQ(q.q(q.pieces() - 1, 990.0), 0.0);
  EXPECT_THROW(lp::TimePartition(-1.0), PreconditionError);
}
