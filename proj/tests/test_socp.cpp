#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "consortium/equilibria.hpp"
#include "consortium/socp.hpp"

using namespace consortium;

namespace {

const ModelParams kP{};

const StaticSolution& optimum() {
  static const StaticSolution s = coordinate_ascent(kP);
  return s;
}

// Uniform feasible (alpha, d) sample by rejection.
std::pair<double, double> feasible_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(0.001, 0.999), ud(0.001, 0.95);
  for (;;) {
    const double a = ua(rng), d = ud(rng);
    if (static_feasible(a, d, kP)) return {a, d};
  }
}

TEST(Objective, EqualsHarvestAtFunctionalEquilibrium) {
  for (std::size_t i = 1; i < 50; ++i) {
    for (std::size_t j = 1; j < 50; ++j) {
      const double a = i / 50.0, d = 0.95 * j / 50.0;
      if (!static_feasible(a, d, kP)) continue;
      const double dc = d * functional_equilibrium(a, d, kP)->c;
      EXPECT_LT(std::abs(static_objective(a, d, kP) - dc) / dc, 1e-10);
      EXPECT_LT(std::abs(static_objective_from_equilibrium(a, d, kP) - dc) / dc, 1e-10);
    }
  }
}

TEST(Objective, InfeasibleThrows) {
  EXPECT_FALSE(static_feasible(0.8251, 0.95, kP));
  EXPECT_THROW(static_objective(0.8251, 0.95, kP), DomainError);
}

TEST(GoldenSection, FindsParabolaPeak) {
  const double x = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1);
  EXPECT_NEAR(x, 0.3, 1e-9);
}

TEST(AlphaInterval, EndpointsAreFeasibilityBoundary) {
  for (double d : {0.1, 0.4409, 0.8}) {
    const Interval I = feasible_alpha_interval(d, kP);
    EXPECT_LT(I.lo, I.hi);
    EXPECT_TRUE(static_feasible(0.5 * (I.lo + I.hi), d, kP));
    EXPECT_FALSE(static_feasible(std::max(0.0, I.lo - 1e-6), d, kP));
    EXPECT_FALSE(static_feasible(std::min(1.0, I.hi + 1e-6), d, kP));
    EXPECT_TRUE(static_feasible(I.lo + 1e-6, d, kP));
    EXPECT_TRUE(static_feasible(I.hi - 1e-6, d, kP));
  }
}

TEST(AlphaInterval, EmptyAboveReach) {
  EXPECT_THROW(feasible_alpha_interval(derived_rates(kP).psi_max + 0.01, kP), DomainError);
}

TEST(LineSearch, AxisMaximizers) {
  EXPECT_NEAR(maximize_alpha(0.4409, kP), 0.8251, 2e-3);
  EXPECT_NEAR(maximize_d(0.8251, kP), 0.4409, 2e-3);
  const double d = maximize_d(0.5, kP);
  EXPECT_GT(d, 0.0);
  EXPECT_LT(d, thresholds(0.5, kP).d1);
}

TEST(LineSearch, AxisMaximizersBeatGrid) {
  for (double d : {0.2, 0.6}) {
    const double a = maximize_alpha(d, kP);
    const Interval I = feasible_alpha_interval(d, kP);
    for (int k = 1; k < 400; ++k) {
      const double ak = I.lo + (I.hi - I.lo) * k / 400.0;
      EXPECT_GE(static_objective(a, d, kP), static_objective(ak, d, kP) - 1e-14);
    }
  }
}

TEST(LineSearch, NearReachLimit) {
  // Sup over alpha of d1(alpha), found by a coarse scan.
  double sup = 0;
  for (int k = 1; k < 1000; ++k) sup = std::max(sup, thresholds(k / 1000.0, kP).d1);
  const double d = 0.99 * sup;
  const double a = maximize_alpha(d, kP);
  EXPECT_TRUE(static_feasible(a, d, kP));
}

TEST(CoordinateAscent, PaperOptimum) {
  const StaticSolution& s = optimum();
  EXPECT_NEAR(s.alpha_bar, 0.8251, 2e-3);
  EXPECT_NEAR(s.d_bar, 0.4409, 2e-3);
  EXPECT_NEAR(s.objective, 0.330786, 5e-4);
  EXPECT_FALSE(s.trace.empty());
  for (std::size_t k = 1; k < s.trace.size(); ++k)
    EXPECT_GE(s.trace[k].objective, s.trace[k - 1].objective - 1e-15);
}

TEST(CoordinateAscent, FirstOrderConditions) {
  const StaticSolution& s = optimum();
  const double h = 1e-5;
  const double ga = (static_objective(s.alpha_bar + h, s.d_bar, kP) -
                     static_objective(s.alpha_bar - h, s.d_bar, kP)) / (2 * h);
  const double gd = (static_objective(s.alpha_bar, s.d_bar + h, kP) -
                     static_objective(s.alpha_bar, s.d_bar - h, kP)) / (2 * h);
  EXPECT_LT(std::abs(ga), 1e-6);
  EXPECT_LT(std::abs(gd), 1e-6);
}

TEST(CoordinateAscent, MultiStartAgrees) {
  std::mt19937_64 rng(99);
  const StaticSolution& ref = optimum();
  for (int i = 0; i < 20; ++i) {
    const auto [a, d] = feasible_sample(rng);
    const StaticSolution s = coordinate_ascent(kP, a, d);
    EXPECT_NEAR(s.alpha_bar, ref.alpha_bar, 1e-4);
    EXPECT_NEAR(s.d_bar, ref.d_bar, 1e-4);
  }
}

TEST(CoordinateAscent, InfeasibleStartRejected) {
  EXPECT_THROW(coordinate_ascent(kP, 0.8251, 0.95), DomainError);
}

TEST(Concavity, MidpointInAlpha) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u01(0, 1);
  int probes = 0;
  while (probes < 1000) {
    const auto [a0, d] = feasible_sample(rng);
    const Interval I = feasible_alpha_interval(d, kP);
    const double a1 = I.lo + (I.hi - I.lo) * u01(rng);
    if (std::abs(a1 - a0) < 1e-3) continue;
    const double mid = static_objective(0.5 * (a0 + a1), d, kP);
    const double avg = 0.5 * (static_objective(a0, d, kP) + static_objective(a1, d, kP));
    EXPECT_GT(mid - avg, 0.0);
    ++probes;
  }
}

TEST(Concavity, LogMidpointInD) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u01(0, 1);
  int probes = 0;
  while (probes < 1000) {
    const auto [a, d0] = feasible_sample(rng);
    const double d1 = thresholds(a, kP).d1 * u01(rng);
    if (std::abs(d1 - d0) < 1e-3 || d1 <= 0) continue;
    const double mid = std::log(static_objective(a, 0.5 * (d0 + d1), kP));
    const double avg =
        0.5 * (std::log(static_objective(a, d0, kP)) + std::log(static_objective(a, d1, kP)));
    EXPECT_GT(mid - avg, 0.0);
    ++probes;
  }
}

TEST(Grid, NoCellExceedsOptimum) {
  const ContourGrid g = contour_grid(kP, GridSpec{});
  const StaticSolution& s = optimum();
  double best = -1;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < g.alphas.size(); ++i)
    for (std::size_t j = 0; j < g.ds.size(); ++j) {
      if (!g.feasible(i, j)) {
        EXPECT_TRUE(std::isnan(g.at(i, j)));
        EXPECT_FALSE(static_feasible(g.alphas[i], g.ds[j], kP));
        continue;
      }
      EXPECT_LE(g.at(i, j), s.objective + 1e-4);
      if (g.at(i, j) > best) {
        best = g.at(i, j);
        bi = i;
        bj = j;
      }
    }
  EXPECT_NEAR(g.alphas[bi], s.alpha_bar, 0.01);
  EXPECT_NEAR(g.ds[bj], s.d_bar, 0.01);
}

TEST(Grid, RidgesFollowAxisMaximizers) {
  const ContourGrid g = contour_grid(kP, GridSpec{40, 40, 0.0});
  ASSERT_EQ(g.ridge_alpha_of_d.size(), g.ds.size());
  ASSERT_EQ(g.ridge_d_of_alpha.size(), g.alphas.size());
  for (std::size_t j = 0; j < g.ds.size(); ++j)
    if (!std::isnan(g.ridge_alpha_of_d[j]))
      EXPECT_NEAR(g.ridge_alpha_of_d[j], maximize_alpha(g.ds[j], kP), 1e-8);
}

}  // namespace
