#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "iselect/errors.hpp"
#include "iselect/numeric.hpp"
#include "iselect/velocity.hpp"

namespace iselect {
namespace {

double ensemble_variance(const VelocityEnsemble& e) {
  std::vector<double> m1(e.weights.size());
  std::vector<double> m2(e.weights.size());
  for (std::size_t i = 0; i < e.weights.size(); ++i) {
    m1[i] = e.velocities[i] * e.weights[i];
    m2[i] = e.velocities[i] * e.velocities[i] * e.weights[i];
  }
  const double z = e.total_weight();
  const double mean = trapezoid(e.velocities, m1) / z;
  return trapezoid(e.velocities, m2) / z - mean * mean;
}

/// Rest-selecting symmetric scheme: W(v) ~ n1*n2*4k^2 v^2 / delta^4 near v = 0.
DiamondParams symmetric(double delta, double k) {
  DiamondParams p;
  p.a1 = 1.0;
  p.a2 = -1.0;
  p.delta1 = p.delta2 = delta;
  p.k = k;
  return p;
}

TEST(SelectedVelocity, Examples) {
  DiamondParams p;
  p.a1 = 1.0;
  p.a2 = 2.0;
  p.k = 0.25;
  p.delta1 = p.delta2 = 3.0 * p.k;
  EXPECT_DOUBLE_EQ(selected_velocity(p), 9.0);
  EXPECT_EQ(selected_velocity(symmetric(-4.0, 1.0)), 0.0);
}

TEST(SelectedVelocity, EqualAmplitudesCannotSelect) {
  DiamondParams p;
  p.k = 1.0;
  EXPECT_THROW(selected_velocity(p), NoSelection);
}

TEST(SelectedVelocity, SubstitutionOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    DiamondParams p;
    p.a1 = u(rng);
    p.a2 = u(rng);
    p.delta1 = 5.0 * u(rng);
    p.delta2 = 5.0 * u(rng);
    p.k = u(rng);
    if (p.a1 == p.a2) continue;
    const double v = selected_velocity(p);
    const double scale = std::abs(p.a1 * effective_detuning(p, Path::second, 1.0, 1.0, v)) +
                         std::abs(p.a2 * effective_detuning(p, Path::first, 1.0, 1.0, v));
    EXPECT_LE(std::abs(interference_residual(p, 1.0, 1.0, v)), 1e-10 * scale);
  }
}

TEST(FilterEvolve, ZeroStepIsIdentity) {
  const VelocityEnsemble e = gaussian_ensemble(-1.0, 1.0, 201, 0.0, 0.3);
  const VelocityEnsemble f = filter_evolve(e, symmetric(-10.0, 1.0), 1.0, 1.0, 0.0);
  EXPECT_EQ(e.weights, f.weights);
}

TEST(FilterEvolve, DarkVelocityKeepsWeight) {
  DiamondParams p;
  p.a1 = 1.0;
  p.a2 = -3.0;
  p.delta1 = -7.0;
  p.delta2 = -9.0;
  p.k = 1.0;
  const double v0 = selected_velocity(p);
  VelocityEnsemble e;
  e.velocities = {v0 - 0.1, v0, v0 + 0.1};
  e.weights = {0.0, 1.0, 0.0};
  const VelocityEnsemble f = filter_evolve(e, p, 2.0, 2.0, 1e8);
  EXPECT_EQ(f.weights[1], 1.0);
}

TEST(FilterEvolve, TotalWeightNonIncreasing) {
  const DiamondParams p = symmetric(-10.0, 1.0);
  VelocityEnsemble e = gaussian_ensemble(-2.0, 2.0, 401, 0.3, 0.5);
  EXPECT_NEAR(e.total_weight(), 1.0, 1e-9);
  double last = e.total_weight();
  for (int i = 0; i < 10; ++i) {
    e = filter_evolve(e, p, 3.0, 3.0, 50.0);
    EXPECT_LE(e.total_weight(), last);
    last = e.total_weight();
  }
}

TEST(FilterEvolve, GaussianOracle) {
  const double delta = -100.0, k = 1.0, n = 10.0, sigma = 0.5;
  const double c = n * n * 4.0 * k * k / std::pow(delta, 4);
  const VelocityEnsemble e = gaussian_ensemble(-4.0, 4.0, 4001, 0.0, sigma);
  for (double dt : {1e4, 1e5, 1e6}) {
    const VelocityEnsemble f = filter_evolve(e, symmetric(delta, k), n, n, dt);
    const double expected = 1.0 / (1.0 / (sigma * sigma) + 4.0 * c * dt);
    EXPECT_NEAR(ensemble_variance(f) / expected, 1.0, 1e-2) << dt;
  }
}

TEST(FilterEvolve, RmsWidthShrinksAsInverseSqrtOfTime) {
  const double delta = -100.0, k = 1.0, n = 10.0;
  const VelocityEnsemble e = gaussian_ensemble(-4.0, 4.0, 8001, 0.0, 1.0);
  const DiamondParams p = symmetric(delta, k);
  const double w1 = std::sqrt(ensemble_variance(filter_evolve(e, p, n, n, 1e7)));
  const double w16 = std::sqrt(ensemble_variance(filter_evolve(e, p, n, n, 1.6e8)));
  EXPECT_NEAR(w1 / w16, 4.0, 0.08);
}

CompetitionParams small_run() {
  CompetitionParams c;
  c.n_traj = 4000;
  c.seed = 3;
  return c;
}

TEST(CompetitionMc, DopplerBaseline) {
  const CompetitionParams c = small_run();
  const CompetitionResult r = competition_mc(c);
  EXPECT_EQ(r.surviving_fraction, 1.0);
  EXPECT_NEAR(r.temperature_ratio, 1.0, 3.0 * std::sqrt(2.0 / c.n_traj));
  EXPECT_NEAR(r.temperature_ratio, 1.0, 3.0 * r.temperature_stderr);
}

TEST(CompetitionMc, DriftRelaxation) {
  CompetitionParams c;
  c.n_traj = 1000;
  c.t_total = 10.0;
  c.dt = 2e-3;
  c.v_initial_offset = 5.0;
  const CompetitionResult r = competition_mc(c);
  EXPECT_NEAR(r.mean_velocity, 0.0, 4.0 / std::sqrt(1000.0));
}

TEST(CompetitionMc, HistogramIntegratesToSurvivors) {
  CompetitionParams c = small_run();
  c.g = 5.0;
  const CompetitionResult r = competition_mc(c);
  EXPECT_LT(r.surviving_fraction, 1.0);
  EXPECT_NEAR(r.histogram.total_weight(), r.surviving_fraction, 2e-2 * r.surviving_fraction);
}

TEST(CompetitionMc, TemperatureDropsWithLoss) {
  CompetitionParams c = small_run();
  double last = competition_mc(c).temperature_ratio;
  for (double g : {1.0, 10.0}) {
    c.g = g;
    const double t = competition_mc(c).temperature_ratio;
    EXPECT_LT(t, last) << g;
    last = t;
  }
}

TEST(CompetitionMc, DeterministicAcrossWorkerCounts) {
  CompetitionParams c = small_run();
  c.g = 1.0;
  const CompetitionResult a = competition_mc(c, 1);
  const CompetitionResult b = competition_mc(c, 3);
  EXPECT_EQ(a.temperature_ratio, b.temperature_ratio);
  EXPECT_EQ(a.surviving_fraction, b.surviving_fraction);
  EXPECT_EQ(a.histogram.weights, b.histogram.weights);
}

TEST(CompetitionMc, AllAtomsLost) {
  CompetitionParams c;
  c.n_traj = 1000;
  c.g = 19.0;
  c.t_total = 20.0;
  EXPECT_THROW(competition_mc(c), AllAtomsLost);
}

TEST(CompetitionParams, StabilityPreconditions) {
  CompetitionParams c;
  c.dt = 0.2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = CompetitionParams{};
  c.g = 100.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = CompetitionParams{};
  c.n_traj = 999;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace iselect
