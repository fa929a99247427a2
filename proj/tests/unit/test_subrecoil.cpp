#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "iselect/errors.hpp"
#include "iselect/subrecoil.hpp"

namespace iselect {
namespace {

SubrecoilParams base(double t_total, std::size_t n_traj, std::uint64_t seed = 1) {
  SubrecoilParams p;
  p.t_total = t_total;
  p.n_traj = n_traj;
  p.seed = seed;
  return p;
}

InitialVelocity fixed(double v) {
  InitialVelocity init;
  init.kind = InitialVelocity::Kind::fixed;
  init.a = v;
  return init;
}

TEST(ExcitationRate, Laws) {
  SubrecoilParams p;
  EXPECT_EQ(excitation_rate(p, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(excitation_rate(p, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(excitation_rate(p, -50.0), 100.0);
  p.law = RateLaw::constant;
  EXPECT_EQ(excitation_rate(p, 0.0), 1.0);
}

TEST(SimulateTrajectory, DarkEverywhere) {
  SubrecoilParams p = base(1e3, 1);
  p.rate_cap = 0.0;
  RandomStream rng = derive_stream(0, 0);
  const Trajectory t = simulate_trajectory(p, 3.0, rng);
  ASSERT_EQ(t.episodes.size(), 1u);
  EXPECT_EQ(t.episodes[0].enter, 0.0);
  EXPECT_EQ(t.episodes[0].exit, 1e3);
  EXPECT_EQ(t.episodes[0].velocity, 3.0);
  EXPECT_TRUE(t.episodes[0].censored);
}

TEST(SimulateTrajectory, StartingAtRestNeverLeaves) {
  RandomStream rng = derive_stream(0, 0);
  const Trajectory t = simulate_trajectory(base(1e5, 1), 0.0, rng);
  EXPECT_EQ(t.episodes.size(), 1u);
  EXPECT_EQ(t.times.size(), 1u);
}

TEST(SimulateTrajectory, RejectsWildStart) {
  RandomStream rng = derive_stream(0, 0);
  EXPECT_THROW(simulate_trajectory(base(10.0, 1), 101.0, rng), std::invalid_argument);
}

TEST(SimulateTrajectory, BookkeepingInvariants) {
  const SubrecoilParams p = base(2e4, 50);
  const double max_jump = p.raman_kick + p.repump_recoils * p.v_r;
  for (std::size_t i = 0; i < p.n_traj; ++i) {
    const Trajectory t = ensemble_member(p, fixed(4.0), i);
    ASSERT_EQ(t.times.size(), t.velocities.size());
    ASSERT_EQ(t.episodes.size(), t.times.size());
    EXPECT_EQ(t.times.front(), 0.0);
    for (std::size_t j = 1; j < t.times.size(); ++j) {
      EXPECT_GT(t.times[j], t.times[j - 1]);
      EXPECT_LE(std::abs(t.velocities[j] - t.velocities[j - 1]), max_jump + 1e-12);
    }
    for (std::size_t j = 0; j < t.episodes.size(); ++j) {
      EXPECT_GT(t.episodes[j].duration(), 0.0);
      EXPECT_EQ(t.episodes[j].enter, t.times[j]);
      EXPECT_EQ(t.episodes[j].velocity, t.velocities[j]);
      if (j + 1 < t.episodes.size()) EXPECT_EQ(t.episodes[j].exit, t.episodes[j + 1].enter);
    }
    EXPECT_EQ(t.episodes.back().exit, p.t_total);
    EXPECT_TRUE(t.episodes.back().censored);
  }
}

TEST(SimulateTrajectory, RamanKickPointsTowardRest) {
  SubrecoilParams p = base(1e3, 1);
  p.repump_recoils = 0;
  RandomStream rng = derive_stream(9, 0);
  const Trajectory t = simulate_trajectory(p, 7.0, rng);
  ASSERT_GE(t.velocities.size(), 4u);
  EXPECT_EQ(t.velocities[1], 5.0);
  EXPECT_EQ(t.velocities[2], 3.0);
  EXPECT_EQ(t.velocities[3], 1.0);
}

TEST(SimulateEnsemble, MostAtomsEndCold) {
  const SubrecoilParams p = base(5e4, 1000);
  const auto s = simulate_ensemble(p, fixed(4.0), SummaryOptions{});
  std::size_t cold = 0;
  for (const auto& x : s) cold += std::abs(x.final_velocity) < p.v_r ? 1 : 0;
  EXPECT_GT(static_cast<double>(cold) / s.size(), 0.5);
}

TEST(SimulateEnsemble, MemberMatchesEnsemble) {
  const SubrecoilParams p = base(5e3, 40, 17);
  const SummaryOptions opts;
  InitialVelocity init;
  init.kind = InitialVelocity::Kind::uniform;
  init.a = -5.0;
  init.b = 5.0;
  const auto s = simulate_ensemble(p, init, opts);
  for (std::size_t i : {0u, 7u, 39u}) {
    const TrajectorySummary m = summarize(ensemble_member(p, init, i), opts);
    EXPECT_EQ(m.trapped_durations, s[i].trapped_durations);
    EXPECT_EQ(m.final_velocity, s[i].final_velocity);
    EXPECT_EQ(m.events, s[i].events);
  }
}

TEST(SimulateEnsemble, IndependentOfWorkerCount) {
  const SubrecoilParams p = base(5e3, 64, 5);
  const auto a = simulate_ensemble(p, fixed(4.0), SummaryOptions{}, 1);
  const auto b = simulate_ensemble(p, fixed(4.0), SummaryOptions{}, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].trapped_durations, b[i].trapped_durations);
    EXPECT_EQ(a[i].trapped_at_sample, b[i].trapped_at_sample);
    EXPECT_EQ(a[i].final_velocity, b[i].final_velocity);
  }
}

TEST(KaplanMeier, HandComputed) {
  const std::vector<double> d{1.0, 2.0, 3.0};
  const std::vector<unsigned char> none{0, 0, 0};
  const std::vector<unsigned char> middle{0, 1, 0};
  const std::vector<double> at{0.5, 1.5, 2.5, 3.5};
  const auto plain = kaplan_meier(d, none, at);
  const std::vector<double> expected{1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0};
  ASSERT_EQ(plain.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(plain[i], expected[i], 1e-15) << i;
  const auto km = kaplan_meier(d, middle, at);
  EXPECT_DOUBLE_EQ(km[2], 2.0 / 3.0);
  EXPECT_EQ(km[3], 0.0);
}

// Waiting times of atoms entering the trap uniformly in v with rate v^2:
// P(tau > t) = E[exp(-v^2 t)] ~ t^-1/2.
TEST(TrappingStatistics, UniformEntryOracle) {
  const SubrecoilParams p = base(1e5, 2000);
  const SummaryOptions opts;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uv(-1.0, 1.0);
  std::vector<TrajectorySummary> s(p.n_traj);
  for (auto& x : s) {
    x.trapped_at_sample.assign(opts.n_samples, 1);
    for (int k = 0; k < 100; ++k) {
      const double v = uv(rng);
      const double tau = std::exponential_distribution<double>(v * v)(rng);
      x.trapped_durations.push_back(std::min(tau, p.t_total));
      x.trapped_censored.push_back(tau >= p.t_total ? 1 : 0);
    }
  }
  const TrappingStatistics st = trapping_statistics(s, p, opts);
  EXPECT_NEAR(st.tail_exponent, 0.5, 0.03);
  EXPECT_GT(st.tail_fit.r_squared, 0.99);
}

TEST(TrappingStatistics, ConstantRateHasNoPowerLaw) {
  SubrecoilParams p = base(500.0, 1000);
  p.law = RateLaw::constant;
  const SummaryOptions opts;
  const auto s = simulate_ensemble(p, fixed(4.0), opts);
  const TrappingStatistics st = trapping_statistics(s, p, opts);
  EXPECT_GT(st.tail_exponent, 2.0);
}

TEST(TrappingStatistics, InsufficientEpisodes) {
  SubrecoilParams p = base(1e3, 1000);
  p.rate_cap = 0.0;
  const SummaryOptions opts;
  const auto s = simulate_ensemble(p, fixed(50.0), opts);
  EXPECT_THROW(trapping_statistics(s, p, opts), InsufficientEpisodes);
}

TEST(TrappingStatistics, Preconditions) {
  const SubrecoilParams p = base(1e3, 999);
  const auto s = simulate_ensemble(p, fixed(4.0), SummaryOptions{});
  EXPECT_THROW(trapping_statistics(s, p, SummaryOptions{}), std::invalid_argument);
}

TEST(TrappingStatistics, LongEpisodesOccur) {
  const SubrecoilParams p = base(5e4, 1000);
  const SummaryOptions opts;
  const auto s = simulate_ensemble(p, fixed(4.0), opts);
  const TrappingStatistics st = trapping_statistics(s, p, opts);
  EXPECT_GT(st.long_episode_share, 0.0);
  EXPECT_GT(st.longest_fraction, 0.0);
  EXPECT_LE(st.longest_fraction, 1.0);
}

TEST(TrappingStatistics, SampledLawMatchesQuadratic) {
  const HydrogenRamanParams h;
  const double q_star = find_antiresonance(2, h);
  const double k_eff = 2.0 * kRydbergAngularFrequency / (q_star * q_star) / kSpeedOfLight;
  const double v_recoil = kHbar * k_eff / kHydrogenMass;
  SubrecoilParams quad = base(2e4, 3000, 4);
  SubrecoilParams sampled = quad;
  sampled.law = RateLaw::sampled;
  sampled.table = SampledRate::from_raman(q_star, k_eff, kRydbergAngularFrequency, v_recoil, h, 12.0, 2401);
  const SummaryOptions opts;
  const double a = trapping_statistics(simulate_ensemble(quad, fixed(4.0), opts), quad, opts).tail_exponent;
  const double b = trapping_statistics(simulate_ensemble(sampled, fixed(4.0), opts), sampled, opts).tail_exponent;
  EXPECT_LT(std::abs(a - b), 0.1);
}

TEST(SampledRate, NormalizedAtRecoil) {
  const SampledRate r({-2.0, 0.0, 2.0}, {-4.0, 0.0, 4.0});
  EXPECT_DOUBLE_EQ(*r.relative_rate(1.0), 1.0);
  EXPECT_DOUBLE_EQ(*r.relative_rate(-0.5), 0.25);
  EXPECT_EQ(*r.relative_rate(0.0), 0.0);
  EXPECT_FALSE(r.relative_rate(3.0).has_value());
  EXPECT_THROW(SampledRate({-0.5, 0.5}, {1.0, 1.0}), std::invalid_argument);
}

TEST(SampledRate, SpectrumTableMatchesDirectTable) {
  const HydrogenRamanParams h;
  const double q_star = find_antiresonance(2, h);
  const double k_eff = 1.86e7;
  const double v_recoil = 1.17;
  const double dq = 4e-9;
  std::vector<double> q, s;
  for (int i = -400; i <= 400; ++i) {
    q.push_back(q_star + i * dq);
    s.push_back(raman_amplitude(q.back(), h));
  }
  const SampledRate from_scan =
      SampledRate::from_spectrum(q, s, q_star, k_eff, kRydbergAngularFrequency, v_recoil);
  const SampledRate direct = SampledRate::from_raman(q_star, k_eff, kRydbergAngularFrequency, v_recoil, h, 20.0, 801);
  for (double x : {-3.0, -1.0, -0.3, 0.4, 1.0, 5.0}) {
    EXPECT_NEAR(*from_scan.relative_rate(x), *direct.relative_rate(x), 2e-3 * (1.0 + x * x)) << x;
  }
}

TEST(TrappedFractionGrowth, DarkInsideStaysOne) {
  SubrecoilParams p = base(1e3, 1000);
  p.rate_cap = 0.0;
  const SummaryOptions opts;
  const auto s = simulate_ensemble(p, fixed(0.5), opts);
  const GrowthReport g = trapped_fraction_growth(s, p, opts);
  for (double f : g.fraction) EXPECT_EQ(f, 1.0);
  EXPECT_TRUE(g.non_decreasing);
}

TEST(TrappedFractionGrowth, DarkOutsideStaysZero) {
  SubrecoilParams p = base(1e3, 1000);
  p.rate_cap = 0.0;
  const SummaryOptions opts;
  const auto s = simulate_ensemble(p, fixed(3.0), opts);
  const GrowthReport g = trapped_fraction_growth(s, p, opts);
  for (double f : g.fraction) EXPECT_EQ(f, 0.0);
}

TEST(TrappedFractionGrowth, CoolingAccumulatesAtoms) {
  const SubrecoilParams p = base(5e4, 2000);
  const SummaryOptions opts;
  const auto s = simulate_ensemble(p, fixed(4.0), opts);
  const GrowthReport g = trapped_fraction_growth(s, p, opts);
  EXPECT_GE(g.bin_times.size(), 10u);
  EXPECT_TRUE(g.non_decreasing);
  EXPECT_GT(g.growth_sigma, 3.0);
}

}  // namespace
}  // namespace iselect
