#pragma once

// Continuous-wave Raman cooling with an excitation rate that vanishes at
// v = 0. Kinetic Monte Carlo: exponential waiting times at the current
// velocity's rate, a deterministic Raman kick toward v = 0, then repumping
// recoils. Long waits near v = 0 are the trapping episodes whose durations
// are heavy-tailed (Levy flights).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "iselect/hydrogen.hpp"
#include "iselect/numeric.hpp"
#include "iselect/parallel.hpp"

namespace iselect {

enum class RateLaw {
  quadratic,  ///< rate_at_recoil * min((v/v_r)^2, cap)
  constant,   ///< rate_at_recoil everywhere; no dark velocity
  sampled,    ///< rate_at_recoil * min(s(v)^2, cap) from a sampled amplitude table
};

/// Signed amplitude s sampled against v/v_r; the rate is proportional to s^2
/// so a linear interpolant keeps the zero of the rate quadratic. Normalized so
/// that the mean of s(+1)^2 and s(-1)^2 is one.
class SampledRate {
 public:
  SampledRate() = default;
  /// v_over_vr strictly increasing and covering [-1, 1].
  SampledRate(std::vector<double> v_over_vr, std::vector<double> amplitude);

  /// Table built from the hydrogen Raman amplitude around an antiresonance.
  /// v_recoil is the physical recoil velocity in m/s that v/v_r refers to.
  static SampledRate from_raman(double q_star, double k_eff, double omega_scale, double v_recoil,
                                const HydrogenRamanParams& raman, double half_width_vr, std::size_t points);

  /// Table from scanned (q, S) pairs, e.g. a hydrogen-scan CSV. Each q maps
  /// to v = omega_scale*(1/q^2 - 1/q_star^2)/k_eff; non-finite S are skipped.
  static SampledRate from_spectrum(std::span<const double> q, std::span<const double> s, double q_star, double k_eff,
                                   double omega_scale, double v_recoil);

  /// Normalized s(v/v_r)^2, or nullopt outside the table.
  std::optional<double> relative_rate(double v_over_vr) const;

  std::span<const double> v_over_vr() const { return v_; }
  std::span<const double> amplitude() const { return s_; }
  bool empty() const { return v_.empty(); }

 private:
  std::vector<double> v_;
  std::vector<double> s_;
};

struct SubrecoilParams {
  double rate_at_recoil = 1.0;  ///< Omega0, sets the time unit
  double rate_cap = 100.0;      ///< saturation of the relative rate
  double v_r = 1.0;             ///< recoil velocity
  double raman_kick = 2.0;      ///< velocity change per Raman transition, toward v = 0
  int repump_recoils = 2;       ///< uniform kicks in [-v_r, v_r] per repump cycle
  double t_total = 5e4;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  RateLaw law = RateLaw::quadratic;
  SampledRate table;            ///< used when law == sampled

  void validate() const;
};

/// Excitation rate at velocity v.
double excitation_rate(const SubrecoilParams& p, double v);

/// Waiting period at a fixed velocity between two excitations (or a run
/// boundary). `censored` marks the last episode, cut at t_total.
struct Episode {
  double enter = 0.0;
  double exit = 0.0;
  double velocity = 0.0;
  bool censored = false;

  double duration() const { return exit - enter; }
};

struct Trajectory {
  std::vector<double> times;       ///< 0 followed by every excitation time
  std::vector<double> velocities;  ///< velocity right after times[i]
  std::vector<Episode> episodes;   ///< tile [0, t_total]
  double t_total = 0.0;
};

/// Runs one atom from v_init to t_total. Requires |v_init| <= 100*v_r.
Trajectory simulate_trajectory(const SubrecoilParams& p, double v_init, RandomStream& stream);

/// Initial velocity law for ensembles.
struct InitialVelocity {
  enum class Kind { fixed, uniform, gaussian };
  Kind kind = Kind::fixed;
  double a = 4.0;  ///< fixed value, uniform lower bound, or gaussian mean
  double b = 0.0;  ///< uniform upper bound or gaussian sigma

  double sample(RandomStream& stream) const;
};

struct SummaryOptions {
  double v_trap = 1.0;          ///< trap half-width, same units as v_r
  std::size_t n_samples = 201;  ///< trapped-fraction samples over [0, t_total]
};

/// What the statistics need from a trajectory, without the event record.
struct TrajectorySummary {
  std::vector<double> trapped_durations;   ///< episodes with |v| < v_trap
  std::vector<unsigned char> trapped_censored;
  std::vector<unsigned char> trapped_at_sample;
  double longest_episode = 0.0;
  double final_velocity = 0.0;
  std::size_t events = 0;
};

TrajectorySummary summarize(const Trajectory& t, const SummaryOptions& opts);

/// Trajectory `index` of an ensemble; identical to the ensemble's member.
Trajectory ensemble_member(const SubrecoilParams& p, const InitialVelocity& init, std::size_t index);

/// Streams p.n_traj trajectories into summaries. Bit-identical for any
/// worker count.
std::vector<TrajectorySummary> simulate_ensemble(const SubrecoilParams& p, const InitialVelocity& init,
                                                 const SummaryOptions& opts, std::size_t workers = 0);

struct TrappedFractionSeries {
  std::vector<double> times;
  std::vector<double> fraction;  ///< share of atoms with |v| < v_trap
  std::vector<double> error;     ///< binomial standard error
};

inline constexpr double kNoPowerLaw = std::numeric_limits<double>::infinity();

struct TrappingStatistics {
  /// mu in P(tau > t) ~ t^-mu; kNoPowerLaw when the survival function dies
  /// inside the fit window or is not a straight line in log-log.
  double tail_exponent = kNoPowerLaw;
  LineFit tail_fit;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  std::size_t qualifying_episodes = 0;
  double longest_fraction = 0.0;       ///< mean of longest episode / t_total
  double long_episode_share = 0.0;     ///< share of atoms with an episode >= 0.6 t_total
  TrappedFractionSeries trapped;
};

/// Kaplan-Meier survival of trapped-episode durations, fitted over the two
/// decades centred (geometrically) between 1/rate_at_recoil and t_total.
/// Needs >= 1000 trajectories and >= 100 qualifying episodes (else
/// InsufficientEpisodes).
TrappingStatistics trapping_statistics(std::span<const TrajectorySummary> summaries, const SubrecoilParams& p,
                                       const SummaryOptions& opts);
TrappingStatistics trapping_statistics(std::span<const Trajectory> trajectories, const SubrecoilParams& p,
                                       const SummaryOptions& opts);

/// Kaplan-Meier estimate of P(tau > t) at each t in `at`.
std::vector<double> kaplan_meier(std::span<const double> durations, std::span<const unsigned char> censored,
                                 std::span<const double> at);

TrappedFractionSeries trapped_fraction_series(std::span<const TrajectorySummary> summaries, const SubrecoilParams& p,
                                              const SummaryOptions& opts);

struct GrowthReport {
  std::vector<double> bin_times;  ///< bin centres
  std::vector<double> fraction;
  std::vector<double> error;
  bool non_decreasing = true;     ///< every later bin's error bar reaches the previous bin's
  double growth_sigma = 0.0;      ///< (last - first) / combined error; inf if it rose with zero error
};

/// Coarse-grains the trapped-fraction series into `bins` (>= 10) bins.
GrowthReport trapped_fraction_growth(const TrappedFractionSeries& series, std::size_t n_atoms, std::size_t bins = 10);
GrowthReport trapped_fraction_growth(std::span<const TrajectorySummary> summaries, const SubrecoilParams& p,
                                     const SummaryOptions& opts, std::size_t bins = 10);

}  // namespace iselect
