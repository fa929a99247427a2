#include "iselect/subrecoil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

#include "iselect/errors.hpp"

namespace iselect {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Drives one atom from t = 0 to p.t_total, reporting each episode and each
// excitation to the observer. Every consumer of a stream goes through here so
// recorded and summarized runs draw identical random numbers.
template <class Observer>
void run_atom(const SubrecoilParams& p, double v, RandomStream& rng, Observer& obs) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double t = 0.0;
  for (;;) {
    const double rate = excitation_rate(p, v);
    double t_next = kInf;
    if (rate > 0.0) {
      t_next = t - std::log1p(-unit(rng)) / rate;
      if (!(t_next > t)) t_next = std::nextafter(t, kInf);
    }
    if (t_next >= p.t_total) {
      obs.episode(t, p.t_total, v, true);
      return;
    }
    obs.episode(t, t_next, v, false);
    v += v >= 0.0 ? -p.raman_kick : p.raman_kick;
    for (int k = 0; k < p.repump_recoils; ++k) v += p.v_r * (2.0 * unit(rng) - 1.0);
    t = t_next;
    obs.event(t, v);
  }
}

struct Recorder {
  Trajectory& out;
  void episode(double enter, double exit, double v, bool censored) {
    out.episodes.push_back({enter, exit, v, censored});
  }
  void event(double t, double v) {
    out.times.push_back(t);
    out.velocities.push_back(v);
  }
};

struct Summarizer {
  const SummaryOptions& opts;
  double t_total;
  TrajectorySummary out;
  std::size_t next_sample = 0;

  Summarizer(const SummaryOptions& o, double total) : opts(o), t_total(total) {
    out.trapped_at_sample.assign(opts.n_samples, 0);
  }

  double sample_time(std::size_t j) const {
    return t_total * static_cast<double>(j) / static_cast<double>(opts.n_samples - 1);
  }

  void episode(double enter, double exit, double v, bool censored) {
    const bool trapped = std::abs(v) < opts.v_trap;
    const double duration = exit - enter;
    if (trapped) {
      out.trapped_durations.push_back(duration);
      out.trapped_censored.push_back(censored ? 1 : 0);
    }
    out.longest_episode = std::max(out.longest_episode, duration);
    while (next_sample < opts.n_samples) {
      const double s = sample_time(next_sample);
      if (!(s < exit || (censored && s <= exit))) break;
      out.trapped_at_sample[next_sample++] = trapped ? 1 : 0;
    }
    out.final_velocity = v;
  }
  void event(double, double) { ++out.events; }
};

void check_summary_options(const SummaryOptions& opts) {
  if (!(opts.v_trap > 0.0)) throw std::invalid_argument("v_trap must be positive");
  if (opts.n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
}

}  // namespace

SampledRate::SampledRate(std::vector<double> v_over_vr, std::vector<double> amplitude)
    : v_(std::move(v_over_vr)), s_(std::move(amplitude)) {
  if (v_.size() != s_.size() || v_.size() < 2) throw std::invalid_argument("rate table needs >= 2 matched samples");
  for (std::size_t i = 1; i < v_.size(); ++i) {
    if (!(v_[i] > v_[i - 1])) throw std::invalid_argument("rate table velocities must be strictly increasing");
  }
  if (v_.front() > -1.0 || v_.back() < 1.0) throw std::invalid_argument("rate table must cover v/v_r in [-1, 1]");
  for (double s : s_) {
    if (!std::isfinite(s)) throw std::invalid_argument("rate table amplitudes must be finite");
  }
  const auto raw = [this](double x) {
    const auto it = std::upper_bound(v_.begin(), v_.end(), x);
    const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - v_.begin()), 1, v_.size() - 1);
    const double f = (x - v_[i - 1]) / (v_[i] - v_[i - 1]);
    return s_[i - 1] + f * (s_[i] - s_[i - 1]);
  };
  const double norm2 = 0.5 * (raw(1.0) * raw(1.0) + raw(-1.0) * raw(-1.0));
  if (!(norm2 > 0.0)) throw std::invalid_argument("rate table vanishes at |v| = v_r");
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& s : s_) s *= scale;
}

SampledRate SampledRate::from_raman(double q_star, double k_eff, double omega_scale, double v_recoil,
                                    const HydrogenRamanParams& raman, double half_width_vr, std::size_t points) {
  if (!(v_recoil > 0.0) || !(half_width_vr >= 1.0)) {
    throw std::invalid_argument("need v_recoil > 0 and half_width_vr >= 1");
  }
  std::vector<double> x = lin_spaced(-half_width_vr, half_width_vr, points);
  std::vector<double> s(points);
  for (std::size_t i = 0; i < points; ++i) {
    s[i] = raman_amplitude(doppler_shifted_q(q_star, x[i] * v_recoil, k_eff, omega_scale), raman);
  }
  return SampledRate(std::move(x), std::move(s));
}

SampledRate SampledRate::from_spectrum(std::span<const double> q, std::span<const double> s, double q_star,
                                       double k_eff, double omega_scale, double v_recoil) {
  if (q.size() != s.size()) throw std::invalid_argument("q and S columns differ in length");
  if (!(v_recoil > 0.0) || k_eff == 0.0 || !(omega_scale > 0.0) || !(q_star > 1.0)) {
    throw std::invalid_argument("need v_recoil > 0, k_eff != 0, omega_scale > 0 and q_star > 1");
  }
  std::vector<std::pair<double, double>> rows;
  rows.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!std::isfinite(s[i]) || !(q[i] > 0.0)) continue;
    const double v = omega_scale * (1.0 / (q[i] * q[i]) - 1.0 / (q_star * q_star)) / k_eff;
    rows.emplace_back(v / v_recoil, s[i]);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<double> x;
  std::vector<double> a;
  for (const auto& [v, amp] : rows) {
    if (!x.empty() && v <= x.back()) continue;
    x.push_back(v);
    a.push_back(amp);
  }
  return SampledRate(std::move(x), std::move(a));
}

std::optional<double> SampledRate::relative_rate(double v_over_vr) const {
  if (v_.empty() || v_over_vr < v_.front() || v_over_vr > v_.back()) return std::nullopt;
  const auto it = std::upper_bound(v_.begin(), v_.end(), v_over_vr);
  const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - v_.begin()), 1, v_.size() - 1);
  const double f = (v_over_vr - v_[i - 1]) / (v_[i] - v_[i - 1]);
  const double s = s_[i - 1] + f * (s_[i] - s_[i - 1]);
  return s * s;
}

void SubrecoilParams::validate() const {
  if (!(rate_at_recoil > 0.0)) throw std::invalid_argument("rate_at_recoil must be positive");
  if (!(v_r > 0.0)) throw std::invalid_argument("v_r must be positive");
  if (!(t_total > 0.0)) throw std::invalid_argument("t_total must be positive");
  if (!(rate_cap >= 0.0)) throw std::invalid_argument("rate_cap must be non-negative");
  if (!(raman_kick >= 0.0)) throw std::invalid_argument("raman_kick must be non-negative");
  if (repump_recoils < 0) throw std::invalid_argument("repump_recoils must be non-negative");
  if (n_traj == 0) throw std::invalid_argument("n_traj must be positive");
  if (law == RateLaw::sampled && table.empty()) throw std::invalid_argument("sampled rate law needs a rate table");
}

double excitation_rate(const SubrecoilParams& p, double v) {
  const double x = v / p.v_r;
  switch (p.law) {
    case RateLaw::quadratic:
      return p.rate_at_recoil * std::min(x * x, p.rate_cap);
    case RateLaw::constant:
      return p.rate_at_recoil;
    case RateLaw::sampled:
      return p.rate_at_recoil * std::min(p.table.relative_rate(x).value_or(p.rate_cap), p.rate_cap);
  }
  return 0.0;
}

Trajectory simulate_trajectory(const SubrecoilParams& p, double v_init, RandomStream& stream) {
  p.validate();
  if (!(std::abs(v_init) <= 100.0 * p.v_r)) throw std::invalid_argument("|v_init| must be <= 100 v_r");
  Trajectory out;
  out.t_total = p.t_total;
  out.times.push_back(0.0);
  out.velocities.push_back(v_init);
  Recorder rec{out};
  run_atom(p, v_init, stream, rec);
  return out;
}

double InitialVelocity::sample(RandomStream& stream) const {
  switch (kind) {
    case Kind::fixed:
      return a;
    case Kind::uniform:
      return std::uniform_real_distribution<double>(a, b)(stream);
    case Kind::gaussian:
      return std::normal_distribution<double>(a, b)(stream);
  }
  return a;
}

TrajectorySummary summarize(const Trajectory& t, const SummaryOptions& opts) {
  check_summary_options(opts);
  Summarizer s(opts, t.t_total);
  for (const Episode& e : t.episodes) s.episode(e.enter, e.exit, e.velocity, e.censored);
  s.out.events = t.times.empty() ? 0 : t.times.size() - 1;
  return std::move(s.out);
}

Trajectory ensemble_member(const SubrecoilParams& p, const InitialVelocity& init, std::size_t index) {
  RandomStream stream = derive_stream(p.seed, index);
  const double v0 = init.sample(stream);
  return simulate_trajectory(p, v0, stream);
}

std::vector<TrajectorySummary> simulate_ensemble(const SubrecoilParams& p, const InitialVelocity& init,
                                                 const SummaryOptions& opts, std::size_t workers) {
  p.validate();
  check_summary_options(opts);
  std::vector<TrajectorySummary> out(p.n_traj);
  parallel_for(p.n_traj, [&](std::size_t i) {
    RandomStream stream = derive_stream(p.seed, i);
    const double v0 = init.sample(stream);
    if (!(std::abs(v0) <= 100.0 * p.v_r)) throw std::invalid_argument("initial velocity exceeds 100 v_r");
    Summarizer s(opts, p.t_total);
    run_atom(p, v0, stream, s);
    out[i] = std::move(s.out);
  }, workers);
  return out;
}

std::vector<double> kaplan_meier(std::span<const double> durations, std::span<const unsigned char> censored,
                                 std::span<const double> at) {
  if (durations.size() != censored.size()) throw std::invalid_argument("kaplan_meier: size mismatch");
  std::vector<std::size_t> order(durations.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return durations[a] < durations[b]; });

  // Step function: survival after each distinct event duration.
  std::vector<double> step_t;
  std::vector<double> step_s;
  double survival = 1.0;
  auto at_risk = static_cast<double>(durations.size());
  for (std::size_t i = 0; i < order.size();) {
    const double d = durations[order[i]];
    std::size_t j = i;
    double deaths = 0.0;
    while (j < order.size() && durations[order[j]] == d) {
      if (!censored[order[j]]) deaths += 1.0;
      ++j;
    }
    if (deaths > 0.0) {
      survival *= 1.0 - deaths / at_risk;
      step_t.push_back(d);
      step_s.push_back(survival);
    }
    at_risk -= static_cast<double>(j - i);
    i = j;
  }

  std::vector<double> out(at.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    const auto it = std::upper_bound(step_t.begin(), step_t.end(), at[k]);
    out[k] = it == step_t.begin() ? 1.0 : step_s[static_cast<std::size_t>(it - step_t.begin()) - 1];
  }
  return out;
}

TrappedFractionSeries trapped_fraction_series(std::span<const TrajectorySummary> summaries, const SubrecoilParams& p,
                                              const SummaryOptions& opts) {
  check_summary_options(opts);
  if (summaries.empty()) throw std::invalid_argument("no trajectories");
  TrappedFractionSeries series;
  const auto n = static_cast<double>(summaries.size());
  for (std::size_t j = 0; j < opts.n_samples; ++j) {
    std::size_t trapped = 0;
    for (const auto& s : summaries) {
      if (s.trapped_at_sample.size() != opts.n_samples) throw std::invalid_argument("summary sample count mismatch");
      trapped += s.trapped_at_sample[j];
    }
    const double f = static_cast<double>(trapped) / n;
    series.times.push_back(p.t_total * static_cast<double>(j) / static_cast<double>(opts.n_samples - 1));
    series.fraction.push_back(f);
    series.error.push_back(std::sqrt(f * (1.0 - f) / n));
  }
  return series;
}

TrappingStatistics trapping_statistics(std::span<const TrajectorySummary> summaries, const SubrecoilParams& p,
                                       const SummaryOptions& opts) {
  p.validate();
  check_summary_options(opts);
  if (summaries.size() < 1000) throw std::invalid_argument("trapping statistics need >= 1000 trajectories");
  const double unit = 1.0 / p.rate_at_recoil;
  if (p.t_total < 100.0 * unit) throw std::invalid_argument("t_total must span at least two decades of 1/rate_at_recoil");

  TrappingStatistics st;
  std::vector<double> durations;
  std::vector<unsigned char> censored;
  CompensatedSum longest;
  std::size_t long_count = 0;
  for (const auto& s : summaries) {
    durations.insert(durations.end(), s.trapped_durations.begin(), s.trapped_durations.end());
    censored.insert(censored.end(), s.trapped_censored.begin(), s.trapped_censored.end());
    longest.add(s.longest_episode / p.t_total);
    if (s.longest_episode >= 0.6 * p.t_total) ++long_count;
  }
  st.qualifying_episodes = durations.size();
  if (st.qualifying_episodes < 100) {
    throw InsufficientEpisodes(fmt::format("only {} episodes with |v| < {:g}; need >= 100", durations.size(), opts.v_trap));
  }
  const auto n = static_cast<double>(summaries.size());
  st.longest_fraction = longest.value() / n;
  st.long_episode_share = static_cast<double>(long_count) / n;

  const double centre = std::sqrt(unit * p.t_total);
  st.fit_lo = centre / 10.0;
  st.fit_hi = centre * 10.0;
  const std::vector<double> at = log_spaced(st.fit_lo, st.fit_hi, 21);
  const std::vector<double> survival = kaplan_meier(durations, censored, at);
  if (std::all_of(survival.begin(), survival.end(), [](double s) { return s > 0.0; })) {
    std::vector<double> lx(at.size()), ly(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
      lx[i] = std::log(at[i]);
      ly[i] = std::log(survival[i]);
    }
    st.tail_fit = fit_line(lx, ly);
    if (st.tail_fit.r_squared >= 0.9) st.tail_exponent = -st.tail_fit.slope;
  }
  st.trapped = trapped_fraction_series(summaries, p, opts);
  return st;
}

TrappingStatistics trapping_statistics(std::span<const Trajectory> trajectories, const SubrecoilParams& p,
                                       const SummaryOptions& opts) {
  std::vector<TrajectorySummary> summaries;
  summaries.reserve(trajectories.size());
  for (const auto& t : trajectories) summaries.push_back(summarize(t, opts));
  return trapping_statistics(summaries, p, opts);
}

GrowthReport trapped_fraction_growth(const TrappedFractionSeries& series, std::size_t n_atoms, std::size_t bins) {
  if (bins < 10) throw std::invalid_argument("need >= 10 bins");
  const std::size_t samples = series.fraction.size();
  if (samples < bins || n_atoms == 0) throw std::invalid_argument("fewer samples than bins");
  GrowthReport r;
  const auto n = static_cast<double>(n_atoms);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * samples / bins;
    const std::size_t hi = (b + 1) * samples / bins;
    CompensatedSum f, t;
    for (std::size_t j = lo; j < hi; ++j) {
      f.add(series.fraction[j]);
      t.add(series.times[j]);
    }
    const auto count = static_cast<double>(hi - lo);
    const double mean = f.value() / count;
    r.bin_times.push_back(t.value() / count);
    r.fraction.push_back(mean);
    r.error.push_back(std::sqrt(mean * (1.0 - mean) / n));
  }
  for (std::size_t b = 1; b < bins; ++b) {
    if (r.fraction[b] + r.error[b] < r.fraction[b - 1] - r.error[b - 1] - 1e-12) r.non_decreasing = false;
  }
  const double rise = r.fraction.back() - r.fraction.front();
  const double err = std::hypot(r.error.front(), r.error.back());
  if (err > 0.0) {
    r.growth_sigma = rise / err;
  } else {
    r.growth_sigma = rise > 0.0 ? kInf : (rise < 0.0 ? -kInf : 0.0);
  }
  return r;
}

GrowthReport trapped_fraction_growth(std::span<const TrajectorySummary> summaries, const SubrecoilParams& p,
                                     const SummaryOptions& opts, std::size_t bins) {
  return trapped_fraction_growth(trapped_fraction_series(summaries, p, opts), summaries.size(), bins);
}

}  // namespace iselect
