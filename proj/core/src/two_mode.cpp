#include "iselect/two_mode.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "iselect/errors.hpp"
#include "iselect/numeric.hpp"
#include "iselect/parallel.hpp"

namespace iselect {
namespace {

constexpr double kTailTolerance = 1e-3;

double poisson_log_pmf(double lambda, std::size_t n) {
  const auto k = static_cast<double>(n);
  if (lambda == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
}

std::vector<double> coherent_amplitudes(double nbar, std::size_t nmax) {
  std::vector<double> c(nmax + 1);
  for (std::size_t n = 0; n <= nmax; ++n) c[n] = std::exp(0.5 * poisson_log_pmf(nbar, n));
  return c;
}

}  // namespace

JointModeState::JointModeState(std::size_t nmax1, std::size_t nmax2, double time)
    : nmax1_(nmax1), nmax2_(nmax2), time_(time), amplitudes_((nmax1 + 1) * (nmax2 + 1)) {}

std::size_t truncation_bound(double nbar) {
  if (nbar < 0.0) throw std::invalid_argument("mean photon number must be non-negative");
  return static_cast<std::size_t>(std::ceil(nbar + 10.0 * std::sqrt(nbar) + 10.0));
}

double poisson_tail_mass(double nbar, std::size_t nmax) {
  if (nbar == 0.0) return 0.0;
  // Sum upward from nmax+1; terms past the mode decrease monotonically.
  CompensatedSum tail;
  for (std::size_t n = nmax + 1;; ++n) {
    const double term = std::exp(poisson_log_pmf(nbar, n));
    tail.add(term);
    if (static_cast<double>(n) > nbar && term < 1e-18 * std::max(tail.value(), 1e-300)) break;
    if (term == 0.0 && static_cast<double>(n) > nbar) break;
  }
  return tail.value();
}

JointModeState coherent_joint_state(double nbar1, double nbar2, std::size_t nmax1, std::size_t nmax2) {
  if (nbar1 < 0.0 || nbar2 < 0.0) throw std::invalid_argument("mean photon numbers must be non-negative");
  for (auto [nbar, nmax, mode] : {std::tuple{nbar1, nmax1, 1}, std::tuple{nbar2, nmax2, 2}}) {
    const double tail = poisson_tail_mass(nbar, nmax);
    if (tail >= kTailTolerance) {
      throw TruncationTooTight(fmt::format(
          "mode {}: Poisson tail beyond nmax={} is {:.3g} (nbar={:g}); needs < {:g}", mode, nmax, tail, nbar,
          kTailTolerance));
    }
  }
  const auto c1 = coherent_amplitudes(nbar1, nmax1);
  const auto c2 = coherent_amplitudes(nbar2, nmax2);
  JointModeState s(nmax1, nmax2);
  for (std::size_t n1 = 0; n1 <= nmax1; ++n1) {
    for (std::size_t n2 = 0; n2 <= nmax2; ++n2) s.at(n1, n2) = c1[n1] * c2[n2];
  }
  return s;
}

JointModeState coherent_joint_state(double nbar1, double nbar2) {
  return coherent_joint_state(nbar1, nbar2, truncation_bound(nbar1), truncation_bound(nbar2));
}

SelectionLine selection_line(const DiamondParams& p) {
  // A1*d2' + A2*d1' = (A1 d2 + A2 d1) + (A1 b21 + A2 b11) n1 + (A1 b22 + A2 b12) n2
  const double denom = p.a1 * p.beta22() + p.a2 * p.beta12();
  if (denom == 0.0) {
    throw DegenerateSelection("A1*beta22 + A2*beta12 vanishes: photon number n2 does not enter the residual");
  }
  SelectionLine line;
  line.alpha = -(p.a1 * p.beta21() + p.a2 * p.beta11()) / denom;
  line.mu = -(p.a1 * p.delta2 + p.a2 * p.delta1) / denom;
  return line;
}

JointModeState evolve(const JointModeState& s, const DiamondParams& p, double dt) {
  if (dt < 0.0) throw std::invalid_argument("dt must be non-negative");
  JointModeState out = s;
  out.set_time(s.time() + dt);
  if (dt == 0.0) return out;
  const std::size_t nmax2 = s.nmax2();
  parallel_for(s.nmax1() + 1, [&](std::size_t n1) {
    for (std::size_t n2 = 0; n2 <= nmax2; ++n2) {
      const double w = transition_rate(p, static_cast<double>(n1), static_cast<double>(n2), 0.0);
      out.at(n1, n2) *= std::exp(-w * dt);
    }
  });
  return out;
}

double ground_population(const JointModeState& s) {
  CompensatedSum total;
  for (const auto& a : s.amplitudes()) total.add(std::norm(a));
  return total.value();
}

double offset_variance(const JointModeState& s, const SelectionLine& line) {
  CompensatedSum total, first;
  for (std::size_t n1 = 0; n1 <= s.nmax1(); ++n1) {
    for (std::size_t n2 = 0; n2 <= s.nmax2(); ++n2) {
      const double w = std::norm(s.at(n1, n2));
      total.add(w);
      first.add(w * line.offset(static_cast<double>(n1), static_cast<double>(n2)));
    }
  }
  if (!(total.value() > 0.0)) throw std::invalid_argument("state has zero norm");
  const double mean = first.value() / total.value();
  CompensatedSum second;
  for (std::size_t n1 = 0; n1 <= s.nmax1(); ++n1) {
    for (std::size_t n2 = 0; n2 <= s.nmax2(); ++n2) {
      const double d = line.offset(static_cast<double>(n1), static_cast<double>(n2)) - mean;
      second.add(std::norm(s.at(n1, n2)) * d * d);
    }
  }
  return second.value() / total.value();
}

double degree_of_coherence(const JointModeState& s, const SelectionLine& line, const JointModeState& s0) {
  const double v0 = offset_variance(s0, line);
  if (v0 == 0.0) throw ZeroVariance("initial state has zero variance of n2 - (alpha*n1 + mu)");
  return 10.0 * std::log10(offset_variance(s, line) / v0);
}

double reference_rate(const DiamondParams& p, double nbar1) {
  const SelectionLine line = selection_line(p);
  const double n2 = line.alpha * nbar1 + line.mu + 1.0;
  if (n2 < 0.0) {
    throw DegenerateSelection(fmt::format("selection line gives negative n2={:g} at nbar1={:g}", n2, nbar1));
  }
  const double rate = transition_rate(p, nbar1, n2, 0.0);
  if (!(rate > 0.0)) {
    throw DegenerateSelection("reference rate vanishes; supply gamma0 explicitly");
  }
  return rate;
}

std::vector<CoherenceSample> coherence_series(const DiamondParams& p, const CoherenceRun& run) {
  p.validate();
  const SelectionLine line = selection_line(p);
  const double gamma0 = run.gamma0 ? *run.gamma0 : reference_rate(p, run.nbar1);
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");

  const JointModeState s0 = coherent_joint_state(run.nbar1, run.nbar2, run.nmax1.value_or(truncation_bound(run.nbar1)),
                                                 run.nmax2.value_or(truncation_bound(run.nbar2)));
  const double var0 = offset_variance(s0, line);
  if (var0 == 0.0) throw ZeroVariance("initial state has zero variance of n2 - (alpha*n1 + mu)");

  // One rate evaluation per cell, reused for every sample time.
  std::vector<double> rates(s0.amplitudes().size());
  const std::size_t nmax2 = s0.nmax2();
  parallel_for(s0.nmax1() + 1, [&](std::size_t n1) {
    for (std::size_t n2 = 0; n2 <= nmax2; ++n2) {
      rates[n1 * (nmax2 + 1) + n2] = transition_rate(p, static_cast<double>(n1), static_cast<double>(n2), 0.0);
    }
  });

  std::vector<CoherenceSample> out;
  out.push_back({0.0, 0.0, ground_population(s0)});
  JointModeState s = s0;
  for (double g0t : run.gamma0_times) {
    if (g0t < 0.0) throw std::invalid_argument("sample times must be non-negative");
    const double t = g0t / gamma0;
    auto src = s0.amplitudes();
    auto dst = s.amplitudes();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] * std::exp(-rates[i] * t);
    s.set_time(t);
    out.push_back({g0t, 10.0 * std::log10(offset_variance(s, line) / var0), ground_population(s)});
  }
  return out;
}

}  // namespace iselect
