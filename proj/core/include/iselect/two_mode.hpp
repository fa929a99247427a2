#pragma once

// Two field modes entangled with the atomic ground state through the
// interference-selective two-photon decay |g> -> |s>.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "iselect/diamond.hpp"

namespace iselect {

/// Ground-state projection sum a(n1,n2)|g;n1,n2> on the truncated grid
/// 0..nmax1 x 0..nmax2. The |s> part is lost and never tracked.
class JointModeState {
 public:
  JointModeState(std::size_t nmax1, std::size_t nmax2, double time = 0.0);

  std::size_t nmax1() const { return nmax1_; }
  std::size_t nmax2() const { return nmax2_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::complex<double>& at(std::size_t n1, std::size_t n2) { return amplitudes_[n1 * (nmax2_ + 1) + n2]; }
  const std::complex<double>& at(std::size_t n1, std::size_t n2) const {
    return amplitudes_[n1 * (nmax2_ + 1) + n2];
  }

  /// Row-major view (n1 outer, n2 inner).
  std::span<const std::complex<double>> amplitudes() const { return amplitudes_; }
  std::span<std::complex<double>> amplitudes() { return amplitudes_; }

 private:
  std::size_t nmax1_;
  std::size_t nmax2_;
  double time_;
  std::vector<std::complex<double>> amplitudes_;
};

/// Photon-number relation n2 = alpha*n1 + mu on which the decay vanishes.
struct SelectionLine {
  double alpha = 1.0;
  double mu = 0.0;

  double offset(double n1, double n2) const { return n2 - (alpha * n1 + mu); }
};

/// ceil(nbar + 10*sqrt(nbar) + 10).
std::size_t truncation_bound(double nbar);

/// Poisson probability mass strictly above nmax.
double poisson_tail_mass(double nbar, std::size_t nmax);

/// Product of two real, non-negative coherent-state amplitude distributions.
/// Throws TruncationTooTight if either Poisson tail beyond nmax_i is >= 1e-3.
JointModeState coherent_joint_state(double nbar1, double nbar2, std::size_t nmax1, std::size_t nmax2);
JointModeState coherent_joint_state(double nbar1, double nbar2);

/// Dark line of the light-shifted detunings (Doppler neglected). Throws
/// DegenerateSelection when A1*b22 + A2*b12 == 0.
SelectionLine selection_line(const DiamondParams& p);

/// Multiplies every amplitude by exp(-W(n1,n2)*dt) at v = 0.
JointModeState evolve(const JointModeState& s, const DiamondParams& p, double dt);

/// Sum of |a|^2, the probability of finding the atom in |g>.
double ground_population(const JointModeState& s);

/// Variance of n2 - (alpha*n1 + mu) under the normalized |a|^2 distribution.
double offset_variance(const JointModeState& s, const SelectionLine& line);

/// 10*log10(Var_s / Var_s0) in dB. Throws ZeroVariance if Var_s0 == 0.
double degree_of_coherence(const JointModeState& s, const SelectionLine& line, const JointModeState& s0);

/// Rate of the state one photon above the selection line at the mean of mode
/// 1, W(nbar1, alpha*nbar1 + mu + 1). Used as the time unit Gamma0.
double reference_rate(const DiamondParams& p, double nbar1);

struct CoherenceSample {
  double gamma0_t = 0.0;
  double r_db = 0.0;
  double ground_population = 1.0;
};

struct CoherenceRun {
  double nbar1 = 100.0;
  double nbar2 = 100.0;
  std::optional<std::size_t> nmax1;
  std::optional<std::size_t> nmax2;
  /// Overrides reference_rate() as the time unit when set.
  std::optional<double> gamma0;
  /// Sample times in units of 1/Gamma0; a t = 0 sample is always emitted first.
  std::vector<double> gamma0_times;
};

/// R(t) and ground population for a run starting from two coherent states.
std::vector<CoherenceSample> coherence_series(const DiamondParams& p, const CoherenceRun& run);

}  // namespace iselect
