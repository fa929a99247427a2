#pragma once

// Velocity selection by Doppler-tuned two-photon interference, and its
// competition with one-photon Doppler cooling/heating.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iselect/diamond.hpp"

namespace iselect {

/// Weights |f(v)|^2 sampled on a strictly increasing velocity grid.
struct VelocityEnsemble {
  std::vector<double> velocities;
  std::vector<double> weights;
  double time = 0.0;

  /// Trapezoidal integral of the weights.
  double total_weight() const;
  /// Throws std::invalid_argument on a non-increasing grid, size mismatch or
  /// negative weight.
  void validate() const;
};

/// Gaussian |f(v)|^2 of the given mean and standard deviation on `points`
/// equally spaced velocities in [v_min, v_max], normalized to unit integral.
VelocityEnsemble gaussian_ensemble(double v_min, double v_max, std::size_t points, double mean, double sigma);

/// Velocity at which the two paths cancel, (A1*d2 + A2*d1)/((A2 - A1)*k).
/// The light shifts at photon numbers (n1, n2) are folded into d1, d2; the
/// default n1 = n2 = 0 drops them. Throws NoSelection if A1 == A2 or k == 0.
double selected_velocity(const DiamondParams& p, double n1 = 0.0, double n2 = 0.0);

/// Multiplies each weight by exp(-2*W(v)*dt) (amplitudes decay as exp(-W t)).
VelocityEnsemble filter_evolve(const VelocityEnsemble& e, const DiamondParams& p, double n1, double n2, double dt);

/// Langevin walkers in a Doppler molasses with an extra quadratic loss rate
/// g * friction * ((v - v_selected)/v_doppler)^2.
struct CompetitionParams {
  double g = 0.0;
  double v_selected = 0.0;
  double friction = 1.0;      ///< 1/time
  double v_doppler = 1.0;     ///< Doppler equilibrium rms velocity
  double dt = 1e-3;
  double t_total = 0.05;
  std::size_t n_traj = 10000;
  std::uint64_t seed = 0;
  /// Mean of the initial Gaussian (its width is always v_doppler).
  double v_initial_offset = 0.0;
  std::size_t histogram_bins = 101;

  /// friction * v_doppler^2, so that the loss-free equilibrium has <v^2> = v_D^2.
  double diffusion() const { return friction * v_doppler * v_doppler; }
  /// Largest |v - v_selected| the stability check is applied to.
  double v_range() const;
  void validate() const;
};

struct CompetitionResult {
  double temperature_ratio = 1.0;   ///< survivor variance / v_D^2
  double temperature_stderr = 0.0;
  double mean_velocity = 0.0;       ///< survivor mean
  double surviving_fraction = 1.0;
  std::size_t survivors = 0;
  /// Survivor velocity density; integrates to surviving_fraction.
  VelocityEnsemble histogram;
};

/// Euler-Maruyama integration of n_traj independent walkers. The result is
/// bit-identical for a given CompetitionParams regardless of thread count.
/// Throws AllAtomsLost when no walker survives.
CompetitionResult competition_mc(const CompetitionParams& c, std::size_t workers = 0);

}  // namespace iselect
