#pragma once

// Four-level "diamond" scheme: |g> couples to |s> through two two-photon
// paths via |e1> and |e2>. Units: hbar = 1, every energy is an angular
// frequency.

#include <array>

namespace iselect {

enum class Path { first = 1, second = 2 };

struct DiamondParams {
  double a1 = 1.0;  ///< path amplitude through |e1>
  double a2 = 1.0;  ///< path amplitude through |e2>
  double delta1 = 1.0;
  double delta2 = 1.0;
  /// Light-shift coefficients, row-major: beta[0]=b11, [1]=b12, [2]=b21, [3]=b22.
  /// The effective detuning of path i gains b_ii*n_i + b_ij*n_j.
  std::array<double, 4> beta{0.0, 0.0, 0.0, 0.0};
  /// Wavenumber of the Doppler term; path 1 sees -k*v and path 2 sees +k*v.
  double k = 0.0;
  /// |effective detuning| below this is treated as an intermediate resonance.
  double detuning_floor = 1e-9;

  double beta11() const { return beta[0]; }
  double beta12() const { return beta[1]; }
  double beta21() const { return beta[2]; }
  double beta22() const { return beta[3]; }

  /// Throws std::invalid_argument if detuning_floor <= 0 or a1 == a2 == 0.
  void validate() const;
};

/// 1e-9 * max(|delta1|, |delta2|, 1).
double default_detuning_floor(double delta1, double delta2);

/// Doppler sign of each path: -1 for path 1, +1 for path 2.
constexpr double doppler_sign(Path path) { return path == Path::first ? -1.0 : 1.0; }

/// delta_i + beta_ii*n_i + beta_ij*n_j + s_i*k*v. Photon numbers are real so
/// the formula can also be evaluated at mean photon numbers.
double effective_detuning(const DiamondParams& p, Path path, double n1, double n2, double v);

/// Second-order two-photon rate n1*n2*|A1/d1' + A2/d2'|^2.
/// Throws ResonantDetuning if either |d_i'| < detuning_floor.
double transition_rate(const DiamondParams& p, double n1, double n2, double v);

/// A1*d2' + A2*d1'; vanishes exactly on the destructive-interference locus.
double interference_residual(const DiamondParams& p, double n1, double n2, double v);

/// Same params with the two paths relabelled (amplitudes, detunings, beta
/// rows/columns). Evaluating the result at (n2, n1, -v) reproduces the rate of
/// the original at (n1, n2, v).
DiamondParams swap_paths(const DiamondParams& p);

}  // namespace iselect
