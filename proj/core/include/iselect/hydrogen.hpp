#pragma once

// Stimulated Raman coupling between the two hydrogen ground sublevels,
// summed over the intermediate np levels. Everything is written in terms of
// q = sqrt(Ry / (hbar*omega1)), so the level n is resonant at q = n.

#include <cstddef>
#include <vector>

namespace iselect {

/// Rydberg energy in joules, as used for the q <-> omega conversion.
inline constexpr double kRydbergJoule = 2.2e-18;
inline constexpr double kHbar = 1.054571817e-34;
/// Ry / hbar in rad/s.
inline constexpr double kRydbergAngularFrequency = kRydbergJoule / kHbar;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kHydrogenMass = 1.6735575e-27;

struct HydrogenRamanParams {
  int n_max = 100;          ///< highest intermediate level kept in the sum
  double q0 = 1.0;          ///< rate prefactor Q0
  double pole_guard = 1e-6; ///< |q - n| below this counts as on resonance

  void validate() const;
};

struct RamanSpectrum {
  std::vector<double> q_values;
  std::vector<double> amplitudes;  ///< S(q); NaN inside a pole guard
  std::vector<double> rates;       ///< Q0 * S(q)^2; NaN inside a pole guard
  std::vector<bool> resonance;     ///< true where q fell inside a pole guard
};

/// |<1s|r|np>|^2 in atomic units, 2^8 n^7 (n-1)^(2n-5) / (n+1)^(2n+5).
double dipole_weight(int n);

/// S(q) = sum_{n=2}^{n_max} A_n / (1/q^2 - 1/n^2).
/// Throws std::invalid_argument for q <= 1 and AtResonance inside a pole guard.
double raman_amplitude(double q, const HydrogenRamanParams& p);

/// Q = Q0 * S(q)^2.
double raman_rate(double q, const HydrogenRamanParams& p);

/// `steps` equally spaced q values over [q_min, q_max]. Guarded points are
/// flagged instead of throwing.
RamanSpectrum scan_spectrum(double q_min, double q_max, std::size_t steps, const HydrogenRamanParams& p);

/// Zero of S between the poles at n_low and n_low + 1, by bisection to 1e-12
/// in q. Throws NoSignChange if the interval is not bracketed by two poles of
/// the truncated sum (n_low >= n_max).
double find_antiresonance(int n_low, const HydrogenRamanParams& p);

/// q seen by an atom moving at v when the laboratory frequency is tuned to
/// q_star: omega1 = omega_scale/q_star^2 + k_eff*v and q = sqrt(omega_scale/omega1).
double doppler_shifted_q(double q_star, double v, double k_eff, double omega_scale);

/// Q(q(v)); zero at v = 0 when q_star is an antiresonance and quadratic in v
/// nearby. omega_scale is Ry/hbar in rad/s.
double excitation_rate_near_antiresonance(double q_star, double v, double k_eff, double omega_scale,
                                          const HydrogenRamanParams& p);

}  // namespace iselect
