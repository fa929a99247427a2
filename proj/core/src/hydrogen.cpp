#include "iselect/hydrogen.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

#include "iselect/errors.hpp"
#include "iselect/numeric.hpp"

namespace iselect {
namespace {

// Unguarded sum, smallest terms first.
double amplitude_sum(double q, int n_max) {
  const double inv_q2 = 1.0 / (q * q);
  CompensatedSum s;
  for (int n = n_max; n >= 2; --n) {
    const double nn = static_cast<double>(n);
    s.add(dipole_weight(n) / (inv_q2 - 1.0 / (nn * nn)));
  }
  return s.value();
}

int guarded_pole(double q, const HydrogenRamanParams& p) {
  const double nearest = std::round(q);
  if (nearest >= 2.0 && nearest <= static_cast<double>(p.n_max) && std::abs(q - nearest) < p.pole_guard) {
    return static_cast<int>(nearest);
  }
  return 0;
}

}  // namespace

void HydrogenRamanParams::validate() const {
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  if (!(pole_guard > 0.0)) throw std::invalid_argument("pole_guard must be positive");
}

double dipole_weight(int n) {
  if (n < 2) throw std::invalid_argument("dipole_weight needs n >= 2");
  const double x = static_cast<double>(n);
  // (n-1)^(2n-5)/(n+1)^(2n+5) = n^-10 (1-1/n)^(2n-5) (1+1/n)^-(2n+5)
  const double log_weight = 8.0 * std::log(2.0) - 3.0 * std::log(x) + (2.0 * x - 5.0) * std::log1p(-1.0 / x) -
                            (2.0 * x + 5.0) * std::log1p(1.0 / x);
  return std::exp(log_weight);
}

double raman_amplitude(double q, const HydrogenRamanParams& p) {
  p.validate();
  if (!(q > 1.0)) throw std::invalid_argument(fmt::format("q must exceed 1 (got {:g})", q));
  if (const int n = guarded_pole(q, p)) {
    throw AtResonance(fmt::format("q = {:.17g} lies within {:g} of the 1s-{}p resonance", q, p.pole_guard, n));
  }
  return amplitude_sum(q, p.n_max);
}

double raman_rate(double q, const HydrogenRamanParams& p) {
  const double s = raman_amplitude(q, p);
  return p.q0 * s * s;
}

RamanSpectrum scan_spectrum(double q_min, double q_max, std::size_t steps, const HydrogenRamanParams& p) {
  p.validate();
  if (!(q_min > 1.0)) throw std::invalid_argument("q_min must exceed 1");
  RamanSpectrum out;
  out.q_values = lin_spaced(q_min, q_max, steps);
  out.amplitudes.resize(steps);
  out.rates.resize(steps);
  out.resonance.resize(steps);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < steps; ++i) {
    const double q = out.q_values[i];
    if (guarded_pole(q, p) != 0) {
      out.amplitudes[i] = nan;
      out.rates[i] = nan;
      out.resonance[i] = true;
      continue;
    }
    const double s = amplitude_sum(q, p.n_max);
    out.amplitudes[i] = s;
    out.rates[i] = p.q0 * s * s;
    out.resonance[i] = false;
  }
  return out;
}

double find_antiresonance(int n_low, const HydrogenRamanParams& p) {
  p.validate();
  if (n_low < 2) throw std::invalid_argument("n_low must be >= 2");
  if (n_low >= p.n_max) {
    throw NoSignChange(fmt::format("no pole above n_low={} with n_max={}; S keeps its sign on ({}, {})", n_low,
                                   p.n_max, n_low, n_low + 1));
  }
  double lo = static_cast<double>(n_low) + p.pole_guard;
  double hi = static_cast<double>(n_low + 1) - p.pole_guard;
  double s_lo = amplitude_sum(lo, p.n_max);
  double s_hi = amplitude_sum(hi, p.n_max);
  if (!(s_lo < 0.0 && s_hi > 0.0)) {
    throw NoSignChange(fmt::format("S({:.17g}) = {:g} and S({:.17g}) = {:g} do not bracket a zero", lo, s_lo, hi, s_hi));
  }
  // S is strictly increasing between adjacent poles.
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double s_mid = amplitude_sum(mid, p.n_max);
    if (s_mid == 0.0) return mid;
    if (s_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double doppler_shifted_q(double q_star, double v, double k_eff, double omega_scale) {
  if (!(q_star > 1.0) || !(omega_scale > 0.0)) throw std::invalid_argument("need q_star > 1 and omega_scale > 0");
  const double omega = omega_scale / (q_star * q_star) + k_eff * v;
  if (!(omega > 0.0)) throw std::invalid_argument("Doppler shift drives the laser frequency negative");
  return std::sqrt(omega_scale / omega);
}

double excitation_rate_near_antiresonance(double q_star, double v, double k_eff, double omega_scale,
                                          const HydrogenRamanParams& p) {
  return raman_rate(doppler_shifted_q(q_star, v, k_eff, omega_scale), p);
}

}  // namespace iselect
