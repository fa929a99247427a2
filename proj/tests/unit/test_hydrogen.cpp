#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "iselect/errors.hpp"
#include "iselect/hydrogen.hpp"
#include "iselect/numeric.hpp"

namespace iselect {
namespace {

// Hydrogen radial functions in atomic units.
double radial(int n, int l, double r) {
  if (r > 600.0) return 0.0;
  const double rho = 2.0 * r / n;
  const double norm = std::sqrt(std::pow(2.0 / n, 3) * std::tgamma(n - l) / (2.0 * n * std::tgamma(n + l + 1)));
  return norm * std::exp(-rho / 2.0) * std::pow(rho, l) * std::assoc_laguerre(n - l - 1, 2 * l + 1, rho);
}

double radial_integral_squared(int n) {
  boost::math::quadrature::exp_sinh<double> integrator;
  const double d = integrator.integrate([n](double r) { return radial(1, 0, r) * radial(n, 1, r) * r * r * r; },
                                        1e-15);
  return d * d;
}

HydrogenRamanParams with_nmax(int n_max) {
  HydrogenRamanParams p;
  p.n_max = n_max;
  return p;
}

TEST(DipoleWeight, MatchesRadialIntegration) {
  for (int n = 2; n <= 8; ++n) {
    const double oracle = radial_integral_squared(n);
    EXPECT_NEAR(dipole_weight(n) / oracle, 1.0, 1e-8) << n;
  }
}

TEST(DipoleWeight, ClosedFormValues) {
  EXPECT_NEAR(dipole_weight(2), std::pow(2.0, 15) / std::pow(3.0, 9), 1e-14);
  EXPECT_NEAR(dipole_weight(3), std::pow(2.0, 9) * std::pow(3.0, 7) / std::pow(4.0, 11), 1e-14);
}

TEST(DipoleWeight, OscillatorStrengthOfLymanAlpha) {
  EXPECT_NEAR(2.0 / 3.0 * (0.5 - 0.125) * dipole_weight(2), 0.4162, 1e-4);
}

TEST(DipoleWeight, PositiveDecreasingWithCubicTail) {
  for (int n = 3; n <= 500; ++n) {
    EXPECT_GT(dipole_weight(n), 0.0);
    EXPECT_LT(dipole_weight(n), dipole_weight(n - 1));
  }
  const double asymptote = std::pow(2.0, 8) * std::exp(-4.0);
  EXPECT_NEAR(dipole_weight(200) * std::pow(200.0, 3) / asymptote, 1.0, 1e-3);
}

TEST(RamanAmplitude, BelowFirstPoleIsPositive) {
  EXPECT_GT(raman_amplitude(1.5, with_nmax(20)), 0.0);
}

TEST(RamanAmplitude, GuardsAndDomain) {
  const HydrogenRamanParams p;
  EXPECT_THROW(raman_amplitude(3.0 + 1e-7, p), AtResonance);
  EXPECT_THROW(raman_amplitude(1.0, p), std::invalid_argument);
  EXPECT_NO_THROW(raman_amplitude(3.0 + 1e-5, p));
  EXPECT_NO_THROW(raman_amplitude(150.0, p));
}

TEST(RamanAmplitude, SingleTermHasNoZero) {
  const HydrogenRamanParams p = with_nmax(2);
  for (double q : lin_spaced(1.01, 1.99, 50)) EXPECT_GT(raman_amplitude(q, p), 0.0);
  for (double q : lin_spaced(2.01, 40.0, 200)) EXPECT_LT(raman_amplitude(q, p), 0.0);
}

TEST(RamanAmplitude, DivergesAtPoles) {
  const HydrogenRamanParams p;
  for (int n = 2; n <= 10; ++n) {
    for (double d : {1e-3, 1e-4}) {
      const double bound = dipole_weight(n) * n * n / (3.0 * d);
      EXPECT_GT(std::abs(raman_amplitude(n - d, p)), bound);
      EXPECT_GT(std::abs(raman_amplitude(n + d, p)), bound);
    }
  }
}

TEST(ScanSpectrum, RatesAreSquaredAmplitudes) {
  const HydrogenRamanParams p;
  const RamanSpectrum s = scan_spectrum(1.5, 6.5, 1001, p);
  for (std::size_t i = 0; i < s.q_values.size(); ++i) {
    if (s.resonance[i]) {
      EXPECT_TRUE(std::isnan(s.amplitudes[i]));
      continue;
    }
    EXPECT_GE(s.rates[i], 0.0);
    EXPECT_EQ(s.rates[i], s.amplitudes[i] * s.amplitudes[i]);
  }
  EXPECT_TRUE(s.resonance[100]);
}

TEST(ScanSpectrum, OneZeroPerInterval) {
  const HydrogenRamanParams p;
  for (int n = 2; n <= 10; ++n) {
    const RamanSpectrum s = scan_spectrum(n + 1e-5, n + 1 - 1e-5, 20001, p);
    int changes = 0;
    for (std::size_t i = 1; i < s.amplitudes.size(); ++i) {
      if ((s.amplitudes[i - 1] < 0.0) != (s.amplitudes[i] < 0.0)) ++changes;
    }
    EXPECT_EQ(changes, 1) << n;
  }
}

TEST(FindAntiresonance, InsideBracketWithVanishingAmplitude) {
  for (int n_low : {2, 3}) {
    const HydrogenRamanParams p = with_nmax(30);
    const double q = find_antiresonance(n_low, p);
    EXPECT_GT(q, n_low);
    EXPECT_LT(q, n_low + 1);
    const double scale = std::max(std::abs(raman_amplitude(n_low + p.pole_guard, p)),
                                  std::abs(raman_amplitude(n_low + 1 - p.pole_guard, p)));
    EXPECT_LT(std::abs(raman_amplitude(q, p)), 1e-10 * scale);
    EXPECT_LT(raman_rate(q, p), 1e-20 * scale * scale);
  }
}

TEST(FindAntiresonance, NeedsPoleAbove) {
  EXPECT_THROW(find_antiresonance(2, with_nmax(2)), NoSignChange);
  EXPECT_THROW(find_antiresonance(1, with_nmax(20)), std::invalid_argument);
}

TEST(FindAntiresonance, ConvergesAsTruncationGrows) {
  const double q50 = find_antiresonance(2, with_nmax(50));
  const double q100 = find_antiresonance(2, with_nmax(100));
  const double q200 = find_antiresonance(2, with_nmax(200));
  EXPECT_GT(q50, q100);
  EXPECT_GT(q100, q200);
  EXPECT_LT(q100 - q200, q50 - q100);
}

class DopplerRate : public ::testing::Test {
 protected:
  HydrogenRamanParams p;
  double q_star = find_antiresonance(2, p);
  double omega_scale = kRydbergAngularFrequency;
  double k_eff = 2.0 * omega_scale / (q_star * q_star) / kSpeedOfLight;
  double rate(double v) const { return excitation_rate_near_antiresonance(q_star, v, k_eff, omega_scale, p); }
};

TEST_F(DopplerRate, DarkAtRest) { EXPECT_LT(rate(0.0), 1e-6 * rate(1.0)); }

TEST_F(DopplerRate, EvenToLeadingOrder) {
  for (double v : {0.1, 0.5, 2.0}) EXPECT_LT(std::abs(rate(v) - rate(-v)) / rate(v), 0.1) << v;
}

TEST_F(DopplerRate, QuadraticZero) {
  for (double v : {0.05, 0.2}) EXPECT_NEAR(rate(2.0 * v) / rate(v), 4.0, 0.2) << v;
}

TEST(DopplerShiftedQ, BlueShiftLowersQ) {
  const double q = 2.7;
  EXPECT_DOUBLE_EQ(doppler_shifted_q(q, 0.0, 1e7, kRydbergAngularFrequency), q);
  EXPECT_LT(doppler_shifted_q(q, 1.0, 1e7, kRydbergAngularFrequency), q);
}

}  // namespace
}  // namespace iselect
