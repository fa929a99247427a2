#include "iselect/velocity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/core.h>

#include "iselect/errors.hpp"
#include "iselect/numeric.hpp"
#include "iselect/parallel.hpp"

namespace iselect {

double VelocityEnsemble::total_weight() const { return trapezoid(velocities, weights); }

void VelocityEnsemble::validate() const {
  if (velocities.size() != weights.size()) throw std::invalid_argument("velocity/weight size mismatch");
  for (std::size_t i = 1; i < velocities.size(); ++i) {
    if (!(velocities[i] > velocities[i - 1])) throw std::invalid_argument("velocity grid must be strictly increasing");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
  }
}

VelocityEnsemble gaussian_ensemble(double v_min, double v_max, std::size_t points, double mean, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  VelocityEnsemble e;
  e.velocities = lin_spaced(v_min, v_max, points);
  e.weights.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = (e.velocities[i] - mean) / sigma;
    e.weights[i] = std::exp(-0.5 * x * x);
  }
  const double norm = e.total_weight();
  if (!(norm > 0.0)) throw std::invalid_argument("Gaussian has no weight on the grid");
  for (double& w : e.weights) w /= norm;
  return e;
}

double selected_velocity(const DiamondParams& p, double n1, double n2) {
  if (p.a1 == p.a2) throw NoSelection("A1 == A2: the two paths cannot cancel at any velocity");
  if (p.k == 0.0) throw NoSelection("k == 0: the residual does not depend on velocity");
  const double d1 = effective_detuning(p, Path::first, n1, n2, 0.0);
  const double d2 = effective_detuning(p, Path::second, n1, n2, 0.0);
  return (p.a1 * d2 + p.a2 * d1) / ((p.a2 - p.a1) * p.k);
}

VelocityEnsemble filter_evolve(const VelocityEnsemble& e, const DiamondParams& p, double n1, double n2, double dt) {
  if (dt < 0.0) throw std::invalid_argument("dt must be non-negative");
  VelocityEnsemble out = e;
  out.time = e.time + dt;
  if (dt == 0.0) return out;
  for (std::size_t i = 0; i < out.weights.size(); ++i) {
    out.weights[i] *= std::exp(-2.0 * transition_rate(p, n1, n2, e.velocities[i]) * dt);
  }
  return out;
}

double CompetitionParams::v_range() const { return std::abs(v_initial_offset - v_selected) + 5.0 * v_doppler; }

void CompetitionParams::validate() const {
  if (!(friction > 0.0)) throw std::invalid_argument("friction must be positive");
  if (!(v_doppler > 0.0)) throw std::invalid_argument("v_doppler must be positive");
  if (!(dt > 0.0) || !(t_total > 0.0)) throw std::invalid_argument("dt and t_total must be positive");
  if (g < 0.0) throw std::invalid_argument("g must be non-negative");
  if (!(dt * friction < 0.1)) throw std::invalid_argument(fmt::format("dt*friction = {:g} must be < 0.1", dt * friction));
  const double x = v_range() / v_doppler;
  if (!(dt * g * friction * x * x < 0.5)) {
    throw std::invalid_argument(
        fmt::format("dt*g*friction*(v_range/v_doppler)^2 = {:g} must be < 0.5", dt * g * friction * x * x));
  }
  if (n_traj < 1000) throw std::invalid_argument("n_traj must be >= 1000");
  if (histogram_bins < 2) throw std::invalid_argument("histogram_bins must be >= 2");
}

CompetitionResult competition_mc(const CompetitionParams& c, std::size_t workers) {
  c.validate();
  const auto steps = static_cast<std::size_t>(std::ceil(c.t_total / c.dt - 1e-9));
  const double kick = std::sqrt(2.0 * c.diffusion() * c.dt);
  const double loss_coeff = c.g * c.friction / (c.v_doppler * c.v_doppler);

  std::vector<double> final_v(c.n_traj);
  std::vector<unsigned char> alive(c.n_traj);
  parallel_for(c.n_traj, [&](std::size_t i) {
    RandomStream rng = derive_stream(c.seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double v = c.v_initial_offset + c.v_doppler * normal(rng);
    bool survived = true;
    for (std::size_t s = 0; s < steps; ++s) {
      if (loss_coeff > 0.0) {
        const double dv = v - c.v_selected;
        if (uniform(rng) >= std::exp(-loss_coeff * dv * dv * c.dt)) {
          survived = false;
          break;
        }
      }
      v += -c.friction * v * c.dt + kick * normal(rng);
    }
    final_v[i] = v;
    alive[i] = survived ? 1 : 0;
  }, workers);

  CompensatedSum sum_v;
  std::size_t count = 0;
  for (std::size_t i = 0; i < c.n_traj; ++i) {
    if (alive[i]) {
      sum_v.add(final_v[i]);
      ++count;
    }
  }
  if (count == 0) {
    throw AllAtomsLost(fmt::format("no survivors out of {} walkers (g={:g}, t_total={:g})", c.n_traj, c.g, c.t_total));
  }
  const double n = static_cast<double>(count);
  const double mean = sum_v.value() / n;
  CompensatedSum m2, m4;
  for (std::size_t i = 0; i < c.n_traj; ++i) {
    if (!alive[i]) continue;
    const double d = final_v[i] - mean;
    m2.add(d * d);
    m4.add(d * d * d * d);
  }
  const double var = m2.value() / n;
  const double vd2 = c.v_doppler * c.v_doppler;

  CompetitionResult r;
  r.survivors = count;
  r.surviving_fraction = n / static_cast<double>(c.n_traj);
  r.mean_velocity = mean;
  r.temperature_ratio = var / vd2;
  r.temperature_stderr = std::sqrt(std::max(0.0, m4.value() / n - var * var) / n) / vd2;

  const double lo = c.v_selected - 6.0 * c.v_doppler;
  const double hi = c.v_selected + 6.0 * c.v_doppler;
  const double width = (hi - lo) / static_cast<double>(c.histogram_bins);
  r.histogram.time = static_cast<double>(steps) * c.dt;
  r.histogram.velocities.resize(c.histogram_bins);
  r.histogram.weights.assign(c.histogram_bins, 0.0);
  for (std::size_t b = 0; b < c.histogram_bins; ++b) {
    r.histogram.velocities[b] = lo + (static_cast<double>(b) + 0.5) * width;
  }
  const double unit = 1.0 / (static_cast<double>(c.n_traj) * width);
  for (std::size_t i = 0; i < c.n_traj; ++i) {
    if (!alive[i] || final_v[i] < lo || final_v[i] >= hi) continue;
    const auto b = static_cast<std::size_t>((final_v[i] - lo) / width);
    r.histogram.weights[std::min(b, c.histogram_bins - 1)] += unit;
  }
  return r;
}

}  // namespace iselect
