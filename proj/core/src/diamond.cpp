#include "iselect/diamond.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

#include "iselect/errors.hpp"

namespace iselect {

void DiamondParams::validate() const {
  if (!(detuning_floor > 0.0)) {
    throw std::invalid_argument("detuning_floor must be positive");
  }
  if (a1 == 0.0 && a2 == 0.0) {
    throw std::invalid_argument("at least one of a1, a2 must be nonzero");
  }
}

double default_detuning_floor(double delta1, double delta2) {
  return 1e-9 * std::max({std::abs(delta1), std::abs(delta2), 1.0});
}

double effective_detuning(const DiamondParams& p, Path path, double n1, double n2, double v) {
  if (n1 < 0.0 || n2 < 0.0) {
    throw std::invalid_argument("photon numbers must be non-negative");
  }
  if (path == Path::first) {
    return p.delta1 + p.beta11() * n1 + p.beta12() * n2 + doppler_sign(path) * p.k * v;
  }
  return p.delta2 + p.beta22() * n2 + p.beta21() * n1 + doppler_sign(path) * p.k * v;
}

double transition_rate(const DiamondParams& p, double n1, double n2, double v) {
  const double d1 = effective_detuning(p, Path::first, n1, n2, v);
  const double d2 = effective_detuning(p, Path::second, n1, n2, v);
  if (std::abs(d1) < p.detuning_floor || std::abs(d2) < p.detuning_floor) {
    throw ResonantDetuning(fmt::format(
        "effective detuning below floor {:g} (d1'={:g}, d2'={:g}) at n1={:g}, n2={:g}, v={:g}",
        p.detuning_floor, d1, d2, n1, n2, v));
  }
  const double amplitude = p.a1 / d1 + p.a2 / d2;
  return n1 * n2 * amplitude * amplitude;
}

double interference_residual(const DiamondParams& p, double n1, double n2, double v) {
  const double d1 = effective_detuning(p, Path::first, n1, n2, v);
  const double d2 = effective_detuning(p, Path::second, n1, n2, v);
  return p.a1 * d2 + p.a2 * d1;
}

DiamondParams swap_paths(const DiamondParams& p) {
  DiamondParams s = p;
  s.a1 = p.a2;
  s.a2 = p.a1;
  s.delta1 = p.delta2;
  s.delta2 = p.delta1;
  s.beta = {p.beta22(), p.beta21(), p.beta12(), p.beta11()};
  return s;
}

}  // namespace iselect
