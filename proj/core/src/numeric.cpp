#include "iselect/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace iselect {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs two equally sized samples of length >= 2");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = compensated_sum(x) / n;
  const double my = compensated_sum(y) / n;
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (!(sxx.value() > 0.0)) {
    throw std::invalid_argument("fit_line needs at least two distinct abscissae");
  }
  LineFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy.value() - fit.slope * sxy.value());
  fit.r_squared = syy.value() > 0.0 ? 1.0 - ss_res / syy.value() : 1.0;
  if (x.size() > 2) {
    fit.slope_stderr = std::sqrt(ss_res / (n - 2.0) / sxx.value());
  }
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_spaced needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_spaced(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2) {
    throw std::invalid_argument("lin_spaced needs lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  CompensatedSum acc;
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc.add(0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]));
  }
  return acc.value();
}

}  // namespace iselect
