#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace iselect {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// n points spaced logarithmically over [lo, hi], both ends included.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// n points spaced linearly over [lo, hi], both ends included.
std::vector<double> lin_spaced(double lo, double hi, std::size_t n);

/// Composite trapezoid rule on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace iselect
