#pragma once

#include <span>
#include <vector>

namespace masslab {

/// Interpolating cubic spline on strictly increasing knots.
///
/// The left end is clamped to a prescribed slope (0 for even radial profiles), the
/// right end is natural. Evaluation outside [x_0, x_n] returns `outside`.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y, double left_slope = 0.0,
              double outside = 0.0);

  double operator()(double x) const;
  double derivative(double x) const;

  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::size_t locate(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
  double outside_;
  bool uniform_;
  double h_;
};

}  // namespace masslab
