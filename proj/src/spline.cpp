#include "masslab/spline.hpp"

#include <algorithm>
#include <cmath>

#include "masslab/error.hpp"

namespace masslab {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y, double left_slope,
                         double outside)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0), outside_(outside) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) throw ShapeError("spline needs at least 3 matching knots");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw ConfigError("spline knots must be strictly increasing");

  h_ = (x_.back() - x_.front()) / static_cast<double>(n - 1);
  uniform_ = true;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((x_[i] - x_[i - 1]) - h_) > 1e-12 * h_) uniform_ = false;

  // Tridiagonal system for the second derivatives (Thomas algorithm).
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  {
    const double h0 = x_[1] - x_[0];
    b[0] = h0 / 3.0;
    c[0] = h0 / 6.0;
    d[0] = (y_[1] - y_[0]) / h0 - left_slope;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  b[n - 1] = 1.0;  // natural: m_{n-1} = 0
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  m_[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

std::size_t CubicSpline::locate(double x) const {
  const std::size_t n = x_.size();
  std::size_t k;
  if (uniform_) {
    k = static_cast<std::size_t>(std::max(0.0, std::floor((x - x_.front()) / h_)));
  } else {
    k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    k = k == 0 ? 0 : k - 1;
  }
  return std::min(k, n - 2);
}

double CubicSpline::operator()(double x) const {
  if (x < x_.front() || x > x_.back()) return outside_;
  const std::size_t k = locate(x);
  const double hk = x_[k + 1] - x_[k];
  const double A = (x_[k + 1] - x) / hk;
  const double B = 1.0 - A;
  return A * y_[k] + B * y_[k + 1] +
         ((A * A * A - A) * m_[k] + (B * B * B - B) * m_[k + 1]) * hk * hk / 6.0;
}

double CubicSpline::derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t k = locate(x);
  const double hk = x_[k + 1] - x_[k];
  const double A = (x_[k + 1] - x) / hk;
  const double B = 1.0 - A;
  return (y_[k + 1] - y_[k]) / hk +
         (-(3.0 * A * A - 1.0) * m_[k] + (3.0 * B * B - 1.0) * m_[k + 1]) * hk / 6.0;
}

}  // namespace masslab
