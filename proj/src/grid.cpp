#include "masslab/grid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "masslab/error.hpp"
#include "masslab/spline.hpp"

namespace masslab {

namespace {

double surface_factor_for(int dim) {
  switch (dim) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    default:
      return 4.0 * std::numbers::pi;
  }
}

// Gregory end weights (through third differences), listed from r_max inwards.
constexpr double kGregoryEnd[4] = {251.0 / 720.0, 299.0 / 240.0, 211.0 / 240.0, 739.0 / 720.0};

}  // namespace

void BandedSym::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = d0.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = d0[i] * x[i];
    if (i + 1 < n) s += d1[i] * x[i + 1];
    if (i >= 1) s += d1[i - 1] * x[i - 1];
    if (i + 2 < n) s += d2[i] * x[i + 2];
    if (i >= 2) s += d2[i - 2] * x[i - 2];
    y[i] = s;
  }
}

RadialGrid::RadialGrid(int dim, double r_max, std::size_t points)
    : dim_(dim), r_max_(r_max), omega_(surface_factor_for(dim)) {
  if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("grid r_max must be positive");
  if (points < 16) throw ConfigError("grid needs at least 16 points");

  const std::size_t m = points;
  h_ = r_max / static_cast<double>(m - 1);
  nodes_.resize(m);
  for (std::size_t i = 0; i < m; ++i) nodes_[i] = h_ * static_cast<double>(i);
  nodes_[m - 1] = r_max;

  const double h = h_;
  const int p = dim - 1;
  weights_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) weights_[i] = omega_ * h * std::pow(nodes_[i], p);
  if (dim == 1) weights_[0] = 0.5 * omega_ * h;
  for (std::size_t k = 0; k < 4; ++k) weights_[m - 1 - k] *= kGregoryEnd[k];

  if (dim == 2) {
    // Euler-Maclaurin terms at r = 0 for the odd integrand r f(r), f even:
    // + h^2/12 f(0) - h^4/240 f''(0) + h^6/6048 f''''(0), with f'' and f'''' taken
    // from the even extension. A multiple of the fourth difference then moves the
    // origin weight onto the central cell area h^2 omega / 8 (error O(h^6)).
    double e0 = 1.0 / 12.0 + 30.0 / 2880.0 + 6.0 / 6048.0;
    double e1 = -32.0 / 2880.0 - 8.0 / 6048.0;
    double e2 = 2.0 / 2880.0 + 2.0 / 6048.0;
    const double kappa = (1.0 / 8.0 - e0) / 6.0;
    e0 += 6.0 * kappa;
    e1 -= 8.0 * kappa;
    e2 += 2.0 * kappa;
    weights_[0] += omega_ * h * h * e0;
    weights_[1] += omega_ * h * h * e1;
    weights_[2] += omega_ * h * h * e2;
  } else if (dim == 3) {
    // r^2 f(r) is even, so plain trapezoid is already high order; a fourth-difference
    // term gives the origin the central cell volume h^3 omega / 24 (error O(h^7)).
    const double kappa = 1.0 / 144.0;
    weights_[0] += omega_ * h * h * h * 6.0 * kappa;
    weights_[1] -= omega_ * h * h * h * 8.0 * kappa;
    weights_[2] += omega_ * h * h * h * 2.0 * kappa;
  }

  // Kinetic form: (4/3) sum a_{j+1/2} ((u_{j+1}-u_j)/h)^2 - (1/3) sum w_j ((u_{j+1}-u_{j-1})/2h)^2.
  // The two second-order rules have leading errors in ratio 1:4, so the combination
  // is fourth order.
  kinetic_.d0.assign(m, 0.0);
  kinetic_.d1.assign(m - 1, 0.0);
  kinetic_.d2.assign(m - 2, 0.0);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double mid = h * (static_cast<double>(j) + 0.5);
    const double a = omega_ * h * std::pow(mid, p);
    const double alpha = (4.0 / 3.0) * a / (h * h);
    kinetic_.d0[j] += alpha;
    kinetic_.d0[j + 1] += alpha;
    kinetic_.d1[j] -= alpha;
  }
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double beta = -(1.0 / 3.0) * weights_[j] / (4.0 * h * h);
    kinetic_.d0[j - 1] += beta;
    kinetic_.d0[j + 1] += beta;
    kinetic_.d2[j - 1] -= beta;
  }
  {
    // Endpoint term of the wide rule with the odd ghost u_M = 2 u_{M-1} - u_{M-2},
    // so the Dirichlet slope at r_max is not dropped.
    const double beta = -(1.0 / 3.0) * weights_[m - 1] / (h * h);
    kinetic_.d0[m - 2] += beta;
    kinetic_.d0[m - 1] += beta;
    kinetic_.d1[m - 2] -= beta;
  }

  // Near r = 0 the combination above does not reproduce Delta r^2 = 2N against the
  // corrected weights. Three symmetric couplings (units omega h^{N-2}) restore exact
  // consistency on r^2 at every node; row sums stay zero.
  auto couple = [&](std::size_t a, std::size_t c, double x) {
    x *= omega_ * std::pow(h, dim - 2);
    if (c == a + 1) kinetic_.d1[a] += x;
    else kinetic_.d2[a] += x;
    kinetic_.d0[a] -= x;
    kinetic_.d0[c] -= x;
  };
  if (dim == 2) {
    couple(0, 2, -161.0 / 4320.0);
    couple(1, 2, 19.0 / 270.0);
    couple(1, 3, -1.0 / 1080.0);
  } else if (dim == 3) {
    couple(0, 2, -25.0 / 432.0);
    couple(1, 2, 1.0 / 9.0);
    couple(1, 3, -1.0 / 864.0);
  }

  // The Gregory factors leave the last rows inconsistent with the weights, which
  // lets Dirichlet problems grow an O(h) boundary layer. Fit symmetric couplings
  // among the last five nodes (min-norm least squares) so rows m-5..m-2 reproduce
  // Delta (r - r_max)^k for k = 1, 2.
  {
    struct Pair {
      std::size_t a, c;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = m - 5; i + 1 < m; ++i) {
      pairs.push_back({i, i + 1});
      if (i + 2 < m) pairs.push_back({i, i + 2});
    }
    const std::size_t rows0 = m - 5;
    const std::size_t nrows = 4;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * nrows, static_cast<Eigen::Index>(pairs.size()));
    Eigen::VectorXd b(2 * nrows);
    std::vector<double> f(m), kf(m);
    for (int k = 1; k <= 2; ++k) {
      for (std::size_t i = 0; i < m; ++i) f[i] = std::pow(nodes_[i] - r_max, k);
      kinetic_.apply(f, kf);
      for (std::size_t q = 0; q < nrows; ++q) {
        const std::size_t i = rows0 + q;
        const double x = nodes_[i] - r_max;
        double lap = k == 2 ? 2.0 : 0.0;
        lap += (dim - 1) / nodes_[i] * k * std::pow(x, k - 1);
        const double scale = h * h / weights_[i];
        const auto row = static_cast<Eigen::Index>((k - 1) * nrows + q);
        b(row) = -(kf[i] + weights_[i] * lap) * scale;
        for (std::size_t j = 0; j < pairs.size(); ++j) {
          double v = 0.0;
          if (i == pairs[j].a) v += f[pairs[j].c] - f[pairs[j].a];
          if (i == pairs[j].c) v += f[pairs[j].a] - f[pairs[j].c];
          A(row, static_cast<Eigen::Index>(j)) = v * scale;
        }
      }
    }
    const Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(b);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const double v = x(static_cast<Eigen::Index>(j));
      const auto [a, c] = pairs[j];
      if (c == a + 1) kinetic_.d1[a] += v;
      else kinetic_.d2[a] += v;
      kinetic_.d0[a] -= v;
      kinetic_.d0[c] -= v;
    }
  }
}

GridPtr RadialGrid::rescaled(double t) const {
  if (!(t > 0.0)) throw DomainError("grid rescaling factor must be positive");
  return build_grid(dim_, r_max_ / t, nodes_.size());
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return this == &other || (dim_ == other.dim_ && r_max_ == other.r_max_ && size() == other.size());
}

GridPtr build_grid(int dim, double r_max, std::size_t points) {
  return std::make_shared<const RadialGrid>(dim, r_max, points);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("field requires a grid");
  if (values_.size() != grid_->size())
    throw ShapeError("field has " + std::to_string(values_.size()) + " samples, grid has " +
                     std::to_string(grid_->size()));
}

Field Field::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return Field(std::move(grid), std::vector<double>(n, 0.0));
}

double Field::mass() const {
  if (!mass_) {
    double s = 0.0;
    const auto w = grid_->weights();
    for (std::size_t i = 0; i < values_.size(); ++i) s += w[i] * values_[i] * values_[i];
    mass_ = s;
  }
  return *mass_;
}

void Field::set_values(std::vector<double> values) {
  if (values.size() != grid_->size()) throw ShapeError("field sample count does not match grid");
  values_ = std::move(values);
  mass_.reset();
}

Field Field::scaled(double s) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return Field(grid_, std::move(v));
}

Field Field::with_mass(double c) const {
  const double m = mass();
  if (!(m > 0.0)) throw DomainError("cannot normalize a zero field");
  return scaled(std::sqrt(c / m));
}

double integrate(const RadialGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw ShapeError("sample count does not match grid");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += w[i] * samples[i];
  return s;
}

namespace {
void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid().same_as(b.grid())) throw ShapeError("fields live on different grids");
}
}  // namespace

double inner(const Field& a, const Field& b) {
  require_same_grid(a, b);
  const auto w = a.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

double l2_norm(const Field& u) { return std::sqrt(u.mass()); }

double dirichlet_integral(const Field& u) {
  // K has zero row sums, so u^T K u = sum_{i<j} -K_ij (u_i - u_j)^2. The difference
  // form keeps rounding at the size of the integral instead of |K| |u|^2.
  const auto& k = u.grid().kinetic();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double d1 = u[i + 1] - u[i];
    s -= k.d1[i] * d1 * d1;
    if (i + 2 < u.size()) {
      const double d2 = u[i + 2] - u[i];
      s -= k.d2[i] * d2 * d2;
    }
  }
  return s;
}

Field radial_laplacian(const Field& u) {
  if (u.size() < 3) throw ShapeError("laplacian needs at least 3 nodes");
  const auto& g = u.grid();
  std::vector<double> ku(u.size());
  g.kinetic().apply(u.values(), ku);
  for (std::size_t i = 0; i < ku.size(); ++i) ku[i] = -ku[i] / g.weight(i);
  return Field(u.grid_ptr(), std::move(ku));
}

DilateResult dilate(const Field& u, double t, double interp_tol) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("dilation factor must be positive");
  const auto& g = u.grid();
  if (t == 1.0) return DilateResult{u, 0.0, false};
  CubicSpline spline(g.nodes(), u.values(), 0.0, 0.0);
  const double amp = std::pow(t, 0.5 * g.dim());
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = t * g.node(i);
    v[i] = x > g.r_max() ? 0.0 : amp * spline(x);
  }
  Field out(u.grid_ptr(), std::move(v));
  const double m0 = u.mass();
  const double loss = m0 > 0.0 ? std::abs(out.mass() - m0) / m0 : 0.0;
  return DilateResult{std::move(out), loss, loss > interp_tol};
}

}  // namespace masslab
