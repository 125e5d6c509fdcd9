#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace masslab {

class RadialGrid;
using GridPtr = std::shared_ptr<const RadialGrid>;

/// Symmetric pentadiagonal matrix stored by bands: main, first and second super-diagonal.
struct BandedSym {
  std::vector<double> d0;
  std::vector<double> d1;
  std::vector<double> d2;

  std::size_t size() const { return d0.size(); }
  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
};

/// Uniform radial discretization of R^N, N in {1,2,3}, on [0, r_max].
///
/// Node r_0 = 0 is the centre (even reflection), node r_{M-1} = r_max carries a
/// homogeneous Dirichlet condition for the solvers. Quadrature weights include the
/// surface factor omega_N r^{N-1}; for N = 1 the full line is covered, so
/// sum_i w_i g(r_i) approximates the integral of g(|x|) over R^N.
///
/// The quadrature is an endpoint-corrected trapezoidal rule: Gregory end weights at
/// r_max and parity corrections at the origin. All weights are strictly positive and
/// the origin weight equals the volume of the central cell, which keeps the weighted
/// kinetic operator consistent at r = 0.
///
/// The kinetic form u^T K u approximates the Dirichlet integral of u to fourth order.
/// It is built from nearest-neighbour differences at half nodes and centred
/// differences over two cells, so it is positive definite on vectors vanishing at
/// r_max and penalizes the grid-scale sawtooth.
///
/// Grids are immutable once built.
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, std::size_t points);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  double spacing() const { return h_; }
  std::size_t size() const { return nodes_.size(); }
  /// omega_N: 2 for the line, 2 pi, 4 pi.
  double surface_factor() const { return omega_; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  const BandedSym& kinetic() const { return kinetic_; }

  /// Grid with the same point count and r_max / t: nodes r_i / t.
  GridPtr rescaled(double t) const;

  bool same_as(const RadialGrid& other) const;

 private:
  int dim_;
  double r_max_;
  double h_;
  double omega_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  BandedSym kinetic_;
};

/// Builds a grid; throws ConfigError on dim outside {1,2,3}, r_max <= 0 or points < 16.
GridPtr build_grid(int dim, double r_max, std::size_t points);

/// Sampled radial function u(r_i) with a lazily cached mass |u|_2^2.
class Field {
 public:
  /// Empty placeholder without a grid; only assignment and empty() are valid.
  Field() = default;
  Field(GridPtr grid, std::vector<double> values);

  bool empty() const { return !grid_; }

  static Field zeros(GridPtr grid);
  template <typename Fn>
  static Field sample(GridPtr grid, Fn&& fn) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->node(i));
    return Field(std::move(grid), std::move(v));
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// |u|_2^2 under the grid quadrature. Recomputed after any mutation.
  double mass() const;

  void set_values(std::vector<double> values);
  template <typename Fn>
  void transform(Fn&& fn) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = fn(i, values_[i]);
    mass_.reset();
  }

  Field scaled(double s) const;
  /// Copy rescaled so that |u|_2^2 = c. Throws DomainError for a zero field.
  Field with_mass(double c) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  mutable std::optional<double> mass_;
};

/// Quadrature of samples over R^N. Throws ShapeError on length mismatch.
double integrate(const RadialGrid& grid, std::span<const double> samples);

/// Weighted inner product sum_i w_i a_i b_i.
double inner(const Field& a, const Field& b);

/// sqrt(inner(u, u)).
double l2_norm(const Field& u);

/// Dirichlet integral int |grad u|^2 = u^T K u.
double dirichlet_integral(const Field& u);

/// Delta u, the weighted kinetic operator -W^{-1} K u. At r = 0 this is the
/// symmetric limit N u''(0). Symmetric under the quadrature inner product.
Field radial_laplacian(const Field& u);

struct DilateResult {
  Field field;
  /// |mass(u^t) - mass(u)| / mass(u).
  double mass_loss = 0.0;
  /// Set when mass_loss exceeds the interpolation tolerance.
  bool truncated = false;
};

/// u^t(r) = t^{N/2} u(t r) resampled on the same grid by a clamped cubic spline with
/// zero extension beyond r_max. Throws DomainError for t <= 0.
DilateResult dilate(const Field& u, double t, double interp_tol = 1e-8);

}  // namespace masslab
