#include "masslab/weighted_eigen.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "banded.hpp"
#include "masslab/error.hpp"

namespace masslab {

EigenResult compute_mu1(const Potential& potential, double R, std::size_t grid_points, int dim) {
  if (!(R > 0.0)) throw DomainError("ball radius must be positive");
  auto grid = build_grid(dim, R, grid_points);
  const auto& g = *grid;
  const std::size_t m = g.size(), n = m - 1;

  std::vector<double> wv(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wv[i] = g.weight(i) * potential(g.node(i));
    total += wv[i];
  }
  if (!(total > 0.0)) throw DomainError("weight V vanishes on the ball: mu1 is undefined");

  const auto& k = g.kinetic();
  auto rayleigh = [&](const Eigen::VectorXd& u) {
    std::vector<double> full(m, 0.0), ku(m);
    for (std::size_t i = 0; i < n; ++i) full[i] = u[i];
    k.apply(full, ku);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += u[i] * ku[i];
      den += wv[i] * u[i] * u[i];
    }
    return num / den;
  };

  Eigen::VectorXd u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::cos(0.5 * std::numbers::pi * g.node(i) / R);
  double mu = rayleigh(u);
  double shift = 0.0;
  std::vector<double> d(n);
  auto factor = [&](double s) {
    for (std::size_t i = 0; i < n; ++i) d[i] = -s * wv[i];
    return std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(detail::kinetic_plus_diag(g, d, n));
  };
  auto solver = factor(shift);

  EigenResult out;
  double prev_change = 1.0;
  for (int it = 1; it <= 1000; ++it) {
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = wv[i] * u[i];
    u = solver->solve(rhs);
    if (solver->info() != Eigen::Success || !u.allFinite()) throw SolverError("inverse iteration solve failed");
    u /= u.cwiseAbs().maxCoeff();
    const double next = rayleigh(u);
    const double change = std::abs(next - mu) / next;
    mu = next;
    out.iterations = it;
    if (it > 8 && change < 1e-12) break;
    // Past the shift the change only falls until it reaches rounding level.
    if (it > 12 && change < 1e-9 && change >= prev_change) break;
    prev_change = change;
    // Once the estimate settles, shift towards it for fast convergence.
    if (it == 6) {
      shift = 0.9 * mu;
      solver = factor(shift);
      if (solver->info() != Eigen::Success) throw SolverError("shifted factorization failed");
    }
  }

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += wv[i] * u[i] * u[i];
  const double sign = u[0] < 0.0 ? -1.0 : 1.0;
  std::vector<double> phi(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) phi[i] = sign * u[i] / std::sqrt(norm);

  out.mu1 = mu;
  out.eigenfunction = Field(grid, std::move(phi));
  out.domain_radius = R;
  double wn = 0.0;
  for (std::size_t i = 0; i < n; ++i) wn += wv[i] * out.eigenfunction[i] * out.eigenfunction[i];
  out.weight_norm = wn;
  return out;
}

double rayleigh_quotient(const Potential& potential, const Field& v) {
  const auto& g = v.grid();
  double den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) den += g.weight(i) * potential(g.node(i)) * v[i] * v[i];
  if (!(den > 0.0)) throw DomainError("weighted norm of test field vanishes");
  return dirichlet_integral(v) / den;
}

}  // namespace masslab
