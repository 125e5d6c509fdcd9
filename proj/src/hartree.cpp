#include "masslab/hartree.hpp"

#include <vector>

#include "masslab/error.hpp"

namespace masslab {

namespace {

// Weights for int_0^inf 4 pi s rho(s) ds (odd integrand): trapezoid plus
// Euler-Maclaurin end terms at s = 0 expressed through rho_0, rho_1, rho_2.
std::vector<double> odd_weights(const RadialGrid& g) {
  const std::size_t m = g.size();
  const double h = g.spacing();
  const double om = g.surface_factor();
  std::vector<double> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = g.weight(j) / g.node(std::max<std::size_t>(j, 1));
  const double e[3] = {1.0 / 12.0 + 30.0 / 2880.0 + 6.0 / 6048.0, -32.0 / 2880.0 - 8.0 / 6048.0,
                       2.0 / 2880.0 + 2.0 / 6048.0};
  c[0] = om * h * h * e[0];
  c[1] = om * h * h * (1.0 + e[1]);
  c[2] = om * h * h * (2.0 + e[2]);
  return c;
}

}  // namespace

CoulombSolution coulomb_potential(const Field& u) {
  const auto& g = u.grid();
  if (g.dim() != 3) throw ModelError("Coulomb potential requires N = 3");
  const std::size_t m = g.size();
  const double h = g.spacing();
  const double om = g.surface_factor();
  const auto c = odd_weights(g);

  std::vector<double> q(m);  // w_j rho_j
  for (std::size_t j = 0; j < m; ++j) q[j] = g.weight(j) * u[j] * u[j];
  const double rho0 = u[0] * u[0];

  // tail[i] = sum_{j > i, j >= 1} q_j / r_j
  std::vector<double> tail(m + 1, 0.0);
  for (std::size_t j = m; j-- > 1;) tail[j] = tail[j + 1] + q[j] / g.node(j);

  std::vector<double> phi(m);
  double phi0 = 0.0;
  for (std::size_t j = 0; j < m; ++j) phi0 += c[j] * u[j] * u[j];
  phi[0] = phi0;

  double inner = 0.0;  // sum_{1 <= j < i} q_j
  for (std::size_t i = 1; i < m; ++i) {
    const double r = g.node(i);
    const double rho = u[i] * u[i];
    double v = inner / r + tail[i + 1] + (q[i] / r - om * h * h / 12.0 * rho);
    v += c[i] / g.weight(i) * g.weight(0) * rho0;
    phi[i] = v;
    inner += q[i];
  }

  double b = 0.0;
  for (std::size_t i = 0; i < m; ++i) b += q[i] * phi[i];
  return CoulombSolution{Field(u.grid_ptr(), std::move(phi)), 0.25 * b};
}

double hartree_energy(const Field& u) { return coulomb_potential(u).energy_B; }

}  // namespace masslab
