#pragma once

#include <cstddef>

#include "masslab/functionals.hpp"
#include "masslab/grid.hpp"

namespace masslab {

/// First weighted Dirichlet eigenpair on the ball B_R:
/// mu1 = inf { int |grad u|^2 : u in H_0^1(B_R), int V u^2 = 1 }.
struct EigenResult {
  double mu1 = 0.0;
  /// phi >= 0 with phi(R) = 0 and int V phi^2 = 1.
  Field eigenfunction;
  double domain_radius = 0.0;
  double weight_norm = 0.0;
  int iterations = 0;
};

/// Shifted inverse iteration on K u = mu W_V u over the radial grid of B_R, where
/// W_V = diag(w_i V(r_i)). Stops when the Rayleigh quotient changes by less than
/// 1e-13 relative.
/// Throws DomainError when V vanishes on the ball or R <= 0.
EigenResult compute_mu1(const Potential& potential, double R, std::size_t grid_points = 2048, int dim = 3);

/// int |grad v|^2 / int V v^2 on the eigen grid; used to probe optimality.
double rayleigh_quotient(const Potential& potential, const Field& v);

}  // namespace masslab
