#pragma once

#include "masslab/grid.hpp"

namespace masslab {

struct CoulombSolution {
  Field phi;
  double energy_B = 0.0;
};

// phi = |x|^{-1} * u^2 in R^3 via the radial Green's function 1/max(r, s).
// The discrete kernel is symmetric, so phi * u is the exact gradient of B.
// Throws ModelError unless the grid is three-dimensional.
CoulombSolution coulomb_potential(const Field& u);

// B(u) = 1/4 int phi_u u^2.
double hartree_energy(const Field& u);

}  // namespace masslab
