#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "masslab/grid.hpp"

namespace masslab {

/// Configuration of the ground-state solve. points = 0 or r_max = 0 selects the
/// per-dimension default (N = 1: 4096 points on [0, 20]; N = 2, 3: 2048 on [0, 16]).
struct GroundStateConfig {
  std::size_t points = 0;
  double r_max = 0.0;
  double ode_step = 1e-3;
  int newton_steps = 12;
  double bracket_lo = 0.1;
  double bracket_hi = 10.0;
  /// Identity residuals above this raise AccuracyError.
  double identity_tol = 1e-4;
};

std::size_t default_points(int dim);
double default_r_max(int dim);

/// Positive radial solution Q of -Delta Q + Q = Q^{1+4/N} and its mass c*.
struct GroundState {
  int dim = 0;
  Field profile;
  /// |Q|_2^2 under the grid quadrature.
  double cstar = 0.0;
  /// Relative residuals of int Q^p = (N+2)/N int|grad Q|^2 = (N+2)/2 int Q^2,
  /// pairwise, each divided by int Q^p.
  std::array<double, 3> identity_residuals{};
  double action_J = 0.0;
  /// |slope + 1| of log(Q r^{(N-1)/2}) against r on [r_max/2, 3 r_max/4].
  double decay_check = 0.0;
  /// Shooting data: Q(0) from bisection and the mass integrated along the ODE.
  double q0 = 0.0;
  double cstar_ode = 0.0;
  /// Max |(-Delta Q + Q - Q^{p-1})| over the free nodes after polishing.
  double residual = 0.0;
};

/// Bisection shooting on Q(0) with an RK4 integrator, followed by Newton polishing
/// of the discrete equation K Q + W (Q - Q^{p-1}) = 0 with Q(r_max) = 0.
/// Throws SolverError when no bracket is found and AccuracyError when an identity
/// residual exceeds cfg.identity_tol.
GroundState solve_ground_state(int dim, const GroundStateConfig& cfg = {});

/// Second, independent solver: Nehari-normalized semi-implicit gradient flow for
/// J(u) = 1/2 int (|grad u|^2 + u^2) - N/(2N+4) int |u|^p started from a Gaussian.
struct FlowGroundState {
  Field profile;
  double cstar = 0.0;
  int iterations = 0;
  double update_norm = 0.0;
  bool converged = false;
};
FlowGroundState solve_ground_state_flow(int dim, GridPtr grid, double tau = 8.0, int max_iter = 2000,
                                        double tol = 1e-13);

/// J(u) for an arbitrary field.
double action_functional(const Field& u);

/// J(Q); equals c*/2 at the ground state.
double action(const GroundState& gs);

/// gn_gap(Q, c*) divided by int Q^p.
double certify_gn(const GroundState& gs);

/// Fills residuals, action and decay check from gs.profile and gs.cstar.
void populate_diagnostics(GroundState& gs);

/// Versioned text persistence: header lines then "r Q" columns (%.17g). A
/// non-empty config_hash is recorded in the header.
void save_ground_state(const GroundState& gs, const std::string& path, const std::string& config_hash = {});
/// Throws ConfigError on a malformed or mismatched file.
GroundState load_ground_state(const std::string& path);

}  // namespace masslab
