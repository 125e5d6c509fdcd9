#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "masslab/error.hpp"
#include "masslab/families.hpp"
#include "masslab/functionals.hpp"
#include "masslab/groundstate.hpp"

namespace masslab {

struct SolverConfig {
  /// Initial step of the preconditioned flow.
  double step = 1.0;
  int max_iter = 20000;
  /// Stop when |g - lambda u|_2 <= grad_tol (1 + |lambda|) sqrt(c).
  double grad_tol = 1e-9;
  /// Stall when the relative energy change over stall_window iterations is below this.
  double energy_tol = 1e-12;
  int stall_window = 50;
  double backtracking = 0.5;
  std::uint64_t seed = 1;
  double divergence_floor = -1e6;

  /// Throws ConfigError unless tolerances are positive and backtracking is in (0,1).
  void validate() const;
};

enum class MinimizeStatus { CONVERGED, STALLED, DIVERGED, MAX_ITER };
const char* to_string(MinimizeStatus s);

struct MinimizeReport {
  Model model;
  double mass_c = 0.0;
  Field minimizer;
  double energy = 0.0;
  EnergyBreakdown breakdown;
  double lagrange = 0.0;
  double grad_residual = 0.0;
  int iterations = 0;
  MinimizeStatus status = MinimizeStatus::MAX_ITER;
  /// Energy after every accepted step, starting with the initial field.
  std::vector<double> energy_trace;
  /// Width of the band the computed energy is trusted to: squared residual plus
  /// relative rounding.
  double energy_uncertainty = 0.0;
};

/// Positive Gaussian bump with a seeded smooth perturbation, zero at r_max.
Field random_initial_field(GridPtr grid, std::uint64_t seed);

/// Minimizes the model energy on {|u|_2^2 = c} by preconditioned projected gradient
/// descent: direction P^{-1} W (g - m u) tangent to the sphere, exact L^2
/// renormalization after each step, Armijo backtracking. P = K + W (1 + V) for the
/// confined model, K + W otherwise. u(r_max) = 0 is kept throughout.
/// Throws DomainError when c <= 0 and NumericalError on non-finite iterates.
MinimizeReport minimize_on_sphere(const Model& model, double c, const Field& init, const SolverConfig& cfg);
/// Same, starting from random_initial_field(grid, cfg.seed).
MinimizeReport minimize_on_sphere(const Model& model, double c, GridPtr grid, const SolverConfig& cfg);

/// <gradient, u> / |u|_2^2. Throws DomainError on a zero field.
double lagrange_multiplier(const Model& model, const Field& u);

enum class Classification { ZERO_NOT_ATTAINED, ATTAINED, MINUS_INFINITY };
const char* to_string(Classification c);

/// Thrown when witnesses disagree (for instance a lower bound holds but a flow
/// diverges). The message carries both pieces of evidence.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

struct ClassificationReport {
  Classification classification = Classification::ZERO_NOT_ATTAINED;
  /// Infimum estimate: 0, the attained minimum, or -infinity.
  double energy = 0.0;
  /// Divergence witness (MINUS_INFINITY) or dilation probe (ZERO_NOT_ATTAINED).
  std::vector<double> parameters;
  std::vector<double> energies;
  bool lower_bound_ok = true;
  std::optional<MinimizeReport> minimize;
  std::string evidence;
};

/// Classifies the infimum of the model on S(c) using witness families, lower bounds
/// and minimization. Throws ClassificationError on inconsistent evidence and
/// ModelError when model and ground state dimensions differ.
ClassificationReport classify_infimum(const Model& model, double c, const GroundState& gs,
                                      const SolverConfig& cfg = {});

/// Relative window around c* treated as "exactly at threshold".
inline constexpr double kThresholdTol = 1e-9;

}  // namespace masslab
