#pragma once

#include <functional>
#include <vector>

#include "masslab/grid.hpp"
#include "masslab/groundstate.hpp"

namespace masslab {

/// One member of a witness family. `parameter` is t, rho or theta;
/// `normalization` is A_rho for the cutoff family and 1 otherwise.
struct FamilyPoint {
  Field field;
  double parameter = 1.0;
  double normalization = 1.0;
  double target_mass = 0.0;
  /// |mass - target| / target.
  double mass_drift = 0.0;
};

/// Relative mass tolerance every family point must respect.
inline constexpr double kFamilyMassTol = 1e-8;

/// u^t(x) = t^{N/2} u(t x), represented exactly on the grid rescaled by t (nodes r_i/t).
/// Scaling laws hold to rounding: A, C scale by t^2, B by t, mass is unchanged.
/// With `target` set the result is resampled onto that grid (cubic spline, zero
/// extension) and a drift above kFamilyMassTol raises TruncationError.
/// Throws DomainError when t <= 0 or |u|_2^2 differs from c by more than the tolerance.
FamilyPoint dilation_family(const Field& u, double c, double t, GridPtr target = nullptr);

/// Q^t = t^{N/2} sqrt(c/c*) Q(t x). Mass is exactly c.
FamilyPoint scaled_Q_family(const GroundState& gs, double c, double t);

/// SP closed form E(Q^t) = t^2 (c/c*) A(Q) [1 - (c/c*)^{2/3}] + t (c/c*)^2 B(Q).
double scaled_Q_energy_closed_form(const GroundState& gs, double c, double t);

/// Cutoff value: 1 on [0,1], 0 beyond 2, quintic smoothstep in between (|psi'| <= 15/8).
double cutoff_psi(double r);

/// u^rho = A_rho sqrt(c/c*) rho^{N/2} psi(x - x0) Q(rho (x - x0)), radial about x0 and
/// sampled on the Q grid rescaled by rho. A_rho enforces mass c. x0_radius > 0 is
/// recorded for the potential, which the caller evaluates through Potential::shifted
/// (a radial-slice approximation). Throws DomainError when rho < 1.
FamilyPoint cutoff_family(const GroundState& gs, double c, double rho, double x0_radius = 0.0);

/// sqrt(theta) u. Throws DomainError when theta <= 0.
Field mass_scale(const Field& u, double theta);

/// Energies along a doubling sequence p_k = p0 2^k.
struct DivergenceWitness {
  std::vector<double> parameters;
  std::vector<double> energies;
  /// Length of the final run of strict decreases.
  int decreases = 0;
  bool certified = false;
};

inline constexpr int kWitnessMinDecreases = 5;
inline constexpr double kWitnessFactor = 1e3;

/// Evaluates energy_at(p0 2^k) for k = 0..k_max and stops at the first k where the
/// last kWitnessMinDecreases steps were strict decreases and the energy is below
/// -kWitnessFactor (|E_0| + 1).
DivergenceWitness divergence_witness(const std::function<double(double)>& energy_at, double p0 = 1.0,
                                     int k_max = 20);

}  // namespace masslab
