#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "masslab/minimize.hpp"
#include "masslab/weighted_eigen.hpp"

namespace masslab {

/// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency). Results
/// must be written by index; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

/// Per-c classification of one model. Arrays are aligned by index.
struct ScanResult {
  Model model;
  double cstar = 0.0;
  std::vector<double> c_values;
  /// Infimum estimate per c: 0, the attained minimum, or -infinity.
  std::vector<double> energies;
  std::vector<Classification> classifications;
  /// lambda_c for attained entries, NaN otherwise.
  std::vector<double> lagranges;
  std::vector<int> iterations;
  /// Width of the energy band for attained entries (0 otherwise).
  std::vector<double> uncertainties;
  std::vector<std::string> evidence;
  /// Witness parameters and energies (dilation probe, divergence witness or
  /// flow energy trace).
  std::vector<std::vector<double>> witness_parameters;
  std::vector<std::vector<double>> witness_energies;
  std::vector<std::optional<MinimizeReport>> reports;
  SolverConfig config;
  std::string grid_description;
};

/// Classifies every c (positive, non-decreasing) concurrently. A failure at some c
/// is rethrown as the same error type with "c = ..." prepended.
ScanResult scan(const Model& model, const std::vector<double>& c_grid, const GroundState& gs,
                const SolverConfig& cfg = {}, unsigned threads = 0);

/// True when no finite entry follows a MINUS_INFINITY entry.
bool threshold_structure_ok(const ScanResult& scan);

struct MonotonicityReport {
  std::vector<double> c_values;
  /// I_c / c^2 for the attained entries in (0, c*].
  std::vector<double> ratios;
  /// ratio_i - ratio_{i+1} and the margin each gap must exceed.
  std::vector<double> gaps;
  std::vector<double> required;
  bool passed = false;
  std::string message;
  /// Minimizers of the first violating pair.
  std::optional<Field> left, right;
};

/// Strict decrease of I_c / c^2 across consecutive attained entries of an
/// SP_CONFINED scan. Each gap must exceed margin_factor times the summed energy
/// uncertainties (divided by c^2). Throws DomainError on a wrong model, fewer than
/// four attained entries in (0, c*], or repeated c values.
MonotonicityReport monotonicity_check(const ScanResult& scan, double margin_factor = 1.0);

struct SmallMassReport {
  std::vector<double> c_values;
  std::vector<double> energies;
  /// Value at c = 0 of the line through the two smallest points.
  double intercept = 0.0;
  bool passed = false;
  std::string message;
};

/// I_c > 0, increasing in c, and the linear extrapolation to c = 0 smaller in
/// magnitude than the smallest computed I_c. Needs at least three attained entries.
SmallMassReport small_mass_check(const ScanResult& scan);

struct ContinuityReport {
  double c = 0.0;
  double energy = 0.0;
  std::vector<double> deltas;
  /// I_{c+delta} - I_c and I_c - I_{c-delta}.
  std::vector<double> forward, backward;
  /// Extrapolated signed difference at delta -> 0 and the bound it must meet:
  /// 10x the propagated solver uncertainty plus the truncation estimate (change of
  /// the extrapolation when the outermost pair is dropped).
  double limit = 0.0;
  double truncation = 0.0;
  double bound = 0.0;
  bool decreasing = false;
  bool passed = false;
  std::string message;
};

/// Probes continuity of c -> inf at c by minimizing at c and c +- delta. Differences
/// must shrink with delta and their polynomial extrapolation to delta = 0 must sit
/// within the bound described above. delta = 0 gives a zero difference.
/// Throws DomainError when c - delta <= 0 or c + delta reaches c*, and
/// ModelError for models without minimizers (SP, NLS).
ContinuityReport continuity_probe(const Model& model, double c, const std::vector<double>& deltas,
                                  const GroundState& gs, const SolverConfig& cfg = {});

enum class SubadditivityStatus { STRICT, VIOLATED, INCONCLUSIVE };
const char* to_string(SubadditivityStatus s);

struct SubadditivityEntry {
  double alpha = 0.0;
  double f_alpha = 0.0;
  double f_rest = 0.0;
  /// f(alpha) + f(c - alpha) - f(c).
  double gap = 0.0;
  double margin = 0.0;
  SubadditivityStatus status = SubadditivityStatus::INCONCLUSIVE;
};

struct SubadditivityReport {
  double c = 0.0;
  double f_c = 0.0;
  std::vector<SubadditivityEntry> entries;
  bool passed = false;
  std::string message;
};

/// f(c) < f(alpha) + f(c - alpha) for each alpha, with a margin of 3x the summed
/// uncertainties. Needs NLS_DECAYING with mu >= eig.mu1 and 0 < alpha < c < c*.
/// Non-converged solves make the entry INCONCLUSIVE rather than a failure.
SubadditivityReport subadditivity_check(const Model& model, double c, const std::vector<double>& alphas,
                                        const GroundState& gs, const EigenResult& eig, const SolverConfig& cfg = {});

struct ThetaReport {
  double c = 0.0;
  double theta = 0.0;
  double f_c = 0.0;
  /// F(sqrt(theta) u_c), an upper bound for f(theta c).
  double scaled = 0.0;
  /// theta f(c) - F(sqrt(theta) u_c) and the margin it must exceed.
  double gap = 0.0;
  double margin = 0.0;
  /// Independent minimization at theta c, when it converged.
  std::optional<double> f_theta_c;
  bool passed = false;
  std::string message;
};

/// f(theta c) < theta f(c) through the witness sqrt(theta) u_c. Requires
/// theta > 1, theta c < c*, and a decaying-potential model.
ThetaReport theta_scaling_check(const Model& model, double c, double theta, const GroundState& gs,
                                const SolverConfig& cfg = {});

struct CoercivityReport {
  double c = 0.0;
  std::vector<double> t;
  std::vector<double> energies;
  std::vector<double> lower_bounds;
  bool bound_ok = false;
  /// First k from which the energy increases strictly up to k_max.
  int increasing_from = -1;
  bool passed = false;
  std::string message;
};

/// F along the dilations Q^t (t = 2^k, k = 0..k_max) at mass c, with the lower bound
/// (1 - (c/c*)^{2/N}) A - mu sup(V) c / 2. Passes when the bound holds everywhere
/// and the energy increases over at least the last three doublings.
CoercivityReport coercivity_probe(const Model& model, double c, const GroundState& gs, int k_max = 6);

/// Flows started from several seeds below the threshold of a model without
/// minimizers (SP, NLS). On a truncated domain every flow settles on a state held
/// by the boundary, so each seed is run on the ground-state grid and on the grid
/// of twice the radius: an interior critical point would keep its energy, a
/// boundary-held state loses it (a factor 4 for NLS, between 2 and 4 for SP); a
/// ratio below 0.75 counts. Nonexistence cannot be certified numerically; the
/// result is weak evidence and labeled as such.
struct NonexistenceEvidence {
  double c = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<MinimizeStatus> statuses, statuses_wide;
  /// Final energies on radius r_max and 2 r_max, and their ratio.
  std::vector<double> energies, energies_wide, ratios;
  bool consistent = false;
  std::string label;
};

/// Throws ModelError for models with minimizers and DomainError unless 0 < c < c*.
NonexistenceEvidence nonexistence_evidence(const Model& model, double c, const GroundState& gs,
                                           const std::vector<std::uint64_t>& seeds, int max_iter = 2000);

}  // namespace masslab
