#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "masslab/analysis.hpp"
#include "masslab/groundstate.hpp"
#include "masslab/weighted_eigen.hpp"

namespace masslab {

inline constexpr int kSchemaVersion = 1;

/// %.17g, with "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// FNV-1a of the canonical configuration text as 16 lowercase hex digits.
std::string config_hash(std::string_view canonical);

/// Canonical "key=value" lines for a solver configuration (sorted keys, %.17g).
std::string canonical(const SolverConfig& cfg);
std::string canonical(const Model& model);
std::string canonical(const GroundStateConfig& cfg, int dim);

/// Scan as versioned JSON (pretty-printed, key order fixed). MINUS_INFINITY
/// entries carry the witness trace and a null energy.
std::string scan_to_json(const ScanResult& scan, std::string_view hash);
/// Header comment with the config hash, then c,energy,classification,lambda,iterations.
std::string scan_to_csv(const ScanResult& scan, std::string_view hash);

/// Writes via a temporary file and rename. Throws ConfigError on I/O failure.
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

/// "harmonic:A", "gaussian:V0[,width]" or "table:PATH" (two columns r V, '#'
/// comments). Throws ConfigError on anything else.
Potential parse_potential(std::string_view spec);

/// mu1, the domain radius and the eigenfunction phi as header lines plus "r phi"
/// columns, in the same layout as ground state files.
std::string eigen_to_text(const EigenResult& eig, const Potential& potential, std::string_view hash);

/// Ground state from the directory named by MASSLAB_CACHE when a matching file is
/// present, otherwise solved (and stored there when the variable is set).
GroundState cached_ground_state(int dim, const GroundStateConfig& cfg = {});

}  // namespace masslab
