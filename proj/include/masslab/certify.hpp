#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace masslab {

struct CriterionResult {
  int id = 0;
  std::string name;
  /// The mathematical statement being checked.
  std::string claim;
  bool passed = false;
  std::string detail;
  /// Measured quantities in a fixed order.
  std::vector<std::pair<std::string, double>> values;
};

struct CertifyOptions {
  std::uint64_t seed = 1;
  /// Workers for scans and batched minimizations (0 = hardware concurrency).
  unsigned threads = 0;
  /// Run the suite a second time and compare the serialized results (criterion 12).
  /// When false the report holds criteria 1-11 only.
  bool determinism = true;
};

struct CertifyReport {
  std::uint64_t seed = 1;
  std::string config_hash;
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

/// Runs the twelve acceptance criteria. Exceptions inside a criterion mark it
/// failed with the message as detail; they never escape.
CertifyReport certify(const CertifyOptions& opts = {});

/// Versioned JSON; contains no timing or host data, so equal seeds give equal bytes.
std::string certify_to_json(const CertifyReport& report);

/// One line per criterion: "[PASS] 3 name: detail".
std::string certify_matrix(const CertifyReport& report);

}  // namespace masslab
