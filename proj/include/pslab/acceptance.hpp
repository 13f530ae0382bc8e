#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pslab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  /// SHA-256 over the numeric arrays the check produced.
  std::string fingerprint;
};

/// Runs the numbered acceptance checks (1..10) in order. Later checks reuse
/// the profile and the 2D field computed by earlier ones. Progress lines go
/// to `log` when it is not null.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream* log = nullptr);

/// One line per result plus a summary; returns true when all passed.
bool print_acceptance_table(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace pslab
