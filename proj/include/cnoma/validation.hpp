#pragma once

// Release-gate checks shared by `cnoma validate` and the acceptance test
// binary. Each check reports one measured value against one tolerance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnoma/optimizer.hpp"

namespace cnoma {

struct CheckResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;   ///< human-readable breakdown of the measurement
  double seconds = 0.0;  ///< wall time spent in the check
};

struct ValidationOptions {
  std::uint64_t seed = 20180611;
  /// Overrides every Monte Carlo draw count; the release gate leaves it unset.
  std::optional<std::size_t> samples;
  /// Subset of check names to run; empty runs all.
  std::vector<std::string> only;
  SolverOptions solver;
  unsigned workers = 0;
};

/// Names of all checks, in execution order.
[[nodiscard]] const std::vector<std::string>& check_names();

/// Runs the selected checks. Throws InvalidArgument for an unknown name in
/// `only`. Numerical exceptions inside a check are reported as a failure of
/// that check, not rethrown.
[[nodiscard]] std::vector<CheckResult> run_validation(const ValidationOptions& opts);

[[nodiscard]] bool all_passed(const std::vector<CheckResult>& results);

[[nodiscard]] nlohmann::json validation_report(const ValidationOptions& opts,
                                               const std::vector<CheckResult>& results,
                                               const std::string& timestamp);

/// "PASS  [id] name  measured=... tolerance=...  (detail)" style summary line.
[[nodiscard]] std::string summary_line(const CheckResult& r);

}  // namespace cnoma
