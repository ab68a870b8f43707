#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace repwalk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

inline constexpr int kCriterionCount = 11;

/// "all", a group ("short-range", "correlation", "long-range", "mcmc") or a
/// comma-separated list of criterion numbers. Unknown selectors raise
/// ValidationError.
std::vector<int> select_criteria(const std::string& selector);

/// Runs one criterion; a criterion passes only within its runtime budget.
CriterionResult run_criterion(int id);

/// Prints one PASS/FAIL line per selected criterion and a summary line.
/// Returns 0 when all pass, 1 on any failure, 2 for an unknown selector.
int run_acceptance(const std::string& selector, std::ostream& out);

}  // namespace repwalk
