#pragma once

// The acceptance suite: ten numbered criteria, each with a runtime budget.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nchardy {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct SelftestOptions {
  std::uint64_t seed = 0;
  /// Negative control: perturbs a cached Weingarten value before running.
  bool corrupt_weingarten = false;
  unsigned workers = 0;
  /// Restrict to these criterion ids; empty runs all ten.
  std::vector<int> only;
  std::function<void(const CriterionResult&)> on_result;
};

/// A criterion passes iff its checks hold and it finished within budget.
std::vector<CriterionResult> run_acceptance(const SelftestOptions& options);

/// "PASS  3 exact-vanishing  (0.01 s / 10 s)  detail"
std::string format_result_line(const CriterionResult& r);

}  // namespace nchardy
