#pragma once

#include <functional>
#include <string>
#include <vector>

namespace repetilab {

enum class VerifyLevel { kQuick, kFull };

struct CriterionResult {
  std::string id;     // "A1".."A9"
  std::string title;
  bool passed = false;
  std::string detail;  // measured values, or the first mismatch
  double seconds = 0;
  double budget_seconds = 0;
};

// Quick runs A1-A6; full runs A1-A9.
std::vector<std::string> criterion_ids(VerifyLevel level);
CriterionResult run_criterion(const std::string& id);

// Runs the criteria of `level` in order, reporting each as it finishes.
std::vector<CriterionResult> verify(VerifyLevel level,
                                    const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS A3 <title> (1.2 s): <detail>"
std::string format_result(const CriterionResult& result);

}  // namespace repetilab
