#pragma once

#include <string>
#include <vector>

namespace grushin::verify {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured values against their tolerances
  double seconds = 0.0;
};

// Criteria 1-12; the end-to-end CLI check is run by the acceptance binary itself.
inline constexpr int kCriterionCount = 12;

std::string criterion_title(int id);

// Never throws: exceptions inside a criterion become a failed result.
CriterionResult run_criterion(int id);

// Empty `ids` runs all of 1..12.
std::vector<CriterionResult> run_suite(const std::vector<int>& ids = {});

// "[PASS] 04 plancherel round trip | ..."
std::string format_line(const CriterionResult& r);

}  // namespace grushin::verify
