#pragma once

// Acceptance suite: every shipped claim of the library as a pinned-tolerance
// check, printed one PASS/FAIL line per criterion. Shared between the
// `validate` CLI subcommand and the acceptance test binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace wqed {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the selected criteria (all 12 when `only` is empty) and streams one
/// result line each to `log`. The total wall-clock budget check in criterion
/// 12 applies only to full runs.
std::vector<CriterionResult> run_acceptance(std::ostream& log, int jobs,
                                            const std::vector<int>& only = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace wqed
