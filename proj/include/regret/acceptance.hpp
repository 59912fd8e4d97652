#pragma once

#include <functional>
#include <string>
#include <vector>

namespace regret {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Scalar root used by the commuting-case cross-check of criterion 1.
  /// Replaceable so that a broken Ψ can be shown to fail the suite.
  std::function<double(double)> psi;
  /// Dimension of the high-dimensional smoke test (criterion 11).
  int hd_dim = 4096;
};

AcceptanceOptions default_acceptance_options();

/// Runs a single criterion, 1 to 11.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Criteria 1 to 11 followed by 12, the aggregate (all passed within 300 s).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>&
                                                on_result = {});

/// "criterion  N  PASS  title  (1.23 s / 5 s)  detail".
std::string format_result(const CriterionResult& r);

}  // namespace regret
