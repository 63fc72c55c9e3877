#pragma once

#include <functional>
#include <string>
#include <vector>

namespace expolat::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

CriterionResult symbolic_annihilation();   // 1
CriterionResult difmod_identity();         // 2
CriterionResult upper_triangular();        // 3
CriterionResult invariant_extension();     // 4
CriterionResult frechet_equivalence();     // 5
CriterionResult montel_round_trip();       // 6
CriterionResult subgroup_orders();         // 7
CriterionResult negative_control();        // 8

/// All criteria in order; `on_result` is called as each one finishes.
std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] name (0.12 s / 2 s): detail"
std::string format(const CriterionResult& r);

}  // namespace expolat::acceptance
