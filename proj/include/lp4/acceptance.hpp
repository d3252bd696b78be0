#pragma once

#include <string>
#include <vector>

namespace lp4 {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string details;  // deterministic multi-line report body
};

// Runs one acceptance criterion (1..9).
CriterionResult run_criterion(int id);

// Runs all nine criteria in order.
std::vector<CriterionResult> run_acceptance();

// Deterministic plain-text report (17 significant digits everywhere).
std::string acceptance_report(const std::vector<CriterionResult>& results);

}  // namespace lp4
