#pragma once

#include <string>
#include <vector>

namespace ctar::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline constexpr int kCriteriaCount = 11;

// Runs one acceptance criterion (1-based).  Criteria 7 and 8 are Monte Carlo
// runs that take on the order of a minute; the rest are desk-scale.
std::vector<CheckResult> run_criterion(int index);

// The identity suite behind `ctar verify`: every closed-form fixture and
// structural identity, skipping the two long Monte Carlo criteria.
std::vector<CheckResult> run_fast_suite();

std::vector<CheckResult> run_all_criteria();

}  // namespace ctar::verify
