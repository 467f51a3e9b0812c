#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mallows {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;
};

struct AcceptanceOptions {
    // Smaller Monte Carlo budgets and grids for the expensive criteria; the
    // thresholds stay the same.
    bool quick = false;
    std::uint64_t seed = 0;
    // restrict to these criterion ids (empty: all)
    std::vector<int> only;
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

// One line per criterion: "[PASS] 3 variance-adjudication (0.12 s): ..."
std::string format_result_line(const CriterionResult& result);

}  // namespace mallows
