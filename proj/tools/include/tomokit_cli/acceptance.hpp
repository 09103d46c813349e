#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tomokit::cli {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // key=value pairs
};

// Criteria 1 to 13. Every random draw derives from `seed`.
std::vector<CriterionResult> run_numeric_criteria(std::uint64_t seed);
// All 14; the last one reruns 1 to 13 and compares the rendered report byte for byte.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

std::string format_criterion(const CriterionResult& c);
std::string format_report(const std::vector<CriterionResult>& results);

}  // namespace tomokit::cli
