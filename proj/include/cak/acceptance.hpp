#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cak {

enum class SuiteLevel { Quick, Full };

struct SuiteOptions {
    SuiteLevel level = SuiteLevel::Full;
    std::uint64_t seed = 1;
    // Criteria run concurrently on this many threads; each criterion owns its data and RNG.
    int jobs = 1;
    // Passed to GameOptions::parallel for the acceptance games.
    bool parallel_games = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

constexpr int kCriteria = 11;

CriterionResult run_criterion(int id, const SuiteOptions& opt);
// ids empty means all criteria; results come back in id order whatever the job count.
std::vector<CriterionResult> run_suite(const std::vector<int>& ids, const SuiteOptions& opt);
// "PASS  [3] name: detail"
std::string result_line(const CriterionResult& r);

}  // namespace cak
