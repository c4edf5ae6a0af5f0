// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: acceptance [--quick] [--jobs N] [--seed S] [--parallel-games] [ids...]

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "cak/acceptance.hpp"

int main(int argc, char** argv) {
    cak::SuiteOptions opt;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--quick") opt.level = cak::SuiteLevel::Quick;
        else if (a == "--parallel-games") opt.parallel_games = true;
        else if (a == "--jobs" && i + 1 < argc) opt.jobs = std::atoi(argv[++i]);
        else if (a == "--seed" && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else ids.push_back(std::atoi(a.c_str()));
    }
    int failed = 0;
    for (auto& r : cak::run_suite(ids, opt)) {
        std::printf("%s  (%.1fs)\n", cak::result_line(r).c_str(), r.seconds);
        failed += !r.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.empty() ? cak::kCriteria : ids.size()) - failed,
                ids.empty() ? static_cast<std::size_t>(cak::kCriteria) : ids.size());
    return failed ? 1 : 0;
}
