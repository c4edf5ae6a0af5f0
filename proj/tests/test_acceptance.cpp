#include "doctest.h"

#include "cak/acceptance.hpp"
#include "cak/error.hpp"

using namespace cak;

TEST_CASE("quick suite passes on the cheap criteria") {
    SuiteOptions o;
    o.level = SuiteLevel::Quick;
    for (auto& r : run_suite({3, 5, 6, 7, 8, 9, 11}, o)) CHECK_MESSAGE(r.pass, result_line(r));
}

TEST_CASE("parallel sweep reports exactly what the serial one does") {
    SuiteOptions serial;
    serial.level = SuiteLevel::Quick;
    serial.seed = 7;
    SuiteOptions par = serial;
    par.jobs = 3;
    par.parallel_games = true;
    auto a = run_suite({4, 5, 8, 9, 11}, serial), b = run_suite({4, 5, 8, 9, 11}, par);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].pass == b[i].pass);
        CHECK(a[i].detail == b[i].detail);
    }
}

TEST_CASE("result lines") {
    CriterionResult r{4, "closures", true, "30 checks", 0.5};
    CHECK(result_line(r) == "PASS  [4] closures: 30 checks");
    r.pass = false;
    CHECK(result_line(r).rfind("FAIL  [4]", 0) == 0);
    CHECK_THROWS_AS(run_criterion(12, {}), Error);
}
