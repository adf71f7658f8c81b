#include <doctest.h>

#include "cbs/acceptance.hpp"
#include "cbs/angular.hpp"

using namespace cbs;

TEST_CASE("corrupted Clebsch-Gordan table fails the elastic criterion") {
    testing::set_clebsch_gordan_fault(1e-3);
    const CriterionResult bad = run_criterion("A1", AcceptanceOptions{});
    testing::set_clebsch_gordan_fault(0.0);
    CHECK_FALSE(bad.passed);
    CHECK(bad.detail.find("elastic rel error") != std::string::npos);

    const CriterionResult good = run_criterion("A1", AcceptanceOptions{});
    CHECK(good.passed);
    CHECK(good.measured == run_criterion("A1", AcceptanceOptions{}).measured);
}

TEST_CASE("unknown criterion") { CHECK_THROWS_AS(run_criterion("A10", AcceptanceOptions{}), std::invalid_argument); }
