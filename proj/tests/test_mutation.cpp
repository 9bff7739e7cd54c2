#include <doctest.h>

#include "qrlab/acceptance.hpp"
#include "qrlab/common.hpp"

using namespace qrlab;

// The acceptance suite must actually be sensitive to the defects it guards
// against; these runs inject them through the documented hooks.
TEST_SUITE("mutation") {

TEST_CASE("kernel sign error breaks cross-solver equivalence") {
    acceptance::Options opt;
    opt.inject_d_sign_error = true;
    acceptance::CriterionResult r = acceptance::run_criterion(4, opt);
    CHECK_FALSE(r.pass);
}

TEST_CASE("forced under-truncation breaks the scaling fixed point") {
    acceptance::Options opt;
    opt.force_cutoff = 5;
    acceptance::CriterionResult r = acceptance::run_criterion(6, opt);
    CHECK_FALSE(r.pass);
}

TEST_CASE("fast criteria pass honestly") {
    CHECK(acceptance::run_criterion(5).pass);
    CHECK(acceptance::run_criterion(8).pass);
    CHECK(acceptance::run_criterion(9).pass);
}

TEST_CASE("criterion ids are validated") {
    CHECK_THROWS_AS(acceptance::run_criterion(0), ValidationError);
    CHECK_THROWS_AS(acceptance::run_criterion(11), ValidationError);
}

} // TEST_SUITE
