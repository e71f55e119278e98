#include "doctest.h"

#include "properties_impl.hpp"

using azc::testing::PropertyResult;

TEST_CASE("random programs: classification, moves, aliases, trace order") {
    PropertyResult r = azc::testing::property_random_programs(1000);
    INFO(r.first_failure);
    CHECK(r.failures == 0);
    CHECK(r.checks > 1000);
}

TEST_CASE("random programs are deterministic, ids included") {
    PropertyResult r = azc::testing::property_program_determinism(200);
    INFO(r.first_failure);
    CHECK(r.failures == 0);
}

TEST_CASE("deep copy: disjoint, isomorphic, and non-mutating, cycles included") {
    PropertyResult r = azc::testing::property_deep_copy(1000);
    INFO(r.first_failure);
    CHECK(r.failures == 0);
    CHECK(r.checks > 1000);
}
