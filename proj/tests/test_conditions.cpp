#include <doctest.h>

#include <set>

#include "bigtom/conditions.hpp"

using namespace bigtom;

TEST_CASE("the condition matrix has 25 entries with dense ids") {
    const std::vector<ConditionSpec> specs = enumerate_conditions();
    REQUIRE(specs.size() == 25);
    std::set<int> ids;
    for (const ConditionSpec& spec : specs) ids.insert(spec.condition_id);
    CHECK(ids.size() == 25);
    CHECK(*ids.begin() == 1);
    CHECK(*ids.rbegin() == 25);
    for (size_t i = 0; i < specs.size(); ++i) {
        CHECK(specs[i].condition_id == static_cast<int>(i) + 1);
    }
}

TEST_CASE("every family x flag x event x contingency combination appears once") {
    // Brute-force cardinality oracle, independent of the enumeration order.
    const std::vector<ConditionSpec> specs = enumerate_conditions();
    int probes = 0;
    for (Family family : {Family::forward_belief, Family::forward_action, Family::backward_belief}) {
        for (Contingency contingency : {Contingency::true_belief, Contingency::false_belief}) {
            for (InitialBelief ib : {InitialBelief::with, InitialBelief::without}) {
                for (EventType event : {EventType::causal, EventType::random_control}) {
                    int found = 0;
                    for (const ConditionSpec& spec : specs) {
                        if (spec.family == family && spec.contingency == contingency &&
                            spec.initial_belief == ib && spec.event == event) {
                            ++found;
                        }
                    }
                    CHECK(found == 1);
                }
            }
        }
    }
    for (const ConditionSpec& spec : specs) {
        if (spec.family == Family::initial_belief_probe) {
            ++probes;
            CHECK_FALSE(spec.contingency.has_value());
            CHECK_FALSE(spec.initial_belief.has_value());
            CHECK_FALSE(spec.event.has_value());
        } else {
            CHECK(spec.contingency.has_value());
            CHECK(spec.initial_belief.has_value());
            CHECK(spec.event.has_value());
        }
    }
    CHECK(probes == 1);
}

TEST_CASE("filtering by family yields 8 conditions") {
    int count = 0;
    for (const ConditionSpec& spec : enumerate_conditions()) {
        if (spec.family == Family::forward_belief) ++count;
    }
    CHECK(count == 8);
}

TEST_CASE("condition_by_id agrees with the enumeration and bounds-checks") {
    for (const ConditionSpec& spec : enumerate_conditions()) {
        CHECK(condition_by_id(spec.condition_id) == spec);
    }
    CHECK_THROWS_AS(condition_by_id(0), std::out_of_range);
    CHECK_THROWS_AS(condition_by_id(26), std::out_of_range);
}

TEST_CASE("condition records round-trip through json and reject tampering") {
    for (const ConditionSpec& spec : enumerate_conditions()) {
        CHECK(condition_from_json(condition_to_json(spec)) == spec);
    }
    nlohmann::json j = condition_to_json(condition_by_id(3));
    j["family"] = "backward_belief";
    CHECK_THROWS_AS(condition_from_json(j), std::runtime_error);
}
