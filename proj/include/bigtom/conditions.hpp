#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bigtom {

enum class Family { forward_belief, forward_action, backward_belief, initial_belief_probe };
enum class Contingency { true_belief, false_belief };
enum class InitialBelief { with, without };
enum class EventType { causal, random_control };

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::forward_belief: return "forward_belief";
        case Family::forward_action: return "forward_action";
        case Family::backward_belief: return "backward_belief";
        case Family::initial_belief_probe: return "initial_belief_probe";
    }
    return "";
}

inline std::string_view contingency_name(Contingency c) {
    return c == Contingency::true_belief ? "true_belief" : "false_belief";
}

inline std::string_view initial_belief_name(InitialBelief b) {
    return b == InitialBelief::with ? "with" : "without";
}

inline std::string_view event_name(EventType e) {
    return e == EventType::causal ? "causal" : "random_control";
}

// One of the 25 condition descriptors. The probe condition carries no
// contingency, initial-belief flag, or event type.
struct ConditionSpec {
    int condition_id = 0;
    Family family = Family::forward_belief;
    std::optional<Contingency> contingency;
    std::optional<InitialBelief> initial_belief;
    std::optional<EventType> event;

    friend bool operator==(const ConditionSpec&, const ConditionSpec&) = default;
};

// Fixed documented numbering: family-major (forward belief, forward action,
// backward belief), then initial-belief flag (with, without), then event
// (causal, random control), with contingency (TB, FB) varying fastest.
// Ids 1..24 cover the 3x2x2x2 matrix; id 25 is the percept-to-belief probe.
inline std::vector<ConditionSpec> enumerate_conditions() {
    std::vector<ConditionSpec> specs;
    specs.reserve(25);
    int id = 1;
    for (Family family : {Family::forward_belief, Family::forward_action, Family::backward_belief}) {
        for (InitialBelief ib : {InitialBelief::with, InitialBelief::without}) {
            for (EventType event : {EventType::causal, EventType::random_control}) {
                for (Contingency contingency : {Contingency::true_belief, Contingency::false_belief}) {
                    specs.push_back({id++, family, contingency, ib, event});
                }
            }
        }
    }
    specs.push_back({25, Family::initial_belief_probe, std::nullopt, std::nullopt, std::nullopt});
    return specs;
}

inline const ConditionSpec& condition_by_id(int id) {
    static const std::vector<ConditionSpec> specs = enumerate_conditions();
    if (id < 1 || id > 25) throw std::out_of_range("condition_id out of range: " + std::to_string(id));
    return specs[static_cast<size_t>(id) - 1];
}

inline nlohmann::json condition_to_json(const ConditionSpec& c) {
    nlohmann::json j{{"condition_id", c.condition_id}, {"family", family_name(c.family)}};
    if (c.contingency) j["contingency"] = contingency_name(*c.contingency);
    if (c.initial_belief) j["initial_belief"] = initial_belief_name(*c.initial_belief);
    if (c.event) j["event"] = event_name(*c.event);
    return j;
}

inline ConditionSpec condition_from_json(const nlohmann::json& j) {
    // Round-trip through the fixed enumeration keeps records self-consistent.
    const ConditionSpec& spec = condition_by_id(j.at("condition_id").get<int>());
    if (j.at("family").get<std::string>() != family_name(spec.family)) {
        throw std::runtime_error("condition record disagrees with the fixed numbering");
    }
    return spec;
}

}  // namespace bigtom
