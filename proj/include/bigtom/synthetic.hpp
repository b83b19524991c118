#pragma once

#include <array>
#include <string>

#include "bigtom/template.hpp"

namespace bigtom {

// Deterministic stand-in corpus for offline pipeline runs: distinct, fully
// structured templates indexed by a counter. Used by the mock generation
// backend; not meant to be interesting stories.
inline CausalTemplate make_synthetic_template(int index) {
    static const std::array<std::string, 10> names = {
        "Odalys", "Tenzin", "Rafferty", "Imara", "Bogdan",
        "Suvi",   "Kelechi", "Anouk",   "Tariq", "Milena"};
    static const std::array<std::string, 8> objects = {
        "kettle", "ledger", "lantern", "telescope", "violin", "kiln", "compass", "loom"};

    const std::string& name = names[static_cast<size_t>(index) % names.size()];
    const std::string& object = objects[(static_cast<size_t>(index) / names.size()) % objects.size()];
    const std::string tag = std::to_string(index);

    std::map<SlotName, std::string> slots;
    slots[SlotName::context] =
        name + " runs workshop number " + tag + " at the edge of town.";
    slots[SlotName::desire] = name + " wants to use the " + object + " for today's work.";
    slots[SlotName::initial_percept] =
        name + " checks the " + object + " and finds it in working order.";
    slots[SlotName::initial_belief] = name + " believes the " + object + " is in working order.";
    slots[SlotName::causal_event] =
        "A sudden storm damages the " + object + " while nobody is in workshop " + tag + ".";
    slots[SlotName::percept_event_aware] = name + " sees the storm damaging the " + object + ".";
    slots[SlotName::percept_event_unaware] =
        name + " does not see the storm damaging the " + object + ".";
    slots[SlotName::action_new_state] = name + " sets about repairing the " + object + ".";
    slots[SlotName::action_initial_state] = name + " starts working with the " + object + ".";
    slots[SlotName::belief_question] =
        "Does " + name + " believe the " + object + " is in working order or damaged?";
    slots[SlotName::desire_question] =
        "Does " + name + " want to use the " + object + " or repair it first?";
    slots[SlotName::action_question] = "What will " + name + " do?";
    slots[SlotName::belief_answer_aware] = name + " believes the " + object + " is damaged.";
    slots[SlotName::belief_answer_unaware] =
        name + " believes the " + object + " is in working order.";
    slots[SlotName::desire_answer_aware] = name + " wants to repair the " + object + " first.";
    slots[SlotName::desire_answer_unaware] = name + " wants to use the " + object + ".";
    slots[SlotName::action_answer_aware] = name + " will repair the " + object + ".";
    slots[SlotName::action_answer_unaware] = name + " will start working with the " + object + ".";
    slots[SlotName::random_event] =
        "A delivery cart rolls past workshop " + tag + " ringing its bell.";
    slots[SlotName::random_percept_aware] = name + " hears the delivery cart's bell.";
    slots[SlotName::random_percept_unaware] = name + " does not hear the delivery cart's bell.";

    CausalTemplate t;
    t.slots = std::move(slots);
    t.template_id = content_hash_id(t.slots);
    t.source_model = "mock-synthetic";
    return t;
}

}  // namespace bigtom
