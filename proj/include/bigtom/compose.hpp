#pragma once

#include <array>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bigtom/conditions.hpp"
#include "bigtom/template.hpp"
#include "bigtom/util.hpp"

namespace bigtom {

struct TestItem {
    std::string item_id;
    std::string template_id;
    ConditionSpec condition;
    std::vector<std::string> story;
    std::string question;
    std::array<std::string, 2> options;
    int correct_index = 0;
    uint64_t option_seed = 0;

    friend bool operator==(const TestItem&, const TestItem&) = default;
};

// Story sentences joined with single spaces, as presented to models.
inline std::string story_paragraph(const TestItem& item) {
    std::string out;
    for (const std::string& sentence : item.story) {
        if (!out.empty()) out += ' ';
        out += sentence;
    }
    return out;
}

inline TestItem compose_item(const CausalTemplate& t, const ConditionSpec& spec,
                             uint64_t option_seed) {
    TestItem item;
    item.template_id = t.template_id;
    item.condition = spec;
    item.option_seed = option_seed;
    {
        char suffix[8];
        std::snprintf(suffix, sizeof(suffix), "-c%02d", spec.condition_id);
        item.item_id = t.template_id + suffix;
    }

    item.story = {t.slot(SlotName::context), t.slot(SlotName::desire),
                  t.slot(SlotName::initial_percept)};

    std::string correct_text;
    std::array<std::string, 2> pair;  // {aware, unaware}

    if (spec.family == Family::initial_belief_probe) {
        // Story stops at the initial percept; the probe asks for the belief
        // those percepts give rise to.
        item.question = t.slot(SlotName::belief_question);
        pair = {t.slot(SlotName::belief_answer_aware), t.slot(SlotName::belief_answer_unaware)};
        correct_text = pair[1];
    } else {
        const bool true_belief = *spec.contingency == Contingency::true_belief;
        const bool causal = *spec.event == EventType::causal;

        if (*spec.initial_belief == InitialBelief::with) {
            item.story.push_back(t.slot(SlotName::initial_belief));
        }
        item.story.push_back(t.slot(causal ? SlotName::causal_event : SlotName::random_event));

        if (spec.family == Family::backward_belief) {
            // The observed action replaces any percept-of-event sentence. With
            // a random event there is no new state, so both contingencies keep
            // the initial-state action.
            const SlotName action = (causal && true_belief) ? SlotName::action_new_state
                                                            : SlotName::action_initial_state;
            item.story.push_back(t.slot(action));
        } else {
            SlotName percept;
            if (causal) {
                percept = true_belief ? SlotName::percept_event_aware
                                      : SlotName::percept_event_unaware;
            } else {
                percept = true_belief ? SlotName::random_percept_aware
                                      : SlotName::random_percept_unaware;
            }
            item.story.push_back(t.slot(percept));
        }

        if (spec.family == Family::forward_action) {
            item.question = t.slot(SlotName::action_question);
            pair = {t.slot(SlotName::action_answer_aware), t.slot(SlotName::action_answer_unaware)};
        } else {
            item.question = t.slot(SlotName::belief_question);
            pair = {t.slot(SlotName::belief_answer_aware), t.slot(SlotName::belief_answer_unaware)};
        }
        // A random event does not change the state, so the initial-state
        // option stays correct in both contingencies.
        correct_text = (causal && true_belief) ? pair[0] : pair[1];
    }

    if (pair[0] == pair[1]) {
        throw std::runtime_error("indistinguishable answer options in template " + t.template_id);
    }

    std::mt19937_64 rng(option_seed);
    const bool swap = (rng() & 1) != 0;
    item.options = swap ? std::array<std::string, 2>{pair[1], pair[0]} : pair;
    item.correct_index = (item.options[0] == correct_text) ? 0 : 1;
    return item;
}

inline uint64_t item_option_seed(uint64_t base_seed, const std::string& template_id,
                                 int condition_id) {
    return derive_seed(base_seed, template_id, static_cast<uint64_t>(condition_id));
}

inline std::vector<TestItem> compose_all(const CausalTemplate& t, uint64_t base_seed) {
    std::vector<TestItem> items;
    items.reserve(25);
    for (const ConditionSpec& spec : enumerate_conditions()) {
        items.push_back(
            compose_item(t, spec, item_option_seed(base_seed, t.template_id, spec.condition_id)));
    }
    return items;
}

inline nlohmann::json item_to_json(const TestItem& item) {
    return nlohmann::json{
        {"item_id", item.item_id},
        {"template_id", item.template_id},
        {"condition", condition_to_json(item.condition)},
        {"story", item.story},
        {"question", item.question},
        {"options", item.options},
        {"correct_index", item.correct_index},
        {"option_seed", item.option_seed},
    };
}

inline TestItem item_from_json(const nlohmann::json& j) {
    TestItem item;
    item.item_id = j.at("item_id").get<std::string>();
    item.template_id = j.at("template_id").get<std::string>();
    item.condition = condition_from_json(j.at("condition"));
    item.story = j.at("story").get<std::vector<std::string>>();
    item.question = j.at("question").get<std::string>();
    auto opts = j.at("options").get<std::vector<std::string>>();
    if (opts.size() != 2) throw std::runtime_error("item must have exactly 2 options");
    item.options = {opts[0], opts[1]};
    item.correct_index = j.at("correct_index").get<int>();
    if (item.correct_index != 0 && item.correct_index != 1) {
        throw std::runtime_error("correct_index must be 0 or 1");
    }
    item.option_seed = j.at("option_seed").get<uint64_t>();
    return item;
}

inline void write_items(const std::string& path, const std::vector<TestItem>& items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const TestItem& item : items) out << item_to_json(item).dump() << "\n";
}

inline std::vector<TestItem> read_items(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<TestItem> items;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            items.push_back(item_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed item record: " + e.what());
        }
    }
    return items;
}

}  // namespace bigtom
