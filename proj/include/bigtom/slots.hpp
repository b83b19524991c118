#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace bigtom {

// The 21 sentence slots of one populated causal template. Each slot maps to
// exactly one labeled line of the completion format.
enum class SlotName {
    context,
    desire,
    initial_percept,
    initial_belief,
    causal_event,
    percept_event_aware,
    percept_event_unaware,
    action_new_state,
    action_initial_state,
    belief_question,
    desire_question,
    action_question,
    belief_answer_aware,
    belief_answer_unaware,
    desire_answer_aware,
    desire_answer_unaware,
    action_answer_aware,
    action_answer_unaware,
    random_event,
    random_percept_aware,
    random_percept_unaware,
};

inline constexpr int kSlotCount = 21;

inline constexpr std::array<SlotName, kSlotCount> all_slots() {
    return {
        SlotName::context,
        SlotName::desire,
        SlotName::initial_percept,
        SlotName::initial_belief,
        SlotName::causal_event,
        SlotName::percept_event_aware,
        SlotName::percept_event_unaware,
        SlotName::action_new_state,
        SlotName::action_initial_state,
        SlotName::belief_question,
        SlotName::desire_question,
        SlotName::action_question,
        SlotName::belief_answer_aware,
        SlotName::belief_answer_unaware,
        SlotName::desire_answer_aware,
        SlotName::desire_answer_unaware,
        SlotName::action_answer_aware,
        SlotName::action_answer_unaware,
        SlotName::random_event,
        SlotName::random_percept_aware,
        SlotName::random_percept_unaware,
    };
}

// Stable snake_case key used in persisted records.
inline std::string_view slot_key(SlotName s) {
    switch (s) {
        case SlotName::context: return "context";
        case SlotName::desire: return "desire";
        case SlotName::initial_percept: return "initial_percept";
        case SlotName::initial_belief: return "initial_belief";
        case SlotName::causal_event: return "causal_event";
        case SlotName::percept_event_aware: return "percept_event_aware";
        case SlotName::percept_event_unaware: return "percept_event_unaware";
        case SlotName::action_new_state: return "action_new_state";
        case SlotName::action_initial_state: return "action_initial_state";
        case SlotName::belief_question: return "belief_question";
        case SlotName::desire_question: return "desire_question";
        case SlotName::action_question: return "action_question";
        case SlotName::belief_answer_aware: return "belief_answer_aware";
        case SlotName::belief_answer_unaware: return "belief_answer_unaware";
        case SlotName::desire_answer_aware: return "desire_answer_aware";
        case SlotName::desire_answer_unaware: return "desire_answer_unaware";
        case SlotName::action_answer_aware: return "action_answer_aware";
        case SlotName::action_answer_unaware: return "action_answer_unaware";
        case SlotName::random_event: return "random_event";
        case SlotName::random_percept_aware: return "random_percept_aware";
        case SlotName::random_percept_unaware: return "random_percept_unaware";
    }
    return "";
}

inline std::optional<SlotName> slot_from_key(std::string_view key) {
    for (SlotName s : all_slots()) {
        if (slot_key(s) == key) return s;
    }
    return std::nullopt;
}

// Canonical label of the slot's line in the completion text.
inline std::string_view slot_label(SlotName s) {
    switch (s) {
        case SlotName::context: return "Context";
        case SlotName::desire: return "Desire";
        case SlotName::initial_percept: return "Perception cues";
        case SlotName::initial_belief: return "Belief";
        case SlotName::causal_event: return "An external event";
        case SlotName::percept_event_aware: return "Aware of event";
        case SlotName::percept_event_unaware: return "Not aware of event";
        case SlotName::action_new_state: return "Action given new state";
        case SlotName::action_initial_state: return "Action given initial state";
        case SlotName::belief_question: return "Belief Question";
        case SlotName::desire_question: return "Desire Question";
        case SlotName::action_question: return "Action Question";
        case SlotName::belief_answer_aware: return "Belief Aware";
        case SlotName::belief_answer_unaware: return "Belief not Aware";
        case SlotName::desire_answer_aware: return "Desire Aware";
        case SlotName::desire_answer_unaware: return "Desire not Aware";
        case SlotName::action_answer_aware: return "Action Aware";
        case SlotName::action_answer_unaware: return "Action not Aware";
        case SlotName::random_event: return "Random Event";
        case SlotName::random_percept_aware: return "Aware of random event";
        case SlotName::random_percept_unaware: return "Not aware of random event";
    }
    return "";
}

// Section headers of the completion format, in document order.
enum class Section {
    story,
    percepts_of_event,
    actions,
    questions,
    answers_aware,
    answers_unaware,
    percepts_of_random_event,
};

inline constexpr std::array<Section, 7> all_sections() {
    return {Section::story,          Section::percepts_of_event,
            Section::actions,        Section::questions,
            Section::answers_aware,  Section::answers_unaware,
            Section::percepts_of_random_event};
}

inline std::string_view section_header(Section s) {
    switch (s) {
        case Section::story: return "Story";
        case Section::percepts_of_event: return "Percepts of event";
        case Section::actions: return "Actions";
        case Section::questions: return "Questions";
        case Section::answers_aware:
            return "Answers given that Agent is Aware of the new object state";
        case Section::answers_unaware:
            return "Answers given that Agent is NOT Aware of the new object state";
        case Section::percepts_of_random_event: return "Percepts of random event";
    }
    return "";
}

// Elements of the canonical document, top to bottom. random_event is a
// labeled line outside any section.
struct LayoutElement {
    bool is_section;
    Section section;
    SlotName slot;
    bool blank_before;
};

inline const std::array<LayoutElement, 28>& canonical_layout() {
    static const std::array<LayoutElement, 28> layout = {{
        {true, Section::story, SlotName::context, false},
        {false, Section::story, SlotName::context, false},
        {false, Section::story, SlotName::desire, false},
        {false, Section::story, SlotName::initial_percept, false},
        {false, Section::story, SlotName::initial_belief, false},
        {false, Section::story, SlotName::causal_event, false},
        {true, Section::percepts_of_event, SlotName::context, true},
        {false, Section::percepts_of_event, SlotName::percept_event_aware, false},
        {false, Section::percepts_of_event, SlotName::percept_event_unaware, false},
        {true, Section::actions, SlotName::context, true},
        {false, Section::actions, SlotName::action_new_state, false},
        {false, Section::actions, SlotName::action_initial_state, false},
        {true, Section::questions, SlotName::context, true},
        {false, Section::questions, SlotName::belief_question, false},
        {false, Section::questions, SlotName::desire_question, false},
        {false, Section::questions, SlotName::action_question, false},
        {true, Section::answers_aware, SlotName::context, true},
        {false, Section::answers_aware, SlotName::belief_answer_aware, false},
        {false, Section::answers_aware, SlotName::desire_answer_aware, false},
        {false, Section::answers_aware, SlotName::action_answer_aware, false},
        {true, Section::answers_unaware, SlotName::context, true},
        {false, Section::answers_unaware, SlotName::belief_answer_unaware, false},
        {false, Section::answers_unaware, SlotName::desire_answer_unaware, false},
        {false, Section::answers_unaware, SlotName::action_answer_unaware, false},
        {false, Section::answers_unaware, SlotName::random_event, true},
        {true, Section::percepts_of_random_event, SlotName::context, true},
        {false, Section::percepts_of_random_event, SlotName::random_percept_aware, false},
        {false, Section::percepts_of_random_event, SlotName::random_percept_unaware, false},
    }};
    return layout;
}

}  // namespace bigtom
