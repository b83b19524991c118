#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bigtom/backend.hpp"
#include "bigtom/compose.hpp"

namespace bigtom {

enum class PromptStyle { zero_shot, zero_shot_cot, one_shot, one_shot_cot };

inline constexpr std::array<PromptStyle, 4> all_prompt_styles() {
    return {PromptStyle::zero_shot, PromptStyle::zero_shot_cot, PromptStyle::one_shot,
            PromptStyle::one_shot_cot};
}

inline std::string_view prompt_style_name(PromptStyle s) {
    switch (s) {
        case PromptStyle::zero_shot: return "0-shot";
        case PromptStyle::zero_shot_cot: return "0-shot-cot";
        case PromptStyle::one_shot: return "1-shot";
        case PromptStyle::one_shot_cot: return "1-shot-cot";
    }
    return "";
}

inline std::optional<PromptStyle> prompt_style_from_name(std::string_view name) {
    for (PromptStyle s : all_prompt_styles()) {
        if (prompt_style_name(s) == name) return s;
    }
    return std::nullopt;
}

// Instruction fixtures. The CoT instruction differs by model kind; the chat
// wording additionally forbids abstaining.
inline constexpr std::string_view kInstructionDirect =
    "Answer the questions based on the context. Keep your answer concise, few words are enough, "
    "maximum one sentence. Answer as 'Answer:<option>)<answer>'";

inline constexpr std::string_view kInstructionCotText =
    "Answer the questions based on the context. Think through your reasoning before answering in "
    "'Thought:'. Write your answer as Answer:<option>)<answer>'.";

inline constexpr std::string_view kInstructionCotChat =
    "Answer the questions based on the context. Reason step by step before answering in "
    "'Thought: Let's think step by step'. Write your final answer as 'Answer:<option>)<answer>'. "
    "Always pick an option, do not say none of the above or that there is not enough information.";

// One-shot exemplar (forward belief, false belief condition).
inline constexpr std::string_view kOneShotQuestionBlock =
    "Story: Kofi is a fisherman from a small village in Ghana. He wants to catch enough fish "
    "today to provide for his family and sell the surplus at the market. Kofi repaired his "
    "fishing net last night. While Kofi is away from his boat, a group of monkeys comes and "
    "plays with the fishing net, tearing it apart. Kofi does not see the monkeys damaging his "
    "fishing net\n"
    "\n"
    "Question: Does Kofi believe his fishing net is in good condition or torn apart?\n"
    "\n"
    "Choose one of the following:\n"
    "\n"
    "a)Kofi believes his fishing net is in good condition.\n"
    "\n"
    "b)Kofi believes his fishing net is torn apart.";

inline constexpr std::string_view kOneShotAnswer =
    "Answer: a)Kofi believes his fishing net is in good condition.";

inline constexpr std::string_view kOneShotThought =
    "Thought: Let's think step by step:\n"
    "\n"
    "1) Kofi repaired his fishing net last night. So last night he believes that his net is "
    "fixed.\n"
    "\n"
    "2) While Kofi is away from his boat, a group of monkeys comes and plays with the fishing "
    "net, tearing it apart.\n"
    "\n"
    "3) Kofi does not see the monkeys damaging his fishing net. So, his belief about his net "
    "stays the same. He thinks that it is fixed.\n"
    "\n"
    "4) Does Kofi believe his fishing net is in good condition or torn apart?\n"
    "\n"
    "5) Kofi believes his fishing net is in good condition.";

inline std::string instruction_text(PromptStyle style, ModelKind kind) {
    switch (style) {
        case PromptStyle::zero_shot:
        case PromptStyle::one_shot: return std::string(kInstructionDirect);
        case PromptStyle::zero_shot_cot:
            return std::string(kind == ModelKind::chat ? kInstructionCotChat : kInstructionCotText);
        case PromptStyle::one_shot_cot: return std::string(kInstructionCotText);
    }
    return "";
}

inline std::string question_block(const TestItem& item) {
    return "Story: " + story_paragraph(item) + "\n\nQuestion: " + item.question +
           "\n\nChoose one of the following:\n\na)" + item.options[0] + "\n\nb)" + item.options[1];
}

inline std::string one_shot_exemplar(PromptStyle style) {
    std::string exemplar(kOneShotQuestionBlock);
    if (style == PromptStyle::one_shot_cot) {
        exemplar += "\n\n";
        exemplar += kOneShotThought;
    }
    exemplar += "\n\n";
    exemplar += kOneShotAnswer;
    return exemplar;
}

// For chat backends the instruction is the system message and the question
// block (with the exemplar prepended for 1-shot styles) the user message. For
// text backends everything is one concatenated prompt.
inline std::vector<Message> build_eval_prompt(const TestItem& item, PromptStyle style,
                                              ModelKind kind) {
    const std::string instruction = instruction_text(style, kind);
    const bool one_shot =
        style == PromptStyle::one_shot || style == PromptStyle::one_shot_cot;

    std::string user = question_block(item);
    if (one_shot) user = one_shot_exemplar(style) + "\n\n" + user;

    if (kind == ModelKind::chat) {
        return {{"system", instruction}, {"user", user}};
    }
    return {{"prompt", instruction + "\n\n" + user}};
}

inline std::string prompt_as_text(const std::vector<Message>& messages) {
    std::string out;
    for (const Message& m : messages) {
        if (!out.empty()) out += "\n\n";
        out += m.content;
    }
    return out;
}

}  // namespace bigtom
