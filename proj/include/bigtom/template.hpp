#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "bigtom/slots.hpp"
#include "bigtom/util.hpp"

namespace bigtom {

struct GenerationParams {
    double temperature = 0.0;
    std::vector<std::string> few_shot_ids;

    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

struct CausalTemplate {
    std::string template_id;
    std::map<SlotName, std::string> slots;
    std::string source_model;
    GenerationParams generation_params;

    const std::string& slot(SlotName s) const { return slots.at(s); }

    friend bool operator==(const CausalTemplate&, const CausalTemplate&) = default;
};

struct StructureError {
    enum class Kind { missing_section, missing_slot, duplicate_slot, empty_slot, duplicate_answers };

    Kind kind;
    std::optional<SlotName> slot;
    std::optional<int> line;
    std::string detail;
};

inline std::string_view structure_error_kind_name(StructureError::Kind k) {
    switch (k) {
        case StructureError::Kind::missing_section: return "missing_section";
        case StructureError::Kind::missing_slot: return "missing_slot";
        case StructureError::Kind::duplicate_slot: return "duplicate_slot";
        case StructureError::Kind::empty_slot: return "empty_slot";
        case StructureError::Kind::duplicate_answers: return "duplicate_answers";
    }
    return "";
}

struct ParseResult {
    std::optional<CausalTemplate> tpl;
    std::optional<StructureError> error;
    std::vector<std::string> warnings;

    bool ok() const { return tpl.has_value(); }
};

namespace detail {

// Alias tables are matched case-insensitively against the text before the
// first colon on a line. The generator occasionally drifts between label
// spellings ("Causal Event" vs "An external event"); aliases absorb that
// without loosening the structure check.
inline const std::unordered_map<std::string, SlotName>& slot_alias_map() {
    static const std::unordered_map<std::string, SlotName> map = [] {
        std::unordered_map<std::string, SlotName> m;
        auto add = [&m](std::string_view alias, SlotName s) { m.emplace(to_lower(alias), s); };
        for (SlotName s : all_slots()) add(slot_label(s), s);
        add("percept", SlotName::initial_percept);
        add("initial percept", SlotName::initial_percept);
        add("initial belief", SlotName::initial_belief);
        add("causal event", SlotName::causal_event);
        add("external event", SlotName::causal_event);
        add("aware of the event", SlotName::percept_event_aware);
        add("not aware of the event", SlotName::percept_event_unaware);
        add("belief answer aware", SlotName::belief_answer_aware);
        add("belief answer not aware", SlotName::belief_answer_unaware);
        add("belief unaware", SlotName::belief_answer_unaware);
        add("desire answer aware", SlotName::desire_answer_aware);
        add("desire answer not aware", SlotName::desire_answer_unaware);
        add("desire unaware", SlotName::desire_answer_unaware);
        add("action answer aware", SlotName::action_answer_aware);
        add("action answer not aware", SlotName::action_answer_unaware);
        add("action unaware", SlotName::action_answer_unaware);
        return m;
    }();
    return map;
}

inline const std::unordered_map<std::string, Section>& section_alias_map() {
    static const std::unordered_map<std::string, Section> map = [] {
        std::unordered_map<std::string, Section> m;
        auto add = [&m](std::string_view alias, Section s) { m.emplace(to_lower(alias), s); };
        for (Section s : all_sections()) add(section_header(s), s);
        add("percepts", Section::percepts_of_event);
        return m;
    }();
    return map;
}

}  // namespace detail

// Canonical labeled-line rendering; section headers are bit-exact.
inline std::string render_template_text(const std::map<SlotName, std::string>& slots) {
    std::ostringstream out;
    for (const LayoutElement& el : canonical_layout()) {
        if (el.blank_before) out << "\n";
        if (el.is_section) {
            out << section_header(el.section) << ":\n";
        } else {
            auto it = slots.find(el.slot);
            out << slot_label(el.slot) << ": " << (it == slots.end() ? "" : it->second) << "\n";
        }
    }
    return out.str();
}

inline std::string render_template(const CausalTemplate& t) { return render_template_text(t.slots); }

inline std::string content_hash_id(const std::map<SlotName, std::string>& slots) {
    return "t" + hex64(fnv1a64(render_template_text(slots)));
}

inline ParseResult parse_template(std::string_view raw_completion) {
    ParseResult result;

    std::map<SlotName, std::string> slots;
    std::map<SlotName, int> slot_lines;
    std::map<Section, int> sections_seen;
    std::optional<StructureError> line_error;

    auto note_line_error = [&](StructureError err) {
        if (!line_error || (err.line && line_error->line && *err.line < *line_error->line)) {
            line_error = std::move(err);
        }
    };

    const std::vector<std::string> lines = split_lines(raw_completion);
    for (size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;

        const size_t colon = line.find(':');
        if (colon == std::string::npos) {
            result.warnings.push_back("line " + std::to_string(line_no) + ": ignored unlabeled line");
            continue;
        }
        const std::string label = to_lower(trim(std::string_view(line).substr(0, colon)));
        const std::string value = trim(std::string_view(line).substr(colon + 1));

        const auto& sections = detail::section_alias_map();
        const auto& slot_aliases = detail::slot_alias_map();

        if (auto sit = sections.find(label); sit != sections.end()) {
            sections_seen.emplace(sit->second, line_no);
            if (!value.empty()) {
                result.warnings.push_back("line " + std::to_string(line_no) +
                                          ": text after section header ignored");
            }
            continue;
        }
        if (auto it = slot_aliases.find(label); it != slot_aliases.end()) {
            const SlotName slot = it->second;
            if (slots.count(slot)) {
                note_line_error({StructureError::Kind::duplicate_slot, slot, line_no,
                                 "duplicate line for slot " + std::string(slot_key(slot))});
                continue;
            }
            if (value.empty()) {
                note_line_error({StructureError::Kind::empty_slot, slot, line_no,
                                 "empty value for slot " + std::string(slot_key(slot))});
                continue;
            }
            slots.emplace(slot, value);
            slot_lines.emplace(slot, line_no);
            continue;
        }
        result.warnings.push_back("line " + std::to_string(line_no) + ": ignored unknown label '" +
                                  label + "'");
    }

    if (line_error) {
        result.error = std::move(line_error);
        return result;
    }

    // First missing element in canonical top-to-bottom order.
    for (const LayoutElement& el : canonical_layout()) {
        if (el.is_section) {
            if (!sections_seen.count(el.section)) {
                result.error = StructureError{StructureError::Kind::missing_section, std::nullopt,
                                              std::nullopt,
                                              "missing section '" +
                                                  std::string(section_header(el.section)) + "'"};
                return result;
            }
        } else if (!slots.count(el.slot)) {
            result.error = StructureError{StructureError::Kind::missing_slot, el.slot, std::nullopt,
                                          "missing slot " + std::string(slot_key(el.slot))};
            return result;
        }
    }

    // Answer pairs must be distinguishable.
    const std::pair<SlotName, SlotName> pairs[] = {
        {SlotName::belief_answer_aware, SlotName::belief_answer_unaware},
        {SlotName::action_answer_aware, SlotName::action_answer_unaware},
    };
    for (auto [a, b] : pairs) {
        if (slots.at(a) == slots.at(b)) {
            result.error = StructureError{StructureError::Kind::duplicate_answers, a, std::nullopt,
                                          "identical answers for " + std::string(slot_key(a)) +
                                              " and " + std::string(slot_key(b))};
            return result;
        }
    }

    CausalTemplate tpl;
    tpl.slots = std::move(slots);
    tpl.template_id = content_hash_id(tpl.slots);
    result.tpl = std::move(tpl);
    return result;
}

// Quality gate past the hard structure checks; warnings never block acceptance.
inline std::vector<std::string> validate_template(const CausalTemplate& t,
                                                  size_t char_budget = 300) {
    std::vector<std::string> warnings;
    for (SlotName s : all_slots()) {
        const std::string& value = t.slot(s);
        size_t terminals = 0;
        for (size_t i = 0; i < value.size(); ++i) {
            const char c = value[i];
            if (c == '!' || c == '?') ++terminals;
            // Don't count abbreviation-style periods ("Mrs. Lee").
            if (c == '.' && (i + 1 == value.size() || value[i + 1] == ' ')) ++terminals;
        }
        if (terminals > 1) {
            warnings.push_back("slot " + std::string(slot_key(s)) + " looks multi-sentence");
        }
        if (value.size() > char_budget) {
            warnings.push_back("slot " + std::string(slot_key(s)) + " exceeds " +
                               std::to_string(char_budget) + " chars");
        }
    }
    const std::pair<SlotName, SlotName> pairs[] = {
        {SlotName::belief_answer_aware, SlotName::belief_answer_unaware},
        {SlotName::desire_answer_aware, SlotName::desire_answer_unaware},
        {SlotName::action_answer_aware, SlotName::action_answer_unaware},
    };
    for (auto [a, b] : pairs) {
        if (t.slot(a) != t.slot(b) && normalize_text(t.slot(a)) == normalize_text(t.slot(b))) {
            warnings.push_back("answers " + std::string(slot_key(a)) + "/" +
                               std::string(slot_key(b)) + " differ only in case/whitespace");
        }
    }
    return warnings;
}

inline nlohmann::json template_to_json(const CausalTemplate& t) {
    nlohmann::json slots = nlohmann::json::object();
    for (SlotName s : all_slots()) slots[std::string(slot_key(s))] = t.slot(s);
    return nlohmann::json{
        {"template_id", t.template_id},
        {"slots", std::move(slots)},
        {"source_model", t.source_model},
        {"generation_params",
         {{"temperature", t.generation_params.temperature},
          {"few_shot_ids", t.generation_params.few_shot_ids}}},
    };
}

inline CausalTemplate template_from_json(const nlohmann::json& j) {
    CausalTemplate t;
    t.template_id = j.at("template_id").get<std::string>();
    for (const auto& [key, value] : j.at("slots").items()) {
        auto slot = slot_from_key(key);
        if (!slot) throw std::runtime_error("unknown slot key '" + key + "'");
        t.slots[*slot] = value.get<std::string>();
    }
    if (t.slots.size() != kSlotCount) throw std::runtime_error("template record is missing slots");
    t.source_model = j.value("source_model", "");
    if (j.contains("generation_params")) {
        const auto& p = j["generation_params"];
        t.generation_params.temperature = p.value("temperature", 0.0);
        t.generation_params.few_shot_ids =
            p.value("few_shot_ids", std::vector<std::string>{});
    }
    return t;
}

// Line-delimited store: one JSON object per line; read∘write is the identity.
inline void write_templates(const std::string& path, const std::vector<CausalTemplate>& templates) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const CausalTemplate& t : templates) {
        out << template_to_json(t).dump() << "\n";
    }
}

inline std::vector<CausalTemplate> read_templates(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<CausalTemplate> templates;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            templates.push_back(template_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed template record: " + e.what());
        }
    }
    return templates;
}

}  // namespace bigtom
