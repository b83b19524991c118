#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "bigtom/util.hpp"

namespace bigtom {

enum class Extracted { option_a, option_b, unparsed };

inline std::string_view extracted_name(Extracted e) {
    switch (e) {
        case Extracted::option_a: return "option_a";
        case Extracted::option_b: return "option_b";
        case Extracted::unparsed: return "unparsed";
    }
    return "";
}

inline std::optional<Extracted> extracted_from_name(std::string_view name) {
    if (name == "option_a") return Extracted::option_a;
    if (name == "option_b") return Extracted::option_b;
    if (name == "unparsed") return Extracted::unparsed;
    return std::nullopt;
}

namespace detail {

inline size_t find_last_answer_tag(const std::string& lowered) {
    return lowered.rfind("answer:");
}

}  // namespace detail

// Matching cascade over a raw model response:
//   1. last "Answer:" tag followed by optional whitespace and "a)"/"b)"
//   2. last "Answer:" tag followed by text equal (normalized) to one option
//   3. exactly one option's full normalized text occurs in the response
//   4. unparsed
inline Extracted extract_answer(const std::string& raw, const std::array<std::string, 2>& options) {
    const std::string lowered = to_lower(raw);

    const size_t tag = detail::find_last_answer_tag(lowered);
    if (tag != std::string::npos) {
        size_t pos = tag + 7;
        while (pos < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[pos]))) ++pos;
        if (pos + 1 < lowered.size() && (lowered[pos] == 'a' || lowered[pos] == 'b') &&
            lowered[pos + 1] == ')') {
            return lowered[pos] == 'a' ? Extracted::option_a : Extracted::option_b;
        }
        // Tail of the tag line, compared against the option texts.
        size_t end = raw.find('\n', tag);
        if (end == std::string::npos) end = raw.size();
        const std::string tail = normalize_text(std::string_view(raw).substr(tag + 7, end - tag - 7));
        if (!tail.empty()) {
            const bool a = tail == normalize_text(options[0]);
            const bool b = tail == normalize_text(options[1]);
            if (a && !b) return Extracted::option_a;
            if (b && !a) return Extracted::option_b;
        }
    }

    const std::string normalized_raw = normalize_text(raw);
    const bool has_a = normalized_raw.find(normalize_text(options[0])) != std::string::npos;
    const bool has_b = normalized_raw.find(normalize_text(options[1])) != std::string::npos;
    if (has_a != has_b) return has_a ? Extracted::option_a : Extracted::option_b;
    return Extracted::unparsed;
}

}  // namespace bigtom
