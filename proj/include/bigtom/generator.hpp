#pragma once

#include <algorithm>
#include <filesystem>
#include <future>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bigtom/backend.hpp"
#include "bigtom/template.hpp"
#include "bigtom/util.hpp"

namespace bigtom {

inline constexpr std::string_view kGenerationInstructions =
    "Generate new stories based on the following template. Be creative and make the stories "
    "diverse (from different contexts). Use uncommon names and make the stories different from "
    "the examples.\n"
    "\n"
    "Story:\n"
    "1. Context (An agent is in a specific situation or location).\n"
    "2. Prior: Desire (The agent has a specific goal or intention).\n"
    "3. Percept: Perception cues (The agent perceives an object in a specific state without "
    "mentioning the agent's knowledge or belief).\n"
    "4. Belief: Belief (The agent believes the object is in the same state mentioned in the "
    "previous sentence).\n"
    "5. Causal Event: An external event changes the object's state to another extreme state "
    "(without mentioning the agent).\n"
    "\n"
    "Percepts:\n"
    "Aware of event: Agent perceives the event.\n"
    "Not aware of event: Agent does not perceive the event.\n"
    "\n"
    "Actions:\n"
    "Action given new state: An action that the agent anticipates performing in response to the "
    "object's altered state.\n"
    "Action given initial state: An action the agent might consider if the object were to "
    "persist in its original state.\n"
    "\n"
    "Questions:\n"
    "Belief Question.\n"
    "Desire Question.\n"
    "Action Question.\n"
    "\n"
    "Answers:\n"
    "Belief Answers:\n"
    "Aware: Answer.\n"
    "Not Aware: Answer.\n"
    "Desire Answers:\n"
    "Aware: Answer.\n"
    "Not Aware: Answer.\n"
    "Action Answers:\n"
    "Aware: Answer.\n"
    "Not Aware: Answer.\n"
    "\n"
    "Random Event.\n"
    "\n"
    "Percepts of random event:\n"
    "Agent is aware of random event.\n"
    "Agent is not aware of random event.\n";

// Instruction block followed by each exemplar in canonical rendering,
// separated by blank lines.
inline std::string build_generation_prompt(const std::vector<CausalTemplate>& exemplars) {
    std::string prompt(kGenerationInstructions);
    for (const CausalTemplate& t : exemplars) {
        prompt += "\n";
        prompt += render_template(t);
    }
    return prompt;
}

struct GenerationConfig {
    std::string model;
    double temperature = 0.5;
    int completions_per_call = 3;
    std::vector<CausalTemplate> few_shot_pool;
    int few_shot_count = 3;
    int target_count = 1;
    uint64_t seed = 0;
    int max_completion_tokens = 1200;
    // 0 means the default budget: 4x the calls needed at zero reject rate.
    int call_budget = 0;
    int parallelism = 4;
    std::string cache_dir;  // empty disables completion caching
};

struct RejectedCompletion {
    std::string raw_text;
    StructureError error;
};

struct GenerationReport {
    std::vector<CausalTemplate> accepted;
    std::vector<RejectedCompletion> rejected;
    int calls_made = 0;
    int cache_hits = 0;
    int duplicates = 0;
    std::vector<std::string> warnings;
    bool shortfall = false;
};

namespace detail {

// A completion may hold several stories; each "Story:" line starts a new one.
inline std::vector<std::string> split_story_segments(const std::string& completion) {
    std::vector<std::string> segments;
    const std::vector<std::string> lines = split_lines(completion);
    std::string current;
    bool seen_story = false;
    for (const std::string& line : lines) {
        if (to_lower(trim(line)).rfind("story:", 0) == 0) {
            if (seen_story && !trim(current).empty()) segments.push_back(current);
            current.clear();
            seen_story = true;
        }
        current += line;
        current += '\n';
    }
    if (!trim(current).empty()) segments.push_back(current);
    return segments;
}

inline std::vector<size_t> sample_without_replacement(size_t pool_size, size_t count,
                                                      uint64_t seed) {
    std::vector<size_t> indices(pool_size);
    std::iota(indices.begin(), indices.end(), size_t{0});
    std::mt19937_64 rng(seed);
    for (size_t i = 0; i < count && i + 1 < pool_size; ++i) {
        size_t j = i + rng() % (pool_size - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(std::min(count, pool_size));
    return indices;
}

}  // namespace detail

inline void validate_generation_config(const GenerationConfig& config) {
    if (config.few_shot_count > static_cast<int>(config.few_shot_pool.size())) {
        throw std::invalid_argument("few_shot_count exceeds few-shot pool size");
    }
    if (config.completions_per_call < 1 || config.target_count < 1 || config.few_shot_count < 0) {
        throw std::invalid_argument("generation counts must be positive");
    }
    if (config.temperature < 0.0 || config.temperature > 1.0) {
        throw std::invalid_argument("temperature must be in [0,1]");
    }
}

inline GenerationReport populate_templates(const GenerationConfig& config, ModelBackend& backend) {
    validate_generation_config(config);

    int budget = config.call_budget;
    if (budget <= 0) {
        budget = std::max(1, 4 * config.target_count / config.completions_per_call);
    }

    GenerationReport report;
    std::set<std::string> seen_ids;

    if (!config.cache_dir.empty()) std::filesystem::create_directories(config.cache_dir);

    int call_index = 0;
    while (static_cast<int>(report.accepted.size()) < config.target_count && call_index < budget) {
        const int wave = std::min(config.parallelism, budget - call_index);

        struct CallResult {
            std::vector<std::string> completions;
            std::vector<std::string> few_shot_ids;
            bool cached = false;
        };
        std::vector<std::future<CallResult>> futures;
        for (int w = 0; w < wave; ++w) {
            const int idx = call_index + w;
            futures.push_back(std::async(std::launch::async, [&, idx]() {
                CallResult result;
                auto picks = detail::sample_without_replacement(
                    config.few_shot_pool.size(), static_cast<size_t>(config.few_shot_count),
                    derive_seed(config.seed, "few_shot", static_cast<uint64_t>(idx)));
                std::vector<CausalTemplate> exemplars;
                for (size_t p : picks) {
                    exemplars.push_back(config.few_shot_pool[p]);
                    result.few_shot_ids.push_back(config.few_shot_pool[p].template_id);
                }
                const std::string prompt = build_generation_prompt(exemplars);

                std::string cache_path;
                if (!config.cache_dir.empty()) {
                    const std::string key = hex64(fnv1a64(
                        backend.identity() + "|" + hex64(fnv1a64(prompt)) + "|" +
                        std::to_string(config.temperature) + "|" +
                        std::to_string(config.completions_per_call) + "|" + std::to_string(idx)));
                    cache_path = config.cache_dir + "/gen-" + key + ".json";
                    if (std::filesystem::exists(cache_path)) {
                        result.completions = nlohmann::json::parse(read_file(cache_path))
                                                 .get<std::vector<std::string>>();
                        result.cached = true;
                        return result;
                    }
                }

                BackendRequest request;
                request.kind = backend.kind();
                request.temperature = config.temperature;
                request.max_tokens = config.max_completion_tokens;
                request.n = config.completions_per_call;
                if (request.kind == ModelKind::chat) {
                    request.messages = {{"user", prompt}};
                } else {
                    request.prompt = prompt;
                }
                result.completions = backend.complete(request);
                if (!cache_path.empty()) {
                    write_file(cache_path, nlohmann::json(result.completions).dump());
                }
                return result;
            }));
        }

        // Collect in call order so reports are deterministic under the mock.
        for (auto& future : futures) {
            CallResult result = future.get();
            if (result.cached) {
                ++report.cache_hits;
            } else {
                ++report.calls_made;
            }
            for (const std::string& completion : result.completions) {
                for (const std::string& segment : detail::split_story_segments(completion)) {
                    ParseResult parsed = parse_template(segment);
                    for (std::string& w : parsed.warnings) report.warnings.push_back(std::move(w));
                    if (!parsed.ok()) {
                        report.rejected.push_back({segment, *parsed.error});
                        continue;
                    }
                    CausalTemplate tpl = std::move(*parsed.tpl);
                    if (!seen_ids.insert(tpl.template_id).second) {
                        ++report.duplicates;
                        continue;
                    }
                    tpl.source_model = backend.identity();
                    tpl.generation_params.temperature = config.temperature;
                    tpl.generation_params.few_shot_ids = result.few_shot_ids;
                    for (std::string& w : validate_template(tpl)) {
                        report.warnings.push_back(tpl.template_id + ": " + w);
                    }
                    report.accepted.push_back(std::move(tpl));
                }
            }
        }
        call_index += wave;
    }

    if (static_cast<int>(report.accepted.size()) > config.target_count) {
        report.accepted.resize(static_cast<size_t>(config.target_count));
    }
    report.shortfall = static_cast<int>(report.accepted.size()) < config.target_count;
    return report;
}

// Review pass over pending templates: accept, reject, or replace with an
// edited rendering that must re-parse.
struct ReviewDecision {
    enum class Action { accept, reject, edit };
    std::string template_id;
    Action action = Action::accept;
    std::string replacement;  // canonical rendering, edit only
};

struct AuditEntry {
    std::string template_id;
    std::string action;
    bool applied = false;
    std::string detail;
};

struct ReviewOutcome {
    std::vector<CausalTemplate> accepted;
    std::vector<CausalTemplate> rejected;
    std::vector<CausalTemplate> pending;  // decisions that were refused or never made
    std::vector<AuditEntry> audit;
};

inline ReviewOutcome review_templates(const std::vector<CausalTemplate>& pending,
                                      const std::vector<ReviewDecision>& decisions) {
    ReviewOutcome outcome;
    std::set<std::string> resolved;
    for (const ReviewDecision& decision : decisions) {
        auto it = std::find_if(pending.begin(), pending.end(), [&](const CausalTemplate& t) {
            return t.template_id == decision.template_id;
        });
        if (it == pending.end() || resolved.count(decision.template_id)) {
            outcome.audit.push_back(
                {decision.template_id, "unknown", false, "no pending template with this id"});
            continue;
        }
        switch (decision.action) {
            case ReviewDecision::Action::accept:
                outcome.accepted.push_back(*it);
                outcome.audit.push_back({decision.template_id, "accept", true, ""});
                resolved.insert(decision.template_id);
                break;
            case ReviewDecision::Action::reject:
                outcome.rejected.push_back(*it);
                outcome.audit.push_back({decision.template_id, "reject", true, ""});
                resolved.insert(decision.template_id);
                break;
            case ReviewDecision::Action::edit: {
                ParseResult parsed = parse_template(decision.replacement);
                if (!parsed.ok()) {
                    outcome.audit.push_back({decision.template_id, "edit", false,
                                             "edit refused: " + parsed.error->detail});
                    break;  // stays pending
                }
                CausalTemplate edited = std::move(*parsed.tpl);
                edited.source_model = it->source_model;
                edited.generation_params = it->generation_params;
                outcome.accepted.push_back(std::move(edited));
                outcome.audit.push_back({decision.template_id, "edit", true, ""});
                resolved.insert(decision.template_id);
                break;
            }
        }
    }
    for (const CausalTemplate& t : pending) {
        if (!resolved.count(t.template_id)) outcome.pending.push_back(t);
    }
    return outcome;
}

}  // namespace bigtom
