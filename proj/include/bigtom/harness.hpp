#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bigtom/backend.hpp"
#include "bigtom/compose.hpp"
#include "bigtom/eval_prompts.hpp"
#include "bigtom/extract.hpp"

namespace bigtom {

struct EvalRecord {
    std::string item_id;
    std::string backend;
    PromptStyle style = PromptStyle::zero_shot;
    std::string raw_response;
    Extracted extracted = Extracted::unparsed;
    bool correct = false;
    int latency_ms = 0;
    bool cached = false;
    std::string error;  // annotation for failures after retry exhaustion

    friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

struct RunConfig {
    int concurrency = 8;
    std::string cache_dir;  // empty disables caching
    int max_tokens_direct = 64;
    int max_tokens_cot = 512;
};

struct RunResult {
    std::vector<EvalRecord> records;
    int calls_made = 0;
    int cache_hits = 0;
};

namespace detail {

inline std::string eval_cache_key(const std::string& backend_id, PromptStyle style,
                                  const std::string& item_id, const std::string& prompt_text) {
    return hex64(fnv1a64(backend_id + "|" + std::string(prompt_style_name(style)) + "|" + item_id +
                         "|" + hex64(fnv1a64(prompt_text))));
}

}  // namespace detail

// One temperature-0 request per item. Responses are cached on disk, records
// come back in item order, and per-item failures after retry exhaustion are
// recorded as unparsed with an error annotation instead of aborting the run.
inline RunResult run_eval(const std::vector<TestItem>& items, ModelBackend& backend,
                          PromptStyle style, const RunConfig& config) {
    RunResult result;
    result.records.resize(items.size());

    if (!config.cache_dir.empty()) std::filesystem::create_directories(config.cache_dir);

    const bool cot = style == PromptStyle::zero_shot_cot || style == PromptStyle::one_shot_cot;
    const int max_tokens = cot ? config.max_tokens_cot : config.max_tokens_direct;

    std::mutex cache_mutex;
    std::atomic<int> calls{0}, hits{0};
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            const TestItem& item = items[i];

            EvalRecord record;
            record.item_id = item.item_id;
            record.backend = backend.identity();
            record.style = style;

            const std::vector<Message> messages = build_eval_prompt(item, style, backend.kind());
            const std::string prompt_text = prompt_as_text(messages);

            std::string cache_path;
            if (!config.cache_dir.empty()) {
                cache_path = config.cache_dir + "/eval-" +
                             detail::eval_cache_key(backend.identity(), style, item.item_id,
                                                    prompt_text) +
                             ".json";
            }

            bool from_cache = false;
            if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
                std::lock_guard<std::mutex> lock(cache_mutex);
                record.raw_response =
                    nlohmann::json::parse(read_file(cache_path)).at("response").get<std::string>();
                from_cache = true;
                hits.fetch_add(1);
            }

            if (!from_cache) {
                BackendRequest request;
                request.kind = backend.kind();
                request.temperature = 0.0;
                request.max_tokens = max_tokens;
                request.n = 1;
                request.item_id = item.item_id;
                if (request.kind == ModelKind::chat) {
                    request.messages = messages;
                } else {
                    request.prompt = prompt_text;
                }
                const auto start = std::chrono::steady_clock::now();
                try {
                    auto completions = backend.complete(request);
                    record.raw_response = completions.empty() ? "" : completions.front();
                } catch (const std::exception& e) {
                    record.error = e.what();
                }
                record.latency_ms = static_cast<int>(
                    std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count());
                calls.fetch_add(1);
                if (!cache_path.empty() && record.error.empty()) {
                    std::lock_guard<std::mutex> lock(cache_mutex);
                    write_file(cache_path,
                               nlohmann::json{{"response", record.raw_response}}.dump());
                }
            }
            record.cached = from_cache;

            if (record.error.empty()) {
                record.extracted = extract_answer(record.raw_response, item.options);
            }
            const Extracted correct_option =
                item.correct_index == 0 ? Extracted::option_a : Extracted::option_b;
            record.correct = record.extracted == correct_option;

            result.records[i] = std::move(record);
        }
    };

    const int n_threads = std::max(1, std::min<int>(config.concurrency,
                                                    static_cast<int>(items.size())));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    result.calls_made = calls.load();
    result.cache_hits = hits.load();
    return result;
}

inline nlohmann::json record_to_json(const EvalRecord& r) {
    return nlohmann::json{
        {"item_id", r.item_id},       {"backend", r.backend},
        {"style", prompt_style_name(r.style)}, {"raw_response", r.raw_response},
        {"extracted", extracted_name(r.extracted)}, {"correct", r.correct},
        {"latency_ms", r.latency_ms}, {"cached", r.cached},
        {"error", r.error},
    };
}

inline EvalRecord record_from_json(const nlohmann::json& j) {
    EvalRecord r;
    r.item_id = j.at("item_id").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    auto style = prompt_style_from_name(j.at("style").get<std::string>());
    if (!style) throw std::runtime_error("unknown prompt style in record");
    r.style = *style;
    r.raw_response = j.at("raw_response").get<std::string>();
    auto extracted = extracted_from_name(j.at("extracted").get<std::string>());
    if (!extracted) throw std::runtime_error("unknown extraction state in record");
    r.extracted = *extracted;
    r.correct = j.at("correct").get<bool>();
    r.latency_ms = j.value("latency_ms", 0);
    r.cached = j.value("cached", false);
    r.error = j.value("error", "");
    return r;
}

inline void write_records(const std::string& path, const std::vector<EvalRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const EvalRecord& r : records) out << record_to_json(r).dump() << "\n";
}

inline std::vector<EvalRecord> read_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<EvalRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed eval record: " + e.what());
        }
    }
    return records;
}

}  // namespace bigtom
