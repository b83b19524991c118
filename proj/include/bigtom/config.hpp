#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bigtom/backend.hpp"
#include "bigtom/http_backend.hpp"
#include "bigtom/synthetic.hpp"
#include "bigtom/util.hpp"

namespace bigtom {

struct BackendDecl {
    std::string identity;
    ModelKind kind = ModelKind::chat;
    // "http" talks to an OpenAI-style endpoint; "mock" selects a built-in
    // deterministic backend via `mode` (synthetic | gold | always_a).
    std::string transport = "http";
    std::string endpoint;
    std::string model;
    std::string credential_env;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string mode;
};

struct PipelineConfig {
    uint64_t seed = 0;
    std::vector<BackendDecl> backends;

    double generation_temperature = 0.5;
    int completions_per_call = 3;
    int few_shot_count = 3;

    int concurrency = 8;
    std::string cache_dir = "cache";

    std::string templates_path = "templates.jsonl";
    std::string items_path = "items.jsonl";
    std::string records_path = "records.jsonl";
    std::string report_dir = "reports";
};

inline PipelineConfig load_config(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    PipelineConfig config;
    config.seed = j.value("seed", uint64_t{0});
    for (const auto& b : j.value("backends", nlohmann::json::array())) {
        BackendDecl decl;
        decl.identity = b.at("identity").get<std::string>();
        const std::string kind = b.value("kind", "chat");
        if (kind != "chat" && kind != "text") {
            throw std::runtime_error("backend " + decl.identity + ": kind must be chat or text");
        }
        decl.kind = kind == "chat" ? ModelKind::chat : ModelKind::text;
        decl.transport = b.value("transport", "http");
        decl.endpoint = b.value("endpoint", "");
        decl.model = b.value("model", "");
        decl.credential_env = b.value("credential_env", "");
        decl.mode = b.value("mode", "");
        for (const auto& [k, v] : b.value("headers", nlohmann::json::object()).items()) {
            decl.headers.emplace_back(k, v.get<std::string>());
        }
        if (decl.transport == "http" && decl.endpoint.empty()) {
            throw std::runtime_error("backend " + decl.identity + ": http backend needs endpoint");
        }
        config.backends.push_back(std::move(decl));
    }
    if (j.contains("generation")) {
        const auto& g = j["generation"];
        config.generation_temperature = g.value("temperature", 0.5);
        config.completions_per_call = g.value("completions_per_call", 3);
        config.few_shot_count = g.value("few_shot_count", 3);
    }
    if (j.contains("harness")) {
        const auto& h = j["harness"];
        config.concurrency = h.value("concurrency", 8);
        config.cache_dir = h.value("cache_dir", "cache");
    }
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        config.templates_path = p.value("templates", "templates.jsonl");
        config.items_path = p.value("items", "items.jsonl");
        config.records_path = p.value("records", "records.jsonl");
        config.report_dir = p.value("reports", "reports");
    }
    return config;
}

inline const BackendDecl& find_backend_decl(const PipelineConfig& config,
                                            const std::string& identity) {
    for (const BackendDecl& decl : config.backends) {
        if (decl.identity == identity) return decl;
    }
    throw std::runtime_error("no backend named '" + identity + "' in config");
}

}  // namespace bigtom
