#pragma once

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "bigtom/backend.hpp"

namespace bigtom {

struct HttpBackendConfig {
    std::string identity;
    ModelKind kind = ModelKind::chat;
    // Full endpoint URL, e.g. "https://api.openai.com/v1/chat/completions".
    std::string endpoint;
    std::string model;
    std::string credential_env;  // name of the env var holding the API key
    std::vector<std::pair<std::string, std::string>> headers;
    int max_attempts = 5;
    int backoff_base_ms = 250;
    int backoff_cap_ms = 4000;
    int timeout_s = 120;
};

// OpenAI-style chat/completions client. Retries transport failures, 429 and
// 5xx responses with capped exponential backoff.
class HttpBackend : public ModelBackend {
  public:
    explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
        split_endpoint(config_.endpoint, base_, path_);
    }

    ModelKind kind() const override { return config_.kind; }
    std::string identity() const override { return config_.identity; }

    std::vector<std::string> complete(const BackendRequest& request) override {
        const std::string body = build_body(request).dump();
        std::string last_error;
        for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
            if (attempt > 0) {
                int delay = config_.backoff_base_ms << (attempt - 1);
                if (delay > config_.backoff_cap_ms) delay = config_.backoff_cap_ms;
                std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            }
            httplib::Client client(base_);
            client.set_connection_timeout(config_.timeout_s);
            client.set_read_timeout(config_.timeout_s);
            httplib::Headers headers{{"Authorization", "Bearer " + credential()}};
            for (const auto& [k, v] : config_.headers) headers.emplace(k, v);

            auto res = client.Post(path_, headers, body, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
                continue;
            }
            if (res->status < 200 || res->status >= 300) {
                throw BackendError(config_.identity + ": HTTP " + std::to_string(res->status) +
                                       ": " + res->body,
                                   /*retryable=*/false);
            }
            return parse_completions(res->body);
        }
        throw BackendError(config_.identity + ": retries exhausted, last error: " + last_error,
                           /*retryable=*/true);
    }

  private:
    std::string credential() const {
        if (config_.credential_env.empty()) return "";
        const char* value = std::getenv(config_.credential_env.c_str());
        if (!value) {
            throw BackendError(config_.identity + ": credential env var " +
                                   config_.credential_env + " is not set",
                               /*retryable=*/false);
        }
        return value;
    }

    nlohmann::json build_body(const BackendRequest& request) const {
        nlohmann::json body{{"model", config_.model},
                            {"temperature", request.temperature},
                            {"max_tokens", request.max_tokens},
                            {"n", request.n}};
        if (config_.kind == ModelKind::chat) {
            nlohmann::json messages = nlohmann::json::array();
            for (const Message& m : request.messages) {
                messages.push_back({{"role", m.role}, {"content", m.content}});
            }
            body["messages"] = std::move(messages);
        } else {
            body["prompt"] = request.prompt;
        }
        return body;
    }

    std::vector<std::string> parse_completions(const std::string& body) const {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const std::exception& e) {
            throw BackendError(config_.identity + ": unparseable response body: " + e.what());
        }
        std::vector<std::string> completions;
        for (const auto& choice : j.at("choices")) {
            if (choice.contains("message")) {
                completions.push_back(choice["message"].value("content", ""));
            } else {
                completions.push_back(choice.value("text", ""));
            }
        }
        if (completions.empty()) {
            throw BackendError(config_.identity + ": response contained no choices");
        }
        return completions;
    }

    static void split_endpoint(const std::string& url, std::string& base, std::string& path) {
        size_t scheme = url.find("://");
        size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
        size_t slash = url.find('/', host_start);
        if (slash == std::string::npos) {
            base = url;
            path = "/";
        } else {
            base = url.substr(0, slash);
            path = url.substr(slash);
        }
    }

    HttpBackendConfig config_;
    std::string base_;
    std::string path_;
};

}  // namespace bigtom
