#pragma once

#include <atomic>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bigtom {

enum class ModelKind { chat, text };

inline std::string_view model_kind_name(ModelKind k) { return k == ModelKind::chat ? "chat" : "text"; }

struct Message {
    std::string role;
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

struct BackendRequest {
    ModelKind kind = ModelKind::chat;
    std::vector<Message> messages;  // chat kind
    std::string prompt;             // text kind
    double temperature = 0.0;
    int max_tokens = 256;
    int n = 1;
    // Metadata for scripted backends; HTTP backends ignore it.
    std::string item_id;
};

struct BackendError : std::runtime_error {
    bool retryable;
    explicit BackendError(const std::string& msg, bool retryable_ = false)
        : std::runtime_error(msg), retryable(retryable_) {}
};

class ModelBackend {
  public:
    virtual ~ModelBackend() = default;
    virtual ModelKind kind() const = 0;
    virtual std::string identity() const = 0;
    // Returns request.n completions (fewer only if the backend cannot batch).
    virtual std::vector<std::string> complete(const BackendRequest& request) = 0;
};

// Deterministic backend driven by a caller-supplied script; the built-in mock
// for tests and offline pipeline runs.
class ScriptedBackend : public ModelBackend {
  public:
    using Script = std::function<std::vector<std::string>(const BackendRequest&)>;

    ScriptedBackend(std::string identity, ModelKind kind, Script script)
        : identity_(std::move(identity)), kind_(kind), script_(std::move(script)) {}

    ModelKind kind() const override { return kind_; }
    std::string identity() const override { return identity_; }

    std::vector<std::string> complete(const BackendRequest& request) override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return script_(request);
    }

    int calls_made() const { return calls_.load(std::memory_order_relaxed); }

  private:
    std::string identity_;
    ModelKind kind_;
    Script script_;
    std::atomic<int> calls_{0};
};

}  // namespace bigtom
