#pragma once
// LLM provider abstraction: live HTTP chat endpoint and deterministic replay.

#include <atomic>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cobbie::agent {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct ProviderRequest {
    std::string session_id;  // task_id in benchmark runs
    int turn = 0;            // provider-call index within the session
    std::string system_prompt;
    std::vector<ChatMessage> messages;  // excludes the system prompt
};

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LlmProvider {
public:
    virtual ~LlmProvider() = default;
    // Throws ProviderError after exhausting any internal retries.
    virtual std::string complete(const ProviderRequest& req) = 0;
};

// Canned responses from a line-delimited JSON script:
//   {"task_id": "...", "turn": 0, "response": "..."}
// Lookup order: (task_id, turn), (task_id, -1), ("*", turn), ("*", -1).
class ReplayProvider : public LlmProvider {
public:
    static ReplayProvider from_file(const std::string& path);
    static ReplayProvider from_records(
        std::vector<std::tuple<std::string, int, std::string>> records);

    std::string complete(const ProviderRequest& req) override;
    int calls() const { return *calls_; }

private:
    // script_ is immutable after construction, so concurrent complete() calls
    // only touch the atomic counter.
    std::map<std::pair<std::string, int>, std::string> script_;
    std::shared_ptr<std::atomic<int>> calls_ = std::make_shared<std::atomic<int>>(0);
};

// OpenAI-style chat-completions endpoint. API key from COBBIE_API_KEY.
class HttpChatProvider : public LlmProvider {
public:
    HttpChatProvider(std::string base_url, std::string model_name, double temperature = 0.0);
    std::string complete(const ProviderRequest& req) override;

    // transient-failure retries
    static constexpr int kMaxRetries = 3;

private:
    std::string base_url_;
    std::string model_name_;
    double temperature_;
};

}  // namespace cobbie::agent
