#pragma once
// Exploration sessions: the adaptive loop and the static single-pass baseline.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cobbie/agent/prompt.hpp"
#include "cobbie/agent/protocol.hpp"
#include "cobbie/agent/provider.hpp"
#include "cobbie/bql/env.hpp"

namespace cobbie::agent {

inline constexpr const char* kAbstentionString = "Information not found in BIM model";
inline constexpr int kDefaultMaxIterations = 20;
inline constexpr std::size_t kDefaultContextCharBudget = 60'000;
inline constexpr int kMalformedRetries = 2;

enum class OutcomeKind { Answered, Abstained };

struct SessionTurn {
    // Full message list sent to the provider, byte-for-byte (replayability).
    std::vector<ChatMessage> sent_messages;
    std::string raw_response;
    // Set when the turn produced a code action that was executed.
    std::optional<std::string> code;
    std::optional<cobbie::bql::ExecResult> exec;
};

struct SessionRecord {
    std::string session_id;
    std::string question;
    std::string model_path;
    std::string system_prompt;
    std::vector<SessionTurn> turns;
    OutcomeKind outcome = OutcomeKind::Abstained;
    std::string outcome_text;  // answer text or abstention reason
    int execute_calls = 0;
    bool system_error = false;
    std::string diagnostic;

    // (code, output) history length, |H|
    int history_size() const {
        int n = 0;
        for (const auto& t : turns)
            if (t.code) ++n;
        return n;
    }
    bool abstained() const { return outcome == OutcomeKind::Abstained; }
};

// Chunk fetch hook used by static mode prefetch: query -> (chunk_id, block).
using ChunkFetcher =
    std::function<std::vector<std::pair<std::string, std::string>>(const std::string&)>;

struct AdaptiveConfig {
    std::string session_id;
    std::string model_path;
    int max_iterations = kDefaultMaxIterations;
    std::size_t context_char_budget = kDefaultContextCharBudget;
    std::vector<ToolDescription> tools;
    PromptConfig prompt = PromptConfig::defaults();
    // When set, exposed to the agent as the docs(query) builtin.
    cobbie::bql::ExecEnvironment::DocsCallback docs;
};

struct StaticConfig {
    std::string session_id;
    std::string model_path;
    int max_planner_queries = 5;
    int max_prefetch_chunks = 10;
    std::vector<ToolDescription> tools;
    PromptConfig prompt = PromptConfig::defaults();
    // When set, a planner turn runs and prefetched chunks join the prompt.
    ChunkFetcher fetch_chunks;
};

SessionRecord run_adaptive(const std::string& question, LlmProvider& provider,
                           cobbie::bql::ExecEnvironment& env, const AdaptiveConfig& cfg);

SessionRecord run_static(const std::string& question, LlmProvider& provider,
                         cobbie::bql::ExecEnvironment& env, const StaticConfig& cfg);

}  // namespace cobbie::agent
