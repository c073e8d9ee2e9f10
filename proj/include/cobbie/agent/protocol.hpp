#pragma once
// Wire protocol between the agent and the loop: a fenced ```action block
// carries code, a line starting FINAL: carries the final answer.

#include <optional>
#include <string>
#include <variant>

namespace cobbie::agent {

struct CodeAction {
    std::string reasoning;
    std::string code;
};

struct FinalAnswer {
    std::string reasoning;
    std::string answer;
};

struct ProtocolError {
    std::string message;
};

using AgentResponse = std::variant<CodeAction, FinalAnswer, ProtocolError>;

// FINAL: wins when both markers are present.
AgentResponse parse_agent_response(const std::string& raw);

}  // namespace cobbie::agent
