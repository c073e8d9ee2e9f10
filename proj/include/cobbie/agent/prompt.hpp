#pragma once
// System prompt assembly: BQL grammar, tool descriptions, sourcing policy,
// quality criteria.

#include <string>
#include <vector>

namespace cobbie::agent {

struct ToolDescription {
    std::string name;
    std::string signature;
    std::string description;  // one line; full source via the source() builtin
};

struct PromptConfig {
    // Four-tier answer sourcing hierarchy, most preferred first.
    std::vector<std::string> sourcing_policy;
    // Five quality criteria embedded verbatim.
    std::vector<std::string> quality_criteria;

    static PromptConfig defaults();
};

std::string build_system_prompt(const std::vector<ToolDescription>& tools,
                                const std::string& grammar, const PromptConfig& cfg);

}  // namespace cobbie::agent
