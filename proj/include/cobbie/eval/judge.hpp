#pragma once
// LLM-as-judge protocol: five binary criteria with category-specific rubrics.

#include <optional>
#include <string>
#include <vector>

#include "cobbie/agent/loop.hpp"

namespace cobbie::eval {

struct EvalRecord {
    std::string task_id;
    int category = 0;  // 1..4
    bool abstained = false;
    // Substantive criteria; undefined (nullopt) when abstained.
    std::optional<bool> faithfulness;   // c1
    std::optional<bool> completeness;   // c2
    std::optional<bool> transparency;   // c3
    std::optional<bool> relevance;      // c4
    bool system_error = false;
    std::string config_id;

    bool correct() const {
        return !system_error && !abstained && faithfulness.value_or(false) &&
               completeness.value_or(false) && transparency.value_or(false) &&
               relevance.value_or(false);
    }
};

struct JudgeInput {
    std::string question;
    std::string ground_truth;
    std::string system_answer;
    cobbie::agent::SessionRecord trace;  // present even for abstentions
    int category = 0;
};

// Editable rubric text for a category; docs/judge_rubrics holds the same text.
const std::string& category_rubric(int category);

// Abstention is decided deterministically first: the exact exhaustion string
// classifies as abstained with zero provider calls. Otherwise the provider
// returns a JSON verdict; malformed verdicts are re-requested twice, then the
// record is marked system_error.
EvalRecord judge(const JudgeInput& input, cobbie::agent::LlmProvider& provider);

void save_records(const std::vector<EvalRecord>& records, const std::string& path);
std::vector<EvalRecord> load_records(const std::string& path);

}  // namespace cobbie::eval
