#pragma once
// Tool records and the usage-based deletion score.

#include <string>

namespace cobbie::forge {

enum class ToolStatus { Active, Pruned };

struct ToolRecord {
    std::string name;
    std::string signature;
    std::string description;
    std::string source;  // BQL function definition
    long created_at_question = 0;
    long calls = 0;                  // questions where the tool was invoked
    long available_count = 0;        // questions where the tool was installed
    long success_contributions = 0;  // invoked in a correct session
    ToolStatus status = ToolStatus::Active;
    bool manual = false;  // shipped tool: source is read-only

    double r_call() const {
        return static_cast<double>(calls) / static_cast<double>(available_count > 0
                                                                    ? available_count
                                                                    : 1);
    }
    double r_succ() const {
        return static_cast<double>(success_contributions) /
               static_cast<double>(calls > 0 ? calls : 1);
    }
};

// s_del = (1 - r_call)/2 + (1 - r_succ)/2
double deletion_score(const ToolRecord& t);

}  // namespace cobbie::forge
