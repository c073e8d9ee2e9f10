#pragma once
// Tool-training pipeline: a deterministic state machine over seven agent
// roles, with tool creation from correct answers and tool debugging from
// wrong ones.

#include <functional>

#include "cobbie/forge/repository.hpp"
#include "cobbie/ifc/graph.hpp"

namespace cobbie::forge {

enum class Phase {
    Generate,
    Verify,
    IdentifyTool,
    AnalyzeError,
    CreateTool,
    DebugTool,
    TestTool,
    AssessTool,
    Persist,
    Skip,
};

const char* phase_name(Phase p);

struct TrainingTuple {
    std::string task_id;
    std::string question;
    std::string ground_truth;
    std::string model_path;
    std::string split;  // "train_dev" | "test"
};

struct TrainingState {
    Phase phase = Phase::Generate;  // terminal: Persist or Skip
    std::optional<ToolRecord> candidate_tool;
    std::vector<std::pair<Phase, std::string>> transcript;
    // Generate-phase session and verdict, for usage statistics.
    std::optional<cobbie::agent::SessionRecord> generate_session;
    bool generate_correct = false;
    bool debugged = false;  // terminal Persist came through the debug path
    std::string diagnostic;  // set on abnormal skips (provider/protocol failure)
};

struct TrainingReport {
    int processed = 0;
    std::vector<std::string> created;
    std::vector<std::string> debugged;
    std::vector<std::string> pruned;
    std::vector<std::string> failures;  // per-tuple diagnostics
    std::vector<ToolRecord> final_tools;
};

// Loads the graph for a tuple's model path; shared across sessions.
using GraphLoader = std::function<const cobbie::ifc::EntityGraph&(const std::string&)>;

inline constexpr int kRefinementTurns = 3;

TrainingState run_training_step(const TrainingTuple& tuple, ToolRepository& repo,
                                cobbie::agent::LlmProvider& provider, const GraphLoader& graphs,
                                long question_index);

// Sequential pass; throws std::invalid_argument if any tuple is test-split.
TrainingReport run_training(const std::vector<TrainingTuple>& partition, ToolRepository& repo,
                            cobbie::agent::LlmProvider& provider, const GraphLoader& graphs);

}  // namespace cobbie::forge
