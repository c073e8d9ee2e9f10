#pragma once
// Sandboxed BQL execution environment: persistent per-session bindings,
// step budget, captured output, installed tools.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "cobbie/bql/ast.hpp"
#include "cobbie/bql/value.hpp"
#include "cobbie/ifc/graph.hpp"

namespace cobbie::bql {

struct ExecResult {
    std::string printed;
    std::optional<std::string> error;
    std::int64_t steps_used = 0;

    bool ok() const { return !error.has_value(); }
};

struct ToolLoadError {
    std::string message;
    int line = 0;
};

inline constexpr std::int64_t kDefaultStepBudget = 1'000'000;
inline constexpr std::size_t kDefaultOutputLimit = 4'000;
inline constexpr const char* kTruncationMarker = "...[output truncated]";
inline constexpr int kMaxCallDepth = 64;

class ExecEnvironment {
public:
    explicit ExecEnvironment(const cobbie::ifc::EntityGraph& graph,
                             std::int64_t step_budget = kDefaultStepBudget,
                             std::size_t output_limit = kDefaultOutputLimit)
        : graph_(&graph), step_budget_(step_budget), output_limit_(output_limit) {}

    // Runs one code block; bindings persist across calls within the session.
    // All failures are in-band in ExecResult.error.
    ExecResult execute(std::string_view code);

    std::optional<ToolLoadError> install_tool(std::string_view name, std::string_view source);

    const cobbie::ifc::EntityGraph& graph() const { return *graph_; }
    std::int64_t step_budget() const { return step_budget_; }
    std::size_t output_limit() const { return output_limit_; }

    std::map<std::string, Value>& bindings() { return bindings_; }
    const std::map<std::string, std::shared_ptr<FunctionDecl>>& tools() const { return tools_; }
    const std::map<std::string, std::string>& tool_sources() const { return tool_sources_; }

    // Optional retrieval hook surfaced as the docs(query) builtin.
    using DocsCallback = std::function<std::string(const std::string&)>;
    void set_docs_callback(DocsCallback cb) { docs_ = std::move(cb); }
    const DocsCallback& docs_callback() const { return docs_; }

private:
    const cobbie::ifc::EntityGraph* graph_;
    std::int64_t step_budget_;
    std::size_t output_limit_;
    std::map<std::string, Value> bindings_;
    std::map<std::string, std::shared_ptr<FunctionDecl>> tools_;
    std::map<std::string, std::string> tool_sources_;
    DocsCallback docs_;
};

bool is_builtin_name(const std::string& name);

// Grammar text shipped in docs/ and embedded in the agent system prompt.
const std::string& grammar_text();

}  // namespace cobbie::bql
