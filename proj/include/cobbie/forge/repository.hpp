#pragma once
// Bounded tool repository with grace-period pruning and LDJSON persistence.

#include <optional>
#include <vector>

#include "cobbie/agent/loop.hpp"
#include "cobbie/forge/tool.hpp"

namespace cobbie::forge {

class ToolRepository {
public:
    explicit ToolRepository(int capacity = 16, int grace_period = 10)
        : capacity_(capacity), grace_(grace_period) {}

    int capacity() const { return capacity_; }
    int grace_period() const { return grace_; }

    const std::vector<ToolRecord>& tools() const { return tools_; }
    std::vector<const ToolRecord*> active() const;
    ToolRecord* find_active(const std::string& name);

    // Inserts a new tool or replaces the source of an active one in place.
    void insert_or_replace(const ToolRecord& tool);

    // Removes highest-deletion-score tools past the grace period until the
    // active count fits the capacity. Ties: older created_at_question first,
    // then name ascending. Returns pruned names; sets diagnostic when grace
    // forces the capacity to be exceeded.
    std::vector<std::string> prune(long current_question, std::string* diagnostic = nullptr);

    // Per-question statistics update from a finished session. When installed
    // is given, only those tools count (the session may predate newer tools).
    void record_usage(const cobbie::agent::SessionRecord& session, bool correct,
                      const std::vector<std::string>* installed = nullptr);

    void save(const std::string& path) const;
    static ToolRepository load(const std::string& path, int capacity = 16,
                               int grace_period = 10);

private:
    int capacity_;
    int grace_;
    std::vector<ToolRecord> tools_;  // active and pruned, in insertion order
};

}  // namespace cobbie::forge
