#pragma once
// Ablation-matrix orchestration: per-config sessions, judging, resumable
// record persistence, bounded model cache.

#include <functional>
#include <list>
#include <memory>
#include <mutex>

#include "cobbie/bench/task.hpp"
#include "cobbie/docs/retrieve.hpp"
#include "cobbie/eval/stats.hpp"
#include "cobbie/forge/repository.hpp"

namespace cobbie::bench {

struct RunConfig {
    std::string config_id;    // file-name-safe, e.g. "adaptive_none"
    std::string paradigm;     // "adaptive" | "static"
    std::string augmentation; // "none" | "doc" | "manual" | "auto"
    int max_iterations = 20;
    std::uint64_t seed = 0;
    // Augmentation inputs; owned by the caller, may be null.
    const cobbie::docs::DocIndex* doc_index = nullptr;
    const cobbie::forge::ToolRepository* tools = nullptr;
};

// Parsed-model cache, LRU by path.
class ModelCache {
public:
    explicit ModelCache(std::size_t capacity = 8) : capacity_(capacity) {}
    std::shared_ptr<const cobbie::ifc::EntityGraph> get(const std::string& path);

private:
    std::size_t capacity_;
    std::mutex mu_;
    std::list<std::pair<std::string, std::shared_ptr<const cobbie::ifc::EntityGraph>>> entries_;
};

struct CellResult {
    std::string config_id;
    std::vector<cobbie::eval::EvalRecord> records;  // task manifest order
};

struct MatrixReport {
    std::vector<CellResult> cells;
};

struct RunnerOptions {
    std::string output_dir;  // per-config LDJSON record files; resumable
    int concurrency = 4;
    std::size_t model_cache_capacity = 8;
};

using ProviderFactory =
    std::function<cobbie::agent::LlmProvider&(const RunConfig&)>;

// Tasks must all be test-split; completed (task, config) pairs found in the
// output directory are skipped. Per-task failures become system_error records.
MatrixReport run_matrix(const std::vector<BenchTask>& tasks,
                        const std::vector<RunConfig>& configs, const ProviderFactory& providers,
                        const RunnerOptions& options);

}  // namespace cobbie::bench
