#pragma once
// Benchmark task manifest: line-delimited JSON, one task per line.

#include <stdexcept>
#include <string>
#include <vector>

namespace cobbie::bench {

struct BenchTask {
    std::string task_id;
    std::string question;
    std::string model_path;  // resolved against the manifest directory
    std::string ground_truth;
    int category = 0;  // 1..4
    std::string project;
    std::string split;  // "train_dev" | "test" | "" (assigned by the splitter)
};

struct SchemaError : std::runtime_error {
    SchemaError(int index, const std::string& what)
        : std::runtime_error("task " + std::to_string(index) + ": " + what), task_index(index) {}
    int task_index;
};

struct MissingModel : std::runtime_error {
    explicit MissingModel(std::vector<std::string> missing);
    std::vector<std::string> paths;
};

std::vector<BenchTask> load_dataset(const std::string& manifest_path);

}  // namespace cobbie::bench
