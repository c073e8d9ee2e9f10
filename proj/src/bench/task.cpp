#include "cobbie/bench/task.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

namespace cobbie::bench {

using nlohmann::json;

namespace {

std::string join_paths(const std::vector<std::string>& paths) {
    std::string out = "missing model files:";
    for (const auto& p : paths) out += " " + p;
    return out;
}

}  // namespace

MissingModel::MissingModel(std::vector<std::string> missing)
    : std::runtime_error(join_paths(missing)), paths(std::move(missing)) {}

std::vector<BenchTask> load_dataset(const std::string& manifest_path) {
    std::ifstream f(manifest_path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot open task manifest: " + manifest_path);
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    std::vector<BenchTask> tasks;
    std::set<std::string> seen_ids;
    std::vector<std::string> missing;
    std::string line;
    int index = 0;
    while (std::getline(f, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw SchemaError(index, "not a JSON object");
        BenchTask t;
        for (const char* key : {"task_id", "question", "model_path", "ground_truth"})
            if (!j.contains(key) || !j[key].is_string())
                throw SchemaError(index, std::string("missing string field ") + key);
        t.task_id = j["task_id"].get<std::string>();
        t.question = j["question"].get<std::string>();
        t.ground_truth = j["ground_truth"].get<std::string>();
        t.project = j.value("project", "");
        t.split = j.value("split", "");
        if (!j.contains("category") || !j["category"].is_number_integer())
            throw SchemaError(index, "missing integer field category");
        t.category = j["category"].get<int>();
        if (t.category < 1 || t.category > 4)
            throw SchemaError(index, "category out of range: " + std::to_string(t.category));
        if (!t.split.empty() && t.split != "train_dev" && t.split != "test")
            throw SchemaError(index, "unknown split label: " + t.split);
        if (!seen_ids.insert(t.task_id).second)
            throw SchemaError(index, "duplicate task_id: " + t.task_id);

        std::filesystem::path model = j["model_path"].get<std::string>();
        if (model.is_relative()) model = base / model;
        t.model_path = model.lexically_normal().string();
        if (!std::filesystem::exists(t.model_path)) missing.push_back(t.model_path);
        tasks.push_back(std::move(t));
        ++index;
    }
    if (!missing.empty()) throw MissingModel(std::move(missing));
    return tasks;
}

}  // namespace cobbie::bench
