#include "cobbie/bench/runner.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "cobbie/eval/judge.hpp"
#include "cobbie/ifc/parser.hpp"

namespace cobbie::bench {

using cobbie::eval::EvalRecord;

std::shared_ptr<const cobbie::ifc::EntityGraph> ModelCache::get(const std::string& path) {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->first == path) {
            entries_.splice(entries_.begin(), entries_, it);
            return entries_.front().second;
        }
    }
    auto outcome = cobbie::ifc::parse_step_file(path);
    if (!outcome.ok())
        throw std::runtime_error("model parse failed: " + path + ": " +
                                 outcome.error->message);
    auto graph = std::make_shared<const cobbie::ifc::EntityGraph>(std::move(*outcome.graph));
    entries_.emplace_front(path, graph);
    while (entries_.size() > capacity_) entries_.pop_back();
    return graph;
}

namespace {

void validate_config(const RunConfig& cfg) {
    if (cfg.config_id.empty() || cfg.config_id.find('/') != std::string::npos)
        throw std::invalid_argument("config_id must be a non-empty file-safe name");
    if (cfg.paradigm != "adaptive" && cfg.paradigm != "static")
        throw std::invalid_argument("unknown paradigm: " + cfg.paradigm);
    static const std::set<std::string> augs = {"none", "doc", "manual", "auto"};
    if (!augs.count(cfg.augmentation))
        throw std::invalid_argument("unknown augmentation: " + cfg.augmentation);
}

std::vector<cobbie::agent::ToolDescription> tool_descriptions(const RunConfig& cfg) {
    std::vector<cobbie::agent::ToolDescription> out;
    if (cfg.tools)
        for (const auto* t : cfg.tools->active())
            out.push_back({t->name, t->signature, t->description});
    return out;
}

EvalRecord run_one(const BenchTask& task, const RunConfig& cfg,
                   cobbie::agent::LlmProvider& provider, ModelCache& cache) {
    auto graph = cache.get(task.model_path);
    cobbie::bql::ExecEnvironment env(*graph);
    if (cfg.tools)
        for (const auto* t : cfg.tools->active()) env.install_tool(t->name, t->source);

    static const cobbie::docs::HashedBowEmbedder embedder;
    static const cobbie::docs::TokenOverlapReranker reranker;
    static const cobbie::docs::RetrievalConfig retrieval_cfg;

    cobbie::agent::SessionRecord session;
    if (cfg.paradigm == "adaptive") {
        cobbie::agent::AdaptiveConfig run;
        run.session_id = task.task_id;
        run.model_path = task.model_path;
        run.max_iterations = cfg.max_iterations;
        run.tools = tool_descriptions(cfg);
        if (cfg.augmentation == "doc" && cfg.doc_index)
            run.docs = [&cfg](const std::string& query) {
                return cobbie::docs::retrieve(*cfg.doc_index, query, retrieval_cfg, embedder,
                                              reranker);
            };
        session = cobbie::agent::run_adaptive(task.question, provider, env, run);
    } else {
        cobbie::agent::StaticConfig run;
        run.session_id = task.task_id;
        run.model_path = task.model_path;
        run.tools = tool_descriptions(cfg);
        if (cfg.augmentation == "doc" && cfg.doc_index)
            run.fetch_chunks = [&cfg](const std::string& query) {
                std::vector<std::pair<std::string, std::string>> out;
                for (const auto& c : cobbie::docs::retrieve_chunks(
                         *cfg.doc_index, query, retrieval_cfg, embedder, reranker))
                    out.emplace_back(c.chunk_id, c.text);
                return out;
            };
        session = cobbie::agent::run_static(task.question, provider, env, run);
    }

    cobbie::eval::JudgeInput input;
    input.question = task.question;
    input.ground_truth = task.ground_truth;
    input.system_answer =
        session.abstained() ? cobbie::agent::kAbstentionString : session.outcome_text;
    input.trace = std::move(session);
    input.category = task.category;
    EvalRecord rec = cobbie::eval::judge(input, provider);
    rec.config_id = cfg.config_id;
    return rec;
}

}  // namespace

MatrixReport run_matrix(const std::vector<BenchTask>& tasks,
                        const std::vector<RunConfig>& configs, const ProviderFactory& providers,
                        const RunnerOptions& options) {
    for (const auto& t : tasks)
        if (t.split != "test")
            throw std::invalid_argument("non-test task in benchmark run: " + t.task_id);
    for (const auto& c : configs) validate_config(c);
    if (options.output_dir.empty()) throw std::invalid_argument("output_dir required");
    std::filesystem::create_directories(options.output_dir);

    ModelCache cache(options.model_cache_capacity);
    MatrixReport report;
    for (const auto& cfg : configs) {
        std::string record_path = options.output_dir + "/" + cfg.config_id + ".ldjson";
        std::map<std::string, EvalRecord> done;
        if (std::filesystem::exists(record_path))
            for (auto& rec : cobbie::eval::load_records(record_path)) done[rec.task_id] = rec;

        cobbie::agent::LlmProvider& provider = providers(cfg);
        std::vector<const BenchTask*> pending;
        for (const auto& t : tasks)
            if (!done.count(t.task_id)) pending.push_back(&t);

        auto persist = [&] {
            std::vector<EvalRecord> ordered;
            for (const auto& t : tasks)
                if (auto it = done.find(t.task_id); it != done.end())
                    ordered.push_back(it->second);
            cobbie::eval::save_records(ordered, record_path);
            return ordered;
        };
        int stride = std::max(1, options.concurrency);
        for (std::size_t base = 0; base < pending.size(); base += stride) {
            std::size_t batch = std::min<std::size_t>(stride, pending.size() - base);
            std::vector<EvalRecord> results(batch);
            std::vector<std::thread> workers;
            for (std::size_t i = 0; i < batch; ++i)
                workers.emplace_back([&, i] {
                    const BenchTask& task = *pending[base + i];
                    try {
                        results[i] = run_one(task, cfg, provider, cache);
                    } catch (const std::exception&) {
                        EvalRecord rec;
                        rec.task_id = task.task_id;
                        rec.category = task.category;
                        rec.config_id = cfg.config_id;
                        rec.system_error = true;
                        results[i] = rec;
                    }
                });
            for (auto& w : workers) w.join();
            for (std::size_t i = 0; i < batch; ++i) done[results[i].task_id] = results[i];
            // the file is rewritten in manifest order after every batch, so
            // interrupted and clean runs leave identical records behind
            persist();
        }
        report.cells.push_back({cfg.config_id, persist()});
    }
    return report;
}

}  // namespace cobbie::bench
