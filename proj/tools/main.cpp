// cobbie command-line surface. Exit codes: 0 success, 1 usage error,
// 2 data error, 3 provider error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cobbie/bench/report.hpp"
#include "cobbie/bench/split.hpp"
#include "cobbie/forge/training.hpp"
#include "cobbie/ifc/parser.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string provider_spec;  // "<base_url>|<model>"
    std::string replay_path;
    std::uint64_t seed = 42;
    int max_iterations = 20;
};

std::unique_ptr<cobbie::agent::LlmProvider> make_provider(const GlobalOptions& g) {
    if (!g.replay_path.empty())
        return std::make_unique<cobbie::agent::ReplayProvider>(
            cobbie::agent::ReplayProvider::from_file(g.replay_path));
    if (!g.provider_spec.empty()) {
        auto sep = g.provider_spec.find('|');
        if (sep == std::string::npos)
            throw DataError("--provider expects <base_url>|<model>");
        return std::make_unique<cobbie::agent::HttpChatProvider>(
            g.provider_spec.substr(0, sep), g.provider_spec.substr(sep + 1));
    }
    throw DataError("no provider configured; pass --replay or --provider");
}

cobbie::ifc::EntityGraph load_model(const std::string& path) {
    auto outcome = cobbie::ifc::parse_step_file(path);
    if (!outcome.ok())
        throw DataError(path + ":" + std::to_string(outcome.error->line) + ": " +
                        outcome.error->message);
    return std::move(*outcome.graph);
}

int cmd_parse(const std::string& path) {
    auto graph = load_model(path);
    std::cout << cobbie::ifc::diagnostic_dump(graph);
    return 0;
}

int ask_once(const cobbie::ifc::EntityGraph& graph, cobbie::agent::LlmProvider& provider,
             const std::string& question, const std::string& session_id,
             const GlobalOptions& g) {
    cobbie::bql::ExecEnvironment env(graph);
    cobbie::agent::AdaptiveConfig cfg;
    cfg.session_id = session_id;
    cfg.max_iterations = g.max_iterations;
    auto session = cobbie::agent::run_adaptive(question, provider, env, cfg);
    if (session.system_error) {
        std::cerr << "session failed: " << session.diagnostic << "\n";
        return kExitProvider;
    }
    std::cout << session.outcome_text << "\n";
    return 0;
}

int cmd_ask(const std::string& model_path, const std::string& question, bool repl,
            const std::string& session_id, const GlobalOptions& g) {
    auto graph = load_model(model_path);
    auto provider = make_provider(g);
    if (!repl) {
        if (question.empty()) throw DataError("ask needs a question or --repl");
        return ask_once(graph, *provider, question, session_id, g);
    }
    // each line is an independent session
    std::string line;
    int n = 0;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        int rc = ask_once(graph, *provider, line, session_id + "#" + std::to_string(n++), g);
        if (rc != 0) return rc;
    }
    return 0;
}

int cmd_index(const std::string& manifest, const std::string& out, const GlobalOptions& g) {
    std::ifstream f(manifest);
    if (!f.good()) throw DataError("cannot open corpus manifest: " + manifest);
    std::filesystem::path base = std::filesystem::path(manifest).parent_path();
    std::vector<cobbie::docs::CorpusFile> files;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::filesystem::path p = line;
        if (p.is_relative()) p = base / p;
        std::ifstream doc(p, std::ios::binary);
        if (!doc.good()) throw DataError("cannot open corpus file: " + p.string());
        std::ostringstream ss;
        ss << doc.rdbuf();
        std::string ext = p.extension().string();
        files.push_back({p.string(), ext == ".md" || ext == ".txt" ? "document" : "source",
                         ss.str()});
    }
    auto provider = make_provider(g);
    auto chunks = cobbie::docs::chunk_corpus(files);
    for (auto& c : chunks) c = cobbie::docs::review_and_expand(c, *provider);
    cobbie::docs::HashedBowEmbedder embedder;
    auto index = cobbie::docs::build_index(chunks, embedder);
    cobbie::docs::save_index(index, out);
    std::cout << "indexed " << index.chunks.size() << " chunks -> " << out << "\n";
    return 0;
}

int cmd_train_tools(const std::string& manifest, const std::string& split,
                    const std::string& out, const GlobalOptions& g) {
    if (split != "train_dev") throw DataError("tool training is limited to --split train_dev");
    auto tasks = cobbie::bench::load_dataset(manifest);
    auto [train, test] = cobbie::bench::stratified_split(tasks, 0.5, g.seed);
    std::vector<cobbie::forge::TrainingTuple> tuples;
    for (const auto& t : train)
        tuples.push_back({t.task_id, t.question, t.ground_truth, t.model_path, t.split});

    std::map<std::string, cobbie::ifc::EntityGraph> graphs;
    auto loader = [&graphs](const std::string& path) -> const cobbie::ifc::EntityGraph& {
        auto it = graphs.find(path);
        if (it == graphs.end()) it = graphs.emplace(path, load_model(path)).first;
        return it->second;
    };
    auto provider = make_provider(g);
    cobbie::forge::ToolRepository repo;
    auto report = cobbie::forge::run_training(tuples, repo, *provider, loader);
    repo.save(out);
    std::cout << "processed " << report.processed << " tasks, created "
              << report.created.size() << " tools, debugged " << report.debugged.size()
              << ", pruned " << report.pruned.size() << " -> " << out << "\n";
    return 0;
}

int cmd_bench(const std::string& manifest, const std::string& matrix_path,
              const std::string& out_dir, const GlobalOptions& g) {
    auto tasks = cobbie::bench::load_dataset(manifest);
    auto [train, test] = cobbie::bench::stratified_split(tasks, 0.5, g.seed);
    if (test.empty()) throw DataError("no test-split tasks in the manifest");

    std::ifstream f(matrix_path);
    if (!f.good()) throw DataError("cannot open matrix config: " + matrix_path);
    nlohmann::json spec = nlohmann::json::parse(f, nullptr, false);
    if (spec.is_discarded() || !spec.is_object() || !spec.contains("configs"))
        throw DataError("matrix config must be a JSON object with a configs array");

    std::vector<cobbie::bench::RunConfig> configs;
    std::vector<std::unique_ptr<cobbie::agent::LlmProvider>> providers;
    std::vector<std::unique_ptr<cobbie::docs::DocIndex>> indices;
    std::vector<std::unique_ptr<cobbie::forge::ToolRepository>> repos;
    for (const auto& c : spec["configs"]) {
        cobbie::bench::RunConfig cfg;
        cfg.config_id = c.value("id", "");
        cfg.paradigm = c.value("paradigm", "adaptive");
        cfg.augmentation = c.value("augmentation", "none");
        cfg.max_iterations = c.value("max_iterations", g.max_iterations);
        if (c.contains("doc_index")) {
            indices.push_back(std::make_unique<cobbie::docs::DocIndex>(
                cobbie::docs::load_index(c["doc_index"].get<std::string>())));
            cfg.doc_index = indices.back().get();
        }
        if (c.contains("tools")) {
            repos.push_back(std::make_unique<cobbie::forge::ToolRepository>(
                cobbie::forge::ToolRepository::load(c["tools"].get<std::string>())));
            cfg.tools = repos.back().get();
        }
        GlobalOptions local = g;
        if (c.contains("replay")) local.replay_path = c["replay"].get<std::string>();
        providers.push_back(make_provider(local));
        configs.push_back(cfg);
    }

    std::map<std::string, cobbie::agent::LlmProvider*> by_id;
    for (std::size_t i = 0; i < configs.size(); ++i)
        by_id[configs[i].config_id] = providers[i].get();

    cobbie::bench::RunnerOptions opts;
    opts.output_dir = out_dir;
    auto report = cobbie::bench::run_matrix(
        test, configs,
        [&by_id](const cobbie::bench::RunConfig& cfg) -> cobbie::agent::LlmProvider& {
            return *by_id.at(cfg.config_id);
        },
        opts);
    cobbie::bench::emit_report(report, out_dir);
    std::cout << "wrote " << out_dir << "/report.md and " << out_dir << "/report.csv\n";
    return 0;
}

int cmd_report(const std::string& records_dir) {
    auto report = cobbie::bench::load_report(records_dir);
    if (report.cells.empty()) throw DataError("no record files in " + records_dir);
    cobbie::bench::emit_report(report, records_dir);
    std::cout << "wrote " << records_dir << "/report.md and " << records_dir
              << "/report.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"question answering over IFC building models"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--provider", g.provider_spec, "chat endpoint as <base_url>|<model>");
    app.add_option("--replay", g.replay_path, "replay script (line-delimited JSON)");
    app.add_option("--seed", g.seed, "split / sampling seed");
    app.add_option("--max-iterations", g.max_iterations, "adaptive exploration budget");

    auto* parse = app.add_subcommand("parse", "diagnostic dump of an IFC STEP file");
    std::string parse_file;
    parse->add_option("file", parse_file, "IFC file")->required();

    auto* ask = app.add_subcommand("ask", "answer a question about a model");
    std::string ask_model, ask_question, ask_session = "ask";
    bool repl = false;
    ask->add_option("model", ask_model, "IFC file")->required();
    ask->add_option("question", ask_question, "natural-language question");
    ask->add_flag("--repl", repl, "read questions from stdin, one session each");
    ask->add_option("--session", ask_session, "session id (keys replay scripts)");

    auto* index = app.add_subcommand("index", "build the documentation index");
    std::string index_manifest, index_out = "doc_index.json";
    index->add_option("manifest", index_manifest, "corpus manifest, one path per line")
        ->required();
    index->add_option("--out", index_out, "output index file");

    auto* train = app.add_subcommand("train-tools", "run the tool-training pipeline");
    std::string train_manifest, train_split = "train_dev", train_out = "tools.ldjson";
    train->add_option("manifest", train_manifest, "task manifest")->required();
    train->add_option("--split", train_split, "partition to train on");
    train->add_option("--out", train_out, "output tool repository");

    auto* bench = app.add_subcommand("bench", "run the ablation matrix on the test split");
    std::string bench_manifest, bench_matrix, bench_out = "bench_records";
    bench->add_option("manifest", bench_manifest, "task manifest")->required();
    bench->add_option("--matrix", bench_matrix, "matrix config (JSON)")->required();
    bench->add_option("--out", bench_out, "records and report directory");

    auto* report = app.add_subcommand("report", "rebuild reports from record files");
    std::string records_dir;
    report->add_option("records_dir", records_dir, "directory of record files")->required();

    // global flags remain valid after the subcommand name
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (parse->parsed()) return cmd_parse(parse_file);
        if (ask->parsed()) return cmd_ask(ask_model, ask_question, repl, ask_session, g);
        if (index->parsed()) return cmd_index(index_manifest, index_out, g);
        if (train->parsed()) return cmd_train_tools(train_manifest, train_split, train_out, g);
        if (bench->parsed()) return cmd_bench(bench_manifest, bench_matrix, bench_out, g);
        if (report->parsed()) return cmd_report(records_dir);
    } catch (const cobbie::agent::ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
