#include "cobbie/forge/training.hpp"

#include <stdexcept>

#include "json.hpp"

namespace cobbie::forge {

using cobbie::agent::LlmProvider;
using cobbie::agent::ProviderError;
using cobbie::agent::ProviderRequest;
using cobbie::agent::SessionRecord;
using nlohmann::json;

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Generate: return "Generate";
        case Phase::Verify: return "Verify";
        case Phase::IdentifyTool: return "IdentifyTool";
        case Phase::AnalyzeError: return "AnalyzeError";
        case Phase::CreateTool: return "CreateTool";
        case Phase::DebugTool: return "DebugTool";
        case Phase::TestTool: return "TestTool";
        case Phase::AssessTool: return "AssessTool";
        case Phase::Persist: return "Persist";
        case Phase::Skip: return "Skip";
    }
    return "?";
}

namespace {

std::vector<cobbie::agent::ToolDescription> describe(const ToolRepository& repo) {
    std::vector<cobbie::agent::ToolDescription> out;
    for (const ToolRecord* t : repo.active())
        out.push_back({t->name, t->signature, t->description});
    return out;
}

void install_all(cobbie::bql::ExecEnvironment& env, const ToolRepository& repo,
                 const ToolRecord* candidate) {
    for (const ToolRecord* t : repo.active()) {
        if (candidate && t->name == candidate->name) continue;
        env.install_tool(t->name, t->source);
    }
    if (candidate) env.install_tool(candidate->name, candidate->source);
}

// One role call expecting a JSON object; a malformed reply is re-requested
// once with the parse complaint appended.
std::optional<json> role_json(LlmProvider& provider, const std::string& session_id,
                              const std::string& role_prompt, const std::string& content,
                              std::string* error) {
    ProviderRequest req;
    req.session_id = session_id;
    req.system_prompt = role_prompt;
    req.messages.push_back({"user", content});
    for (int attempt = 0; attempt < 2; ++attempt) {
        req.turn = attempt;
        std::string raw;
        try {
            raw = provider.complete(req);
        } catch (const ProviderError& e) {
            *error = std::string("provider failure: ") + e.what();
            return std::nullopt;
        }
        json j = json::parse(raw, nullptr, false);
        if (!j.is_discarded() && j.is_object()) return j;
        req.messages.push_back({"assistant", raw});
        req.messages.push_back({"user", "That was not a JSON object. Reply with JSON only."});
    }
    *error = "malformed role verdict";
    return std::nullopt;
}

// Tool source synthesis with up to kRefinementTurns syntax-gated attempts.
std::optional<std::string> refine_source(LlmProvider& provider, const std::string& session_id,
                                         const std::string& role_prompt,
                                         const std::string& content, const std::string& tool_name,
                                         const cobbie::ifc::EntityGraph& graph,
                                         std::string* error) {
    ProviderRequest req;
    req.session_id = session_id;
    req.system_prompt = role_prompt;
    req.messages.push_back({"user", content});
    for (int attempt = 0; attempt < kRefinementTurns; ++attempt) {
        req.turn = attempt;
        std::string raw;
        try {
            raw = provider.complete(req);
        } catch (const ProviderError& e) {
            *error = std::string("provider failure: ") + e.what();
            return std::nullopt;
        }
        cobbie::bql::ExecEnvironment gate(graph);
        auto load_err = gate.install_tool(tool_name, raw);
        if (!load_err) return raw;
        req.messages.push_back({"assistant", raw});
        req.messages.push_back({"user", "The tool failed to load (line " +
                                            std::to_string(load_err->line) +
                                            "): " + load_err->message + " Emit only the "
                                            "corrected fn " + tool_name + "(...) definition."});
    }
    *error = "tool source failed the syntax gate " + std::to_string(kRefinementTurns) + " times";
    return std::nullopt;
}

}  // namespace

TrainingState run_training_step(const TrainingTuple& tuple, ToolRepository& repo,
                                LlmProvider& provider, const GraphLoader& graphs,
                                long question_index) {
    TrainingState st;
    auto enter = [&](Phase p, const std::string& summary) {
        st.phase = p;
        st.transcript.emplace_back(p, summary);
    };
    auto skip = [&](const std::string& why, bool abnormal = false) {
        enter(Phase::Skip, why);
        if (abnormal) st.diagnostic = why;
        return st;
    };

    const cobbie::ifc::EntityGraph* graph = nullptr;
    try {
        graph = &graphs(tuple.model_path);
    } catch (const std::exception& e) {
        return skip(std::string("model load failed: ") + e.what(), true);
    }

    // Generate: answer the question with the current repository installed.
    enter(Phase::Generate, "answer generation");
    cobbie::bql::ExecEnvironment gen_env(*graph);
    install_all(gen_env, repo, nullptr);
    cobbie::agent::AdaptiveConfig gen_cfg;
    gen_cfg.session_id = tuple.task_id + "/gen";
    gen_cfg.model_path = tuple.model_path;
    gen_cfg.tools = describe(repo);
    SessionRecord gen = cobbie::agent::run_adaptive(tuple.question, provider, gen_env, gen_cfg);
    st.generate_session = gen;
    if (gen.system_error) return skip("generation system error: " + gen.diagnostic, true);
    if (gen.abstained()) return skip("abstained answer");

    // Verify against ground truth.
    enter(Phase::Verify, "answer verification");
    std::string err;
    auto verdict = role_json(
        provider, tuple.task_id + "/verify",
        "You classify a system answer against ground truth. Reply with JSON: "
        "{\"verdict\": \"correct\"} or {\"verdict\": \"wrong\"}.",
        "Question: " + tuple.question + "\nGround truth: " + tuple.ground_truth +
            "\nSystem answer: " + gen.outcome_text,
        &err);
    if (!verdict) return skip("verify failed: " + err, true);
    std::string v = verdict->value("verdict", "");
    if (v != "correct" && v != "wrong") return skip("verify failed: unknown verdict", true);
    st.generate_correct = v == "correct";

    ToolRecord candidate;
    if (st.generate_correct) {
        // Path A: distill the successful exploration into a tool.
        enter(Phase::IdentifyTool, "tool identification");
        std::string trace;
        for (const auto& turn : gen.turns)
            if (turn.code) trace += *turn.code + "\n";
        auto idea = role_json(
            provider, tuple.task_id + "/identify",
            "You decide whether a successful exploration should become a reusable tool. "
            "Reply with JSON: {\"create\": bool, \"name\": str, \"signature\": str, "
            "\"description\": str}.",
            "Question: " + tuple.question + "\nExploration code:\n" + trace, &err);
        if (!idea) return skip("identify failed: " + err, true);
        if (!idea->value("create", false)) return skip("no tool recommended");
        candidate.name = idea->value("name", "");
        candidate.signature = idea->value("signature", candidate.name + "()");
        candidate.description = idea->value("description", "");
        if (candidate.name.empty()) return skip("identify failed: empty tool name", true);
        candidate.created_at_question = question_index;

        enter(Phase::CreateTool, candidate.name);
        auto source = refine_source(
            provider, tuple.task_id + "/create",
            "You write one BQL tool as a single fn definition. Emit only the code.",
            "Write " + candidate.signature + ": " + candidate.description +
                "\nBased on this exploration:\n" + trace,
            candidate.name, *graph, &err);
        if (!source) return skip("create failed: " + err, true);
        candidate.source = *source;
    } else {
        // Path B: find and fix the tool that misled the answer.
        enter(Phase::AnalyzeError, "error analysis");
        std::string trace;
        for (const auto& turn : gen.turns) {
            if (!turn.code) continue;
            trace += *turn.code + "\n";
            if (turn.exec && turn.exec->error) trace += "error: " + *turn.exec->error + "\n";
        }
        auto blame = role_json(
            provider, tuple.task_id + "/analyze",
            "You analyze a wrong answer and name the faulty installed tool, if any. "
            "Reply with JSON: {\"faulty_tool\": str or null}.",
            "Question: " + tuple.question + "\nGround truth: " + tuple.ground_truth +
                "\nSystem answer: " + gen.outcome_text + "\nTrace:\n" + trace,
            &err);
        if (!blame) return skip("analyze failed: " + err, true);
        if (!blame->contains("faulty_tool") || (*blame)["faulty_tool"].is_null())
            return skip("no faulty tool identified");
        std::string name = (*blame)["faulty_tool"].get<std::string>();
        ToolRecord* faulty = repo.find_active(name);
        if (!faulty) return skip("blamed tool is not in the repository");
        if (faulty->manual) return skip("blamed tool is a read-only manual tool");
        candidate = *faulty;
        st.debugged = true;

        enter(Phase::DebugTool, name);
        auto source = refine_source(
            provider, tuple.task_id + "/debug",
            "You fix a faulty BQL tool. Emit only the corrected fn definition.",
            "Tool " + candidate.signature + " produced a wrong answer.\nCurrent source:\n" +
                candidate.source + "\nQuestion: " + tuple.question + "\nGround truth: " +
                tuple.ground_truth + "\nTrace:\n" + trace,
            name, *graph, &err);
        if (!source) return skip("debug failed: " + err, true);
        candidate.source = *source;
    }
    st.candidate_tool = candidate;

    // Convergent testing: re-run the question with the candidate installed.
    enter(Phase::TestTool, candidate.name);
    cobbie::bql::ExecEnvironment test_env(*graph);
    install_all(test_env, repo, &candidate);
    cobbie::agent::AdaptiveConfig test_cfg;
    test_cfg.session_id = tuple.task_id + "/test";
    test_cfg.model_path = tuple.model_path;
    test_cfg.tools = describe(repo);
    bool listed = false;
    for (auto& d : test_cfg.tools)
        if (d.name == candidate.name) {
            d = {candidate.name, candidate.signature, candidate.description};
            listed = true;
        }
    if (!listed)
        test_cfg.tools.push_back({candidate.name, candidate.signature, candidate.description});
    SessionRecord rerun =
        cobbie::agent::run_adaptive(tuple.question, provider, test_env, test_cfg);
    if (rerun.system_error) return skip("test re-run system error: " + rerun.diagnostic, true);

    // Independent assessment of the candidate's contribution.
    enter(Phase::AssessTool, candidate.name);
    auto assess = role_json(
        provider, tuple.task_id + "/assess",
        "You independently assess whether a candidate tool contributed to a correct "
        "answer. Reply with JSON: {\"assessment\": \"positive\"} or "
        "{\"assessment\": \"negative\"}.",
        "Question: " + tuple.question + "\nGround truth: " + tuple.ground_truth +
            "\nAnswer with the tool: " + rerun.outcome_text + "\nTool:\n" + candidate.source,
        &err);
    if (!assess) return skip("assess failed: " + err, true);
    if (assess->value("assessment", "") != "positive") return skip("negative assessment");

    enter(Phase::Persist, candidate.name);
    repo.insert_or_replace(candidate);
    return st;
}

TrainingReport run_training(const std::vector<TrainingTuple>& partition, ToolRepository& repo,
                            LlmProvider& provider, const GraphLoader& graphs) {
    for (const auto& t : partition)
        if (t.split == "test")
            throw std::invalid_argument("test-split task in training partition: " + t.task_id);

    TrainingReport report;
    long qi = 0;
    for (const auto& tuple : partition) {
        std::vector<std::string> installed;
        for (const ToolRecord* t : repo.active()) installed.push_back(t->name);
        TrainingState st = run_training_step(tuple, repo, provider, graphs, qi);
        ++report.processed;
        if (st.phase == Phase::Persist && st.candidate_tool) {
            if (st.debugged)
                report.debugged.push_back(st.candidate_tool->name);
            else
                report.created.push_back(st.candidate_tool->name);
        }
        if (!st.diagnostic.empty())
            report.failures.push_back(tuple.task_id + ": " + st.diagnostic);
        if (st.generate_session)
            repo.record_usage(*st.generate_session, st.generate_correct, &installed);
        for (auto& name : repo.prune(qi)) report.pruned.push_back(name);
        ++qi;
    }
    report.final_tools = repo.tools();
    return report;
}

}  // namespace cobbie::forge
