#include "cobbie/eval/judge.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cobbie::eval {

using cobbie::agent::ProviderError;
using cobbie::agent::ProviderRequest;
using nlohmann::json;

const std::string& category_rubric(int category) {
    static const std::string common =
        "Judge five binary criteria.\n"
        "abstained: the answer declines to answer rather than committing to one.\n"
        "faithfulness: every claim is supported by the execution trace.\n"
        "completeness: all parts of the question are answered.\n"
        "transparency: the answer states how the result was obtained.\n"
        "relevance: the answer addresses the question that was asked.\n";
    static const std::string rubrics[] = {
        common +
            "Category 1 (direct lookup): faithfulness requires grounding in BIM "
            "data only; outside knowledge fails the criterion.\n",
        common +
            "Category 2 (derived quantity): faithfulness requires the derivation "
            "steps to appear in the trace.\n",
        common +
            "Category 3 (documentation-dependent): faithfulness requires the "
            "cited convention to come from retrieved documentation.\n",
        common +
            "Category 4 (under-specified): stated, clearly flagged assumptions "
            "are permitted and do not fail faithfulness.\n",
    };
    if (category < 1 || category > 4) throw std::invalid_argument("category out of range");
    return rubrics[category - 1];
}

namespace {

std::string render_trace(const cobbie::agent::SessionRecord& trace) {
    std::string out;
    for (const auto& turn : trace.turns) {
        if (!turn.code) continue;
        out += "code:\n" + *turn.code + "\n";
        if (turn.exec) {
            out += "output:\n" + turn.exec->printed;
            if (turn.exec->error) out += "error: " + *turn.exec->error + "\n";
        }
    }
    return out;
}

}  // namespace

EvalRecord judge(const JudgeInput& input, cobbie::agent::LlmProvider& provider) {
    EvalRecord rec;
    rec.task_id = input.trace.session_id;
    rec.category = input.category;
    if (input.trace.system_error) {
        rec.system_error = true;
        return rec;
    }
    if (input.system_answer == cobbie::agent::kAbstentionString) {
        rec.abstained = true;
        return rec;
    }

    ProviderRequest req;
    req.session_id = input.trace.session_id + "/judge";
    req.system_prompt = category_rubric(input.category) +
                        "Reply with JSON only: {\"abstained\": bool, \"faithfulness\": bool, "
                        "\"completeness\": bool, \"transparency\": bool, \"relevance\": bool}.";
    req.messages.push_back({"user", "Question: " + input.question + "\nGround truth: " +
                                        input.ground_truth + "\nSystem answer: " +
                                        input.system_answer + "\nExecution trace:\n" +
                                        render_trace(input.trace)});
    for (int attempt = 0; attempt < 3; ++attempt) {
        req.turn = attempt;
        std::string raw;
        try {
            raw = provider.complete(req);
        } catch (const ProviderError&) {
            rec.system_error = true;
            return rec;
        }
        json j = json::parse(raw, nullptr, false);
        bool shaped = !j.is_discarded() && j.is_object() && j.contains("abstained") &&
                      j["abstained"].is_boolean();
        if (shaped && j["abstained"].get<bool>()) {
            rec.abstained = true;
            return rec;
        }
        if (shaped)
            for (const char* key : {"faithfulness", "completeness", "transparency", "relevance"})
                shaped = shaped && j.contains(key) && j[key].is_boolean();
        if (shaped) {
            rec.faithfulness = j["faithfulness"].get<bool>();
            rec.completeness = j["completeness"].get<bool>();
            rec.transparency = j["transparency"].get<bool>();
            rec.relevance = j["relevance"].get<bool>();
            return rec;
        }
        req.messages.push_back({"assistant", raw});
        req.messages.push_back(
            {"user", "That was not a valid verdict. Reply with the JSON object only."});
    }
    rec.system_error = true;
    return rec;
}

void save_records(const std::vector<EvalRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot write eval records: " + path);
    for (const auto& r : records) {
        json j{{"task_id", r.task_id}, {"category", r.category},    {"c0", r.abstained},
               {"system_error", r.system_error}, {"config_id", r.config_id}};
        auto put = [&](const char* key, const std::optional<bool>& v) {
            if (v)
                j[key] = *v;
            else
                j[key] = nullptr;
        };
        put("c1", r.faithfulness);
        put("c2", r.completeness);
        put("c3", r.transparency);
        put("c4", r.relevance);
        f << j.dump() << "\n";
    }
}

std::vector<EvalRecord> load_records(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot open eval records: " + path);
    std::vector<EvalRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("malformed eval record at line " + std::to_string(lineno));
        EvalRecord r;
        r.task_id = j.at("task_id").get<std::string>();
        r.category = j.value("category", 0);
        r.abstained = j.value("c0", false);
        r.system_error = j.value("system_error", false);
        r.config_id = j.value("config_id", "");
        auto get = [&](const char* key) -> std::optional<bool> {
            if (!j.contains(key) || j[key].is_null()) return std::nullopt;
            return j[key].get<bool>();
        };
        r.faithfulness = get("c1");
        r.completeness = get("c2");
        r.transparency = get("c3");
        r.relevance = get("c4");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cobbie::eval
