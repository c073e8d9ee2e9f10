#include "cobbie/agent/prompt.hpp"

namespace cobbie::agent {

PromptConfig PromptConfig::defaults() {
    PromptConfig cfg;
    cfg.sourcing_policy = {
        "1. Direct retrieval: read the value straight from the model (attributes, "
        "property sets, quantity sets).",
        "2. Simple computation: derive the value with counts, sums, or lookups over "
        "retrieved data.",
        "3. Complex computation: compute from geometry or multi-step traversal when no "
        "stored value exists.",
        "4. Stated assumptions: only when the model cannot answer directly, state every "
        "assumption explicitly in the final answer.",
    };
    cfg.quality_criteria = {
        "Abstention: if the required information is not in the model, answer exactly "
        "\"Information not found in BIM model\".",
        "Faithfulness: every claim must be grounded in model data or explicitly stated "
        "assumptions.",
        "Completeness: answer all parts of the question.",
        "Transparency: the reasoning and any assumptions must be visible in the answer.",
        "Relevance: answer the question asked, without unrelated material.",
    };
    return cfg;
}

std::string build_system_prompt(const std::vector<ToolDescription>& tools,
                                const std::string& grammar, const PromptConfig& cfg) {
    std::string p;
    p += "You are an agent that answers questions about a building model by writing and "
         "executing BQL code against it.\n\n";
    p += "Respond in exactly one of two ways:\n";
    p += "1. A code action: optional reasoning, then a fenced block\n";
    p += "```action\n<BQL code>\n```\n";
    p += "The code is executed and you receive its printed output and errors.\n";
    p += "2. A final answer: a line starting with\n";
    p += "FINAL: <your answer>\n\n";

    p += "## BQL grammar\n\n";
    p += grammar;
    if (!grammar.empty() && grammar.back() != '\n') p += '\n';
    p += "\n## Builtins\n\n";
    p += "types(), by_type(name[, subtypes]), attrs(e), attr(e, name), name_of(e), "
         "guid(e), typeof(e), psets(e), pset(e, name), pset_value(e, pset, prop), "
         "quantities(e), quantity(e, qset, q), container(e), contained(e), parent(e), "
         "children(e), extruded_volume(e), footprint_area(e), polygon_area(pts), "
         "count(l), sum(l), min(l), max(l), unique(l), filter(l, fn), map(l, fn), "
         "lower(s), str_contains(s, sub), keys(m), print(x), str(x), source(tool), "
         "docs(query) when documentation retrieval is enabled.\n";

    if (!tools.empty()) {
        p += "\n## Tools\n\n";
        p += "Prefer these helper functions over rebuilding their logic. Full source is "
             "available via source(\"name\").\n";
        for (const auto& t : tools) {
            p += "- " + t.signature + " : " + t.description + "\n";
        }
    }

    p += "\n## Answer sourcing policy\n\n";
    p += "Source answers in this order of preference:\n";
    for (const auto& line : cfg.sourcing_policy) p += line + "\n";

    p += "\n## Quality criteria\n\n";
    p += "Your answer is judged on these five criteria:\n";
    for (const auto& line : cfg.quality_criteria) p += "- " + line + "\n";

    return p;
}

}  // namespace cobbie::agent
