#include "cobbie/docs/retrieve.hpp"

#include "cobbie/docs/fuse.hpp"

#include "json.hpp"

namespace cobbie::docs {

using nlohmann::json;

std::vector<RerankCandidate> retrieve_chunks(const DocIndex& index, const std::string& query,
                                             const RetrievalConfig& cfg, const Embedder& embedder,
                                             const Reranker& reranker) {
    if (index.chunks.empty()) return {};
    std::vector<double> qe = embedder.embed(query);
    std::size_t limit = static_cast<std::size_t>(cfg.n_r);

    std::vector<std::vector<std::string>> channels;
    auto push_channel = [&](const std::vector<std::pair<std::string, double>>& ranked) {
        std::vector<std::string> ids;
        for (const auto& [id, score] : ranked) ids.push_back(id);
        channels.push_back(std::move(ids));
    };
    push_channel(dense_search(index, qe, limit));
    push_channel(bm25_scores(index.sparse, tokenize(query), cfg.bm25_k1, cfg.bm25_b));
    push_channel(question_search(index, qe, limit));

    auto fused = rrf_fuse(channels, cfg.rrf_constant);
    std::vector<RerankCandidate> candidates;
    for (const auto& [id, score] : fused) {
        if (candidates.size() >= limit) break;
        const DocChunk* c = index.find(id);
        if (c) candidates.push_back({id, c->title + "\n" + c->body});
    }
    return rerank(candidates, query, reranker, static_cast<std::size_t>(cfg.k));
}

std::string retrieve(const DocIndex& index, const std::string& query, const RetrievalConfig& cfg,
                     const Embedder& embedder, const Reranker& reranker) {
    auto top = retrieve_chunks(index, query, cfg, embedder, reranker);
    std::string out;
    for (std::size_t i = 0; i < top.size(); ++i) {
        out += "[" + std::to_string(i + 1) + "] " + top[i].text;
        if (out.back() != '\n') out += '\n';
        out += '\n';
    }
    return out;
}

DocChunk review_and_expand(const DocChunk& chunk, cobbie::agent::LlmProvider& provider) {
    DocChunk out = chunk;
    out.useful = false;
    out.reverse_questions.clear();

    cobbie::agent::ProviderRequest req;
    req.session_id = chunk.chunk_id;
    req.system_prompt =
        "You review documentation chunks for a retrieval index. Reply with JSON: "
        "{\"useful\": bool, \"questions\": [3 to 5 questions a user might ask that this "
        "chunk answers]}. Non-useful chunks need no questions.";
    req.messages.push_back({"user", chunk.title + "\n" + chunk.body});

    for (int attempt = 0; attempt < 2; ++attempt) {
        req.turn = attempt;
        std::string raw;
        try {
            raw = provider.complete(req);
        } catch (const cobbie::agent::ProviderError& e) {
            out.diagnostic = std::string("review provider failed: ") + e.what();
            return out;
        }
        json j = json::parse(raw, nullptr, false);
        if (j.is_discarded() || !j.contains("useful")) {
            out.diagnostic = "malformed review verdict";
            continue;
        }
        if (!j["useful"].get<bool>()) {
            out.diagnostic = "reviewed non-useful";
            return out;
        }
        auto qs = j.value("questions", std::vector<std::string>{});
        if (qs.size() < 3 || qs.size() > 5) {
            out.diagnostic = "verdict had " + std::to_string(qs.size()) +
                             " questions, outside 3-5";
            continue;
        }
        out.useful = true;
        out.reverse_questions = std::move(qs);
        out.diagnostic.clear();
        return out;
    }
    return out;  // two bad verdicts: stays non-useful with the diagnostic
}

}  // namespace cobbie::docs
