#pragma once
// Pluggable reranking of fusion candidates.

#include <string>
#include <vector>

namespace cobbie::docs {

struct RerankCandidate {
    std::string chunk_id;
    std::string text;  // title + body
};

class Reranker {
public:
    virtual ~Reranker() = default;
    // Higher is more relevant. May throw; rerank() then keeps fusion order.
    virtual double score(const std::string& query, const std::string& candidate) const = 0;
};

// Deterministic fallback: normalized token-overlap F1.
class TokenOverlapReranker : public Reranker {
public:
    double score(const std::string& query, const std::string& candidate) const override;
};

// Candidates arrive in fusion order; output truncated to k. A reranker
// failure preserves fusion order and reports a diagnostic.
std::vector<RerankCandidate> rerank(const std::vector<RerankCandidate>& candidates,
                                    const std::string& query, const Reranker& reranker,
                                    std::size_t k, std::string* diagnostic = nullptr);

}  // namespace cobbie::docs
