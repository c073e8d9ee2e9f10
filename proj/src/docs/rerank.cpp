#include "cobbie/docs/rerank.hpp"

#include <algorithm>
#include <set>

#include "cobbie/docs/embed.hpp"

namespace cobbie::docs {

double TokenOverlapReranker::score(const std::string& query, const std::string& candidate) const {
    std::set<std::string> q, c;
    for (const auto& t : tokenize(query)) q.insert(t);
    for (const auto& t : tokenize(candidate)) c.insert(t);
    if (q.empty() || c.empty()) return 0.0;
    std::size_t overlap = 0;
    for (const auto& t : q)
        if (c.count(t)) ++overlap;
    double precision = static_cast<double>(overlap) / static_cast<double>(c.size());
    double recall = static_cast<double>(overlap) / static_cast<double>(q.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

std::vector<RerankCandidate> rerank(const std::vector<RerankCandidate>& candidates,
                                    const std::string& query, const Reranker& reranker,
                                    std::size_t k, std::string* diagnostic) {
    std::vector<std::pair<double, std::size_t>> scored;
    try {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            scored.emplace_back(reranker.score(query, candidates[i].text), i);
        // stable on score ties: fusion order preserved
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
    } catch (const std::exception& e) {
        if (diagnostic) *diagnostic = std::string("reranker failed, fusion order kept: ") + e.what();
        scored.clear();
        for (std::size_t i = 0; i < candidates.size(); ++i) scored.emplace_back(0.0, i);
    }
    std::vector<RerankCandidate> out;
    for (const auto& [s, i] : scored) {
        if (out.size() >= k) break;
        out.push_back(candidates[i]);
    }
    return out;
}

}  // namespace cobbie::docs
