#include "cobbie/docs/bm25.hpp"

#include <algorithm>
#include <cmath>

#include "cobbie/docs/embed.hpp"

namespace cobbie::docs {

double SparseIndex::avg_len() const {
    if (doc_len.empty()) return 0.0;
    double total = 0;
    for (const auto& [id, len] : doc_len) total += len;
    return total / static_cast<double>(doc_len.size());
}

void SparseIndex::add(const std::string& chunk_id, const std::string& text) {
    auto tokens = tokenize(text);
    auto& tf = term_freq[chunk_id];
    doc_len[chunk_id] = static_cast<int>(tokens.size());
    for (const auto& t : tokens) {
        if (++tf[t] == 1) ++doc_freq[t];
    }
}

std::vector<std::pair<std::string, double>> bm25_scores(
    const SparseIndex& index, const std::vector<std::string>& query_terms, double k1, double b) {
    std::vector<std::pair<std::string, double>> out;
    if (query_terms.empty() || index.size() == 0) return out;
    const double N = static_cast<double>(index.size());
    const double avg = index.avg_len();

    for (const auto& [chunk_id, tf_map] : index.term_freq) {
        double score = 0.0;
        double len = index.doc_len.at(chunk_id);
        for (const auto& term : query_terms) {
            auto tf_it = tf_map.find(term);
            if (tf_it == tf_map.end()) continue;
            double n = index.doc_freq.at(term);
            double idf = std::log((N - n + 0.5) / (n + 0.5) + 1.0);
            double tf = tf_it->second;
            score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avg));
        }
        if (score > 0.0) out.emplace_back(chunk_id, score);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b2) {
        if (a.second != b2.second) return a.second > b2.second;
        return a.first < b2.first;
    });
    return out;
}

}  // namespace cobbie::docs
