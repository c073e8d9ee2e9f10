#pragma once
// Okapi BM25 over an inverted index.

#include <map>
#include <string>
#include <vector>

namespace cobbie::docs {

struct SparseIndex {
    // chunk_id -> term -> term frequency
    std::map<std::string, std::map<std::string, int>> term_freq;
    // chunk_id -> token count
    std::map<std::string, int> doc_len;
    // term -> number of chunks containing it
    std::map<std::string, int> doc_freq;

    std::size_t size() const { return doc_len.size(); }
    double avg_len() const;
    void add(const std::string& chunk_id, const std::string& text);
};

// IDF = ln((N - n + 0.5)/(n + 0.5) + 1); descending score, ties by chunk_id.
// Only chunks with positive score appear.
std::vector<std::pair<std::string, double>> bm25_scores(const SparseIndex& index,
                                                        const std::vector<std::string>& query_terms,
                                                        double k1 = 1.5, double b = 0.75);

}  // namespace cobbie::docs
