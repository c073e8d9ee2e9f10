#pragma once
// The built retrieval index: dense, sparse, and reverse-question channels.

#include <optional>
#include <string>
#include <vector>

#include "cobbie/docs/bm25.hpp"
#include "cobbie/docs/chunk.hpp"
#include "cobbie/docs/embed.hpp"

namespace cobbie::docs {

struct RetrievalConfig {
    int n_r = 30;  // fusion candidates passed to the reranker
    int k = 5;     // chunks injected into the prompt
    int rrf_constant = 60;
    double bm25_k1 = 1.5;
    double bm25_b = 0.75;
};

struct QuestionEntry {
    std::string question;
    std::vector<double> embedding;
    std::string parent_chunk_id;
};

// Immutable once built; only useful chunks are indexed.
struct DocIndex {
    std::size_t embed_dim = 0;
    std::vector<DocChunk> chunks;  // useful chunks, embeddings filled
    SparseIndex sparse;
    std::vector<QuestionEntry> questions;

    const DocChunk* find(const std::string& chunk_id) const;
};

DocIndex build_index(const std::vector<DocChunk>& chunks, const Embedder& embedder);

// (chunk_id, cosine) descending, ties by chunk_id. Throws on dim mismatch.
std::vector<std::pair<std::string, double>> dense_search(const DocIndex& index,
                                                         const std::vector<double>& query_embedding,
                                                         std::size_t limit);

// Parents of best-matching reverse questions, deduplicated by best rank.
std::vector<std::pair<std::string, double>> question_search(
    const DocIndex& index, const std::vector<double>& query_embedding, std::size_t limit);

// Format chosen by extension: ".json" is plain JSON, anything else is CBOR
// behind a magic header. Both carry a format version.
void save_index(const DocIndex& index, const std::string& path);
DocIndex load_index(const std::string& path);

}  // namespace cobbie::docs
