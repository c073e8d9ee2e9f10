#pragma once
// Query-time pipeline (three channels, fusion, rerank, formatting) and the
// index-time review step.

#include "cobbie/agent/provider.hpp"
#include "cobbie/docs/index.hpp"
#include "cobbie/docs/rerank.hpp"

namespace cobbie::docs {

// Formats the final top-k as numbered blocks [1]..[k], title then body.
std::string retrieve(const DocIndex& index, const std::string& query,
                     const RetrievalConfig& cfg, const Embedder& embedder,
                     const Reranker& reranker);

// Same pipeline, stopping before formatting. Used by static-mode prefetch.
std::vector<RerankCandidate> retrieve_chunks(const DocIndex& index, const std::string& query,
                                             const RetrievalConfig& cfg, const Embedder& embedder,
                                             const Reranker& reranker);

// Index-time review: the provider returns a JSON verdict
//   {"useful": bool, "questions": ["..."]}
// A verdict with under 3 or over 5 questions is re-requested once; failure
// marks the chunk non-useful with a diagnostic.
DocChunk review_and_expand(const DocChunk& chunk, cobbie::agent::LlmProvider& provider);

}  // namespace cobbie::docs
