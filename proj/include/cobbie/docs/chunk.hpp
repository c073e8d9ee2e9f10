#pragma once
// Structural corpus chunking: code units for source files, sections for
// documents. Chunk ids are deterministic (path + anchor).

#include <string>
#include <vector>

namespace cobbie::docs {

enum class ChunkKind { CodeUnit, DocSection };

struct DocChunk {
    std::string chunk_id;
    ChunkKind kind = ChunkKind::DocSection;
    std::string title;  // function signature or section heading
    std::string body;
    std::vector<std::string> reverse_questions;  // 3-5 when useful
    std::vector<double> embedding;
    bool useful = false;
    std::string diagnostic;
};

struct CorpusFile {
    std::string path;
    std::string kind;  // "source" | "document"
    std::string text;
};

std::vector<DocChunk> chunk_corpus(const std::vector<CorpusFile>& files);

}  // namespace cobbie::docs
