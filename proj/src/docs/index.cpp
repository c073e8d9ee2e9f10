#include "cobbie/docs/index.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cobbie::docs {

using nlohmann::json;

namespace {

constexpr const char* kMagic = "cobbie-docidx";
constexpr int kVersion = 1;
constexpr char kCborHeader[] = "CBDI1\n";

std::vector<std::pair<std::string, double>> ranked_by_similarity(
    std::vector<std::pair<std::string, double>> scored, std::size_t limit) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > limit) scored.resize(limit);
    return scored;
}

}  // namespace

const DocChunk* DocIndex::find(const std::string& chunk_id) const {
    for (const auto& c : chunks)
        if (c.chunk_id == chunk_id) return &c;
    return nullptr;
}

DocIndex build_index(const std::vector<DocChunk>& chunks, const Embedder& embedder) {
    DocIndex index;
    index.embed_dim = embedder.dimension();
    for (const auto& src : chunks) {
        if (!src.useful) continue;
        DocChunk c = src;
        c.embedding = embedder.embed(c.title + "\n" + c.body);
        index.sparse.add(c.chunk_id, c.title + "\n" + c.body);
        for (const auto& q : c.reverse_questions)
            index.questions.push_back({q, embedder.embed(q), c.chunk_id});
        index.chunks.push_back(std::move(c));
    }
    return index;
}

std::vector<std::pair<std::string, double>> dense_search(
    const DocIndex& index, const std::vector<double>& query_embedding, std::size_t limit) {
    if (query_embedding.size() != index.embed_dim)
        throw std::invalid_argument("embedding dimension mismatch");
    std::vector<std::pair<std::string, double>> scored;
    for (const auto& c : index.chunks)
        scored.emplace_back(c.chunk_id, cosine(query_embedding, c.embedding));
    return ranked_by_similarity(std::move(scored), limit);
}

std::vector<std::pair<std::string, double>> question_search(
    const DocIndex& index, const std::vector<double>& query_embedding, std::size_t limit) {
    if (query_embedding.size() != index.embed_dim)
        throw std::invalid_argument("embedding dimension mismatch");
    // best question similarity per parent
    std::map<std::string, double> best;
    for (const auto& q : index.questions) {
        double sim = cosine(query_embedding, q.embedding);
        auto it = best.find(q.parent_chunk_id);
        if (it == best.end() || sim > it->second) best[q.parent_chunk_id] = sim;
    }
    std::vector<std::pair<std::string, double>> scored(best.begin(), best.end());
    return ranked_by_similarity(std::move(scored), limit);
}

void save_index(const DocIndex& index, const std::string& path) {
    json j;
    j["magic"] = kMagic;
    j["version"] = kVersion;
    j["embed_dim"] = index.embed_dim;
    json chunks = json::array();
    for (const auto& c : index.chunks) {
        chunks.push_back({{"chunk_id", c.chunk_id},
                          {"kind", c.kind == ChunkKind::CodeUnit ? "code-unit" : "doc-section"},
                          {"title", c.title},
                          {"body", c.body},
                          {"reverse_questions", c.reverse_questions},
                          {"embedding", c.embedding},
                          {"useful", c.useful},
                          {"diagnostic", c.diagnostic}});
    }
    j["chunks"] = std::move(chunks);
    json questions = json::array();
    for (const auto& q : index.questions)
        questions.push_back({{"question", q.question},
                             {"embedding", q.embedding},
                             {"parent", q.parent_chunk_id}});
    j["questions"] = std::move(questions);

    std::ofstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot write index file: " + path);
    bool as_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (as_json) {
        f << j.dump(2) << "\n";
    } else {
        f.write(kCborHeader, sizeof(kCborHeader) - 1);
        std::vector<std::uint8_t> cbor = json::to_cbor(j);
        f.write(reinterpret_cast<const char*>(cbor.data()),
                static_cast<std::streamsize>(cbor.size()));
    }
}

DocIndex load_index(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot open index file: " + path);
    std::string raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    json j;
    bool as_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (as_json) {
        j = json::parse(raw, nullptr, false);
    } else {
        if (raw.compare(0, sizeof(kCborHeader) - 1, kCborHeader) != 0)
            throw std::runtime_error("bad index magic header: " + path);
        j = json::from_cbor(raw.begin() + sizeof(kCborHeader) - 1, raw.end(), true, false);
    }
    if (j.is_discarded() || j.value("magic", "") != kMagic)
        throw std::runtime_error("unrecognized index file: " + path);
    if (j.value("version", 0) != kVersion)
        throw std::runtime_error("unsupported index version in " + path);

    std::vector<DocChunk> chunks;
    for (const auto& cj : j["chunks"]) {
        DocChunk c;
        c.chunk_id = cj["chunk_id"].get<std::string>();
        c.kind = cj["kind"] == "code-unit" ? ChunkKind::CodeUnit : ChunkKind::DocSection;
        c.title = cj["title"].get<std::string>();
        c.body = cj["body"].get<std::string>();
        c.reverse_questions = cj["reverse_questions"].get<std::vector<std::string>>();
        c.useful = cj["useful"].get<bool>();
        c.diagnostic = cj["diagnostic"].get<std::string>();
        chunks.push_back(std::move(c));
    }
    // re-derive channel structures from the stored chunks and embeddings
    DocIndex index;
    index.embed_dim = j["embed_dim"].get<std::size_t>();
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        DocChunk c = std::move(chunks[i]);
        c.embedding = j["chunks"][i]["embedding"].get<std::vector<double>>();
        index.sparse.add(c.chunk_id, c.title + "\n" + c.body);
        index.chunks.push_back(std::move(c));
    }
    for (const auto& qj : j["questions"]) {
        index.questions.push_back({qj["question"].get<std::string>(),
                                   qj["embedding"].get<std::vector<double>>(),
                                   qj["parent"].get<std::string>()});
    }
    return index;
}

}  // namespace cobbie::docs
