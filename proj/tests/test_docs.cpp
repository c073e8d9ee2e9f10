#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cobbie/docs/fuse.hpp"
#include "cobbie/docs/retrieve.hpp"

using namespace cobbie::docs;

namespace {

std::string fixture(const std::string& rel) { return std::string(COBBIE_FIXTURE_DIR) + "/" + rel; }

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

DocChunk make_chunk(const std::string& id, const std::string& title, const std::string& body,
                    std::vector<std::string> questions = {"q one", "q two", "q three"}) {
    DocChunk c;
    c.chunk_id = id;
    c.title = title;
    c.body = body;
    c.useful = true;
    c.reverse_questions = std::move(questions);
    return c;
}

// Ten-chunk corpus used for the end-to-end golden test and persistence tests.
std::vector<DocChunk> toy_corpus() {
    return {
        make_chunk("a#0", "get_door_width(door)", "Returns the width of a door element.",
                   {"how wide is a door", "door width lookup", "width of door"}),
        make_chunk("a#1", "get_wall_height(wall)", "Returns the height of a wall.",
                   {"how tall is a wall", "wall height lookup", "height of wall"}),
        make_chunk("a#2", "list_storeys(model)", "Lists building storeys in order.",
                   {"which storeys exist", "list the floors", "storey names"}),
        make_chunk("b#0", "# Property sets", "Property sets attach key value pairs to elements.",
                   {"what is a property set", "pset definition", "property set meaning"}),
        make_chunk("b#1", "# Quantity sets", "Quantity sets carry measured values like volume.",
                   {"what is a quantity set", "where are volumes stored", "qto meaning"}),
        make_chunk("b#2", "# Spatial structure", "Projects contain sites, buildings, storeys.",
                   {"how is a model organized", "spatial hierarchy", "containment tree"}),
        make_chunk("c#0", "polygon_area(points)", "Shoelace area of a 2D ring.",
                   {"compute polygon area", "area of a ring", "shoelace formula"}),
        make_chunk("c#1", "extruded_volume(e)", "Volume of an extruded solid.",
                   {"compute element volume", "extrusion volume", "how to get volume"}),
        make_chunk("c#2", "container(e)", "Spatial container of an element.",
                   {"which storey holds an element", "find the container", "element location"}),
        make_chunk("c#3", "by_type(name)", "All instances of an IFC type.",
                   {"find all walls", "list elements of a type", "query by type"}),
    };
}

}  // namespace

TEST_CASE("chunk_corpus: source file with three top-level functions") {
    CorpusFile f{"lib.py", "source",
                 "# helpers\n"
                 "def alpha(x):\n    return x\n\n"
                 "# doc for beta\ndef beta(y):\n    return y * 2\n\n"
                 "def gamma():\n    pass\n"};
    auto chunks = chunk_corpus({f});
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].kind == ChunkKind::CodeUnit);
    CHECK(chunks[0].title == "def alpha(x):");
    CHECK(chunks[1].title == "def beta(y):");
    CHECK(chunks[1].body.find("# doc for beta") != std::string::npos);
    CHECK(chunks[0].body.find("# doc for beta") == std::string::npos);
    CHECK(chunks[2].title == "def gamma():");
}

TEST_CASE("chunk_corpus: document split at section headers") {
    CorpusFile f{"guide.md", "document", "# A\ntext a\n## B\ntext b\n"};
    auto chunks = chunk_corpus({f});
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].title == "# A");
    CHECK(chunks[1].title == "## B");
    CHECK(chunks[1].kind == ChunkKind::DocSection);
}

TEST_CASE("chunk_corpus: deterministic chunk ids, unparseable file kept whole") {
    CorpusFile src{"x.md", "document", "no headings here\njust prose\n"};
    auto a = chunk_corpus({src});
    auto b = chunk_corpus({src});
    REQUIRE(a.size() == 1);
    CHECK(!a[0].diagnostic.empty());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].chunk_id == b[i].chunk_id);
}

TEST_CASE("review_and_expand: verdicts drive usefulness and questions") {
    DocChunk c = make_chunk("x#0", "t", "b", {});
    c.useful = false;
    SUBCASE("useful with three questions") {
        auto provider = cobbie::agent::ReplayProvider::from_records(
            {{"x#0", 0, R"({"useful": true, "questions": ["q1", "q2", "q3"]})"}});
        DocChunk out = review_and_expand(c, provider);
        CHECK(out.useful);
        CHECK(out.reverse_questions.size() == 3);
    }
    SUBCASE("non-useful verdict excludes the chunk") {
        auto provider = cobbie::agent::ReplayProvider::from_records(
            {{"x#0", 0, R"({"useful": false})"}});
        DocChunk out = review_and_expand(c, provider);
        CHECK(!out.useful);
    }
    SUBCASE("six questions twice leaves the chunk non-useful with a diagnostic") {
        std::string six = R"({"useful": true, "questions": ["1","2","3","4","5","6"]})";
        auto provider =
            cobbie::agent::ReplayProvider::from_records({{"x#0", 0, six}, {"x#0", 1, six}});
        DocChunk out = review_and_expand(c, provider);
        CHECK(!out.useful);
        CHECK(!out.diagnostic.empty());
    }
    SUBCASE("provider failure marks non-useful with a diagnostic") {
        auto provider = cobbie::agent::ReplayProvider::from_records({});
        DocChunk out = review_and_expand(c, provider);
        CHECK(!out.useful);
        CHECK(out.diagnostic.find("provider failed") != std::string::npos);
    }
}

TEST_CASE("bm25: worked three-document corpus") {
    SparseIndex idx;
    idx.add("doc1", "wall wall door slab");                       // tf(wall)=2, len 4
    idx.add("doc2", "wall door door slab slab roof roof beam");   // tf(wall)=1, len 8
    idx.add("doc3", "door slab roof beam column window");         // len 6, no wall
    REQUIRE(idx.avg_len() == doctest::Approx(6.0));

    auto ranked = bm25_scores(idx, {"wall"}, 1.5, 0.75);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].first == "doc1");
    CHECK(ranked[1].first == "doc2");

    // independent evaluation of the Okapi formula
    double idf = std::log((3.0 - 2.0 + 0.5) / (2.0 + 0.5) + 1.0);
    auto okapi = [&](double tf, double len) {
        return idf * tf * 2.5 / (tf + 1.5 * (1.0 - 0.75 + 0.75 * len / 6.0));
    };
    CHECK(ranked[0].second == doctest::Approx(okapi(2, 4)).epsilon(1e-9));
    CHECK(ranked[1].second == doctest::Approx(okapi(1, 8)).epsilon(1e-9));
}

TEST_CASE("bm25: absent term and single-document corpus") {
    SparseIndex idx;
    idx.add("only", "alpha beta gamma");
    CHECK(bm25_scores(idx, {"missing"}).empty());
    CHECK(bm25_scores(idx, {}).empty());
    auto ranked = bm25_scores(idx, {"beta"});
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].first == "only");
}

TEST_CASE("bm25: randomized corpora match an independent formula evaluation") {
    std::mt19937 rng(4242);
    const double k1 = 1.5, b = 0.75;
    for (int trial = 0; trial < 40; ++trial) {
        int n_docs = 1 + static_cast<int>(rng() % 20);
        int vocab = 2 + static_cast<int>(rng() % 49);
        // term "tNN" per token; independent bookkeeping alongside the index
        std::vector<std::vector<std::string>> docs(n_docs);
        SparseIndex idx;
        for (int d = 0; d < n_docs; ++d) {
            int len = 1 + static_cast<int>(rng() % 30);
            std::string text;
            for (int t = 0; t < len; ++t) {
                std::string term = "t" + std::to_string(10 + rng() % vocab);
                docs[d].push_back(term);
                text += term + " ";
            }
            idx.add("d" + std::to_string(d), text);
        }
        std::vector<std::string> query;
        for (int q = 0; q < 3; ++q) query.push_back("t" + std::to_string(10 + rng() % vocab));

        auto got = bm25_scores(idx, query, k1, b);

        double avg = 0;
        for (const auto& d : docs) avg += static_cast<double>(d.size());
        avg /= n_docs;
        for (int d = 0; d < n_docs; ++d) {
            double expected = 0;
            for (const auto& term : query) {
                int tf = 0;
                for (const auto& t : docs[d]) tf += t == term;
                if (tf == 0) continue;
                int df = 0;
                for (const auto& doc : docs) {
                    for (const auto& t : doc)
                        if (t == term) {
                            ++df;
                            break;
                        }
                }
                double idf = std::log((n_docs - df + 0.5) / (df + 0.5) + 1.0);
                double len = static_cast<double>(docs[d].size());
                expected += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avg));
            }
            double actual = 0;
            for (const auto& [id, s] : got)
                if (id == "d" + std::to_string(d)) actual = s;
            CHECK(std::abs(actual - expected) < 1e-9);
        }
    }
}

TEST_CASE("dense and question channels") {
    HashedBowEmbedder embedder(256);
    auto index = build_index(toy_corpus(), embedder);
    SUBCASE("identical embedding ranks first with similarity 1") {
        auto ranked = dense_search(index, index.chunks[0].embedding, 5);
        REQUIRE(!ranked.empty());
        CHECK(ranked[0].first == "a#0");
        CHECK(ranked[0].second == doctest::Approx(1.0));
    }
    SUBCASE("all-zero query embedding gives zero similarity") {
        auto ranked = dense_search(index, std::vector<double>(256, 0.0), 3);
        for (const auto& [id, s] : ranked) CHECK(s == 0.0);
    }
    SUBCASE("dimension mismatch raises") {
        CHECK_THROWS(dense_search(index, std::vector<double>(128, 0.0), 3));
        CHECK_THROWS(question_search(index, std::vector<double>(128, 0.0), 3));
    }
    SUBCASE("question channel deduplicates parents") {
        auto ranked = question_search(index, embedder.embed("how wide is a door width"), 30);
        int hits = 0;
        for (const auto& [id, s] : ranked) hits += id == "a#0";
        CHECK(hits == 1);
        CHECK(ranked[0].first == "a#0");
    }
}

TEST_CASE("rrf_fuse: worked example with constant 60") {
    auto fused = rrf_fuse({{"d1", "d2"}, {"d2", "d1"}, {"d1"}}, 60);
    REQUIRE(fused.size() == 2);
    CHECK(fused[0].first == "d1");
    CHECK(fused[0].second == doctest::Approx(1.0 / 61 + 1.0 / 62 + 1.0 / 61).epsilon(1e-6));
    CHECK(fused[1].first == "d2");
    CHECK(fused[1].second == doctest::Approx(1.0 / 62 + 1.0 / 61).epsilon(1e-6));
    CHECK(fused[0].second == doctest::Approx(0.0489159).epsilon(1e-4));
    CHECK(fused[1].second == doctest::Approx(0.0325225).epsilon(1e-4));
}

TEST_CASE("rrf_fuse: identity on a single list, absent docs stay absent") {
    auto fused = rrf_fuse({{"a", "b", "c"}}, 60);
    REQUIRE(fused.size() == 3);
    CHECK(fused[0].first == "a");
    CHECK(fused[1].first == "b");
    CHECK(fused[2].first == "c");
    for (const auto& [id, s] : fused) CHECK(id != "zz");
}

TEST_CASE("rrf_fuse: 500 random instances match a brute-force reference") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 500; ++trial) {
        int n_lists = 1 + static_cast<int>(rng() % 4);
        int n_docs = 1 + static_cast<int>(rng() % 10);
        std::vector<std::vector<std::string>> lists(n_lists);
        for (auto& list : lists) {
            std::vector<std::string> pool;
            for (int d = 0; d < n_docs; ++d) pool.push_back("doc" + std::to_string(d));
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(rng() % (n_docs + 1));
            list = pool;
        }
        int c = 1 + static_cast<int>(rng() % 100);
        auto got = rrf_fuse(lists, c);

        // reference: per-document scan over every list
        std::vector<std::pair<std::string, double>> expected;
        for (int d = 0; d < n_docs; ++d) {
            std::string id = "doc" + std::to_string(d);
            double score = 0;
            bool present = false;
            for (const auto& list : lists)
                for (std::size_t r = 0; r < list.size(); ++r)
                    if (list[r] == id) {
                        score += 1.0 / (c + static_cast<double>(r + 1));
                        present = true;
                    }
            if (present) expected.emplace_back(id, score);
        }
        std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].first == expected[i].first);
            CHECK(got[i].second == doctest::Approx(expected[i].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("rrf_fuse: document first in every list stays first") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int n_lists = 1 + static_cast<int>(rng() % 4);
        std::vector<std::vector<std::string>> lists(n_lists);
        for (auto& list : lists) {
            list.push_back("winner");
            std::vector<std::string> pool;
            for (int d = 0; d < 8; ++d) pool.push_back("doc" + std::to_string(d));
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(rng() % 6);
            list.insert(list.end(), pool.begin(), pool.end());
        }
        auto fused = rrf_fuse(lists, 60);
        REQUIRE(!fused.empty());
        CHECK(fused[0].first == "winner");
    }
}

TEST_CASE("rerank: token-overlap F1 fallback") {
    TokenOverlapReranker rr;
    SUBCASE("worked example") {
        // query {door,width}; "door width table": overlap 2, P=2/3, R=1, F1=0.8
        CHECK(rr.score("door width", "door width table") == doctest::Approx(0.8));
        CHECK(rr.score("door width", "wall height") == doctest::Approx(0.0));
        std::vector<RerankCandidate> cands = {{"c2", "wall height"}, {"c1", "door width table"}};
        auto top = rerank(cands, "door width", rr, 2);
        REQUIRE(top.size() == 2);
        CHECK(top[0].chunk_id == "c1");
    }
    SUBCASE("k = 1 keeps the single best") {
        std::vector<RerankCandidate> cands = {{"c2", "wall height"}, {"c1", "door width table"}};
        auto top = rerank(cands, "door width", rr, 1);
        REQUIRE(top.size() == 1);
        CHECK(top[0].chunk_id == "c1");
    }
    SUBCASE("failing reranker preserves fusion order") {
        struct Broken : Reranker {
            double score(const std::string&, const std::string&) const override {
                throw std::runtime_error("endpoint down");
            }
        } broken;
        std::vector<RerankCandidate> cands = {{"first", "a"}, {"second", "b"}, {"third", "c"}};
        std::string diag;
        auto top = rerank(cands, "q", broken, 3, &diag);
        REQUIRE(top.size() == 3);
        CHECK(top[0].chunk_id == "first");
        CHECK(top[1].chunk_id == "second");
        CHECK(!diag.empty());
    }
}

TEST_CASE("retrieve: numbered blocks, empty index, golden end-to-end") {
    HashedBowEmbedder embedder(256);
    TokenOverlapReranker reranker;
    RetrievalConfig cfg;
    SUBCASE("k = 2 emits exactly [1] and [2]") {
        cfg.k = 2;
        auto index = build_index(toy_corpus(), embedder);
        std::string out = retrieve(index, "door width", cfg, embedder, reranker);
        CHECK(out.find("[1] ") != std::string::npos);
        CHECK(out.find("[2] ") != std::string::npos);
        CHECK(out.find("[3] ") == std::string::npos);
    }
    SUBCASE("empty index yields an empty string") {
        DocIndex empty;
        empty.embed_dim = 256;
        CHECK(retrieve(empty, "anything", cfg, embedder, reranker).empty());
    }
    SUBCASE("golden output on the ten-chunk corpus") {
        auto index = build_index(toy_corpus(), embedder);
        std::string out = retrieve(index, "how do I find the width of a door", cfg, embedder,
                                   reranker);
        std::string golden_path = fixture("golden/retrieve_10chunks.txt");
        if (std::getenv("COBBIE_UPDATE_GOLDEN")) {
            std::ofstream f(golden_path, std::ios::binary);
            f << out;
        }
        CHECK(out == read_file(golden_path));
        // the obviously relevant chunk leads
        CHECK(out.find("[1] get_door_width(door)") == 0);
    }
}

TEST_CASE("index: build determinism and persistence round-trips") {
    HashedBowEmbedder embedder(256);
    auto a = build_index(toy_corpus(), embedder);
    auto b = build_index(toy_corpus(), embedder);
    REQUIRE(a.chunks.size() == b.chunks.size());
    for (std::size_t i = 0; i < a.chunks.size(); ++i) {
        CHECK(a.chunks[i].chunk_id == b.chunks[i].chunk_id);
        CHECK(a.chunks[i].embedding == b.chunks[i].embedding);
    }

    // a non-useful chunk never enters the index
    auto corpus = toy_corpus();
    corpus[0].useful = false;
    auto filtered = build_index(corpus, embedder);
    CHECK(filtered.chunks.size() == corpus.size() - 1);
    CHECK(filtered.find("a#0") == nullptr);

    for (const char* name : {"idx_roundtrip.json", "idx_roundtrip.bin"}) {
        save_index(a, name);
        DocIndex loaded = load_index(name);
        std::remove(name);
        REQUIRE(loaded.chunks.size() == a.chunks.size());
        CHECK(loaded.embed_dim == a.embed_dim);
        CHECK(loaded.questions.size() == a.questions.size());
        for (std::size_t i = 0; i < a.chunks.size(); ++i) {
            CHECK(loaded.chunks[i].chunk_id == a.chunks[i].chunk_id);
            CHECK(loaded.chunks[i].embedding == a.chunks[i].embedding);
        }
        // identical retrieval behavior after reload
        TokenOverlapReranker reranker;
        RetrievalConfig cfg;
        CHECK(retrieve(loaded, "door width", cfg, embedder, reranker) ==
              retrieve(a, "door width", cfg, embedder, reranker));
    }

    // corrupted magic is rejected
    {
        std::ofstream f("idx_bad.bin", std::ios::binary);
        f << "NOTMAGIC garbage";
    }
    CHECK_THROWS(load_index("idx_bad.bin"));
    std::remove("idx_bad.bin");
}

TEST_CASE("channel independence: any single channel may be empty without error") {
    HashedBowEmbedder embedder(256);
    TokenOverlapReranker reranker;
    RetrievalConfig cfg;
    // no reverse questions at all: question channel is empty
    std::vector<DocChunk> corpus;
    DocChunk c = make_chunk("solo#0", "widget(x)", "makes widgets", {});
    corpus.push_back(c);
    auto index = build_index(corpus, embedder);
    CHECK(index.questions.empty());
    std::string out = retrieve(index, "widget", cfg, embedder, reranker);
    CHECK(out.find("[1] ") != std::string::npos);
    // query with no lexical overlap: sparse channel empty, still no error
    out = retrieve(index, "zzqq", cfg, embedder, reranker);
    CHECK(out.find("[1] ") != std::string::npos);
}
