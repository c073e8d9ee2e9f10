#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cobbie/forge/training.hpp"
#include "cobbie/ifc/parser.hpp"

using namespace cobbie::forge;

namespace {

std::string fixture(const std::string& rel) { return std::string(COBBIE_FIXTURE_DIR) + "/" + rel; }

const cobbie::ifc::EntityGraph& toy_house() {
    static cobbie::ifc::EntityGraph g = [] {
        std::ifstream f(fixture("models/toy_house.ifc"), std::ios::binary);
        REQUIRE(f.good());
        std::ostringstream ss;
        ss << f.rdbuf();
        auto out = cobbie::ifc::parse_step(ss.str());
        REQUIRE(out.ok());
        return std::move(*out.graph);
    }();
    return g;
}

const cobbie::ifc::EntityGraph& load_graph(const std::string&) { return toy_house(); }

ToolRecord make_tool(const std::string& name, long created, long calls, long avail, long succ) {
    ToolRecord t;
    t.name = name;
    t.signature = name + "()";
    t.source = "fn " + name + "() { return 0 }";
    t.created_at_question = created;
    t.calls = calls;
    t.available_count = avail;
    t.success_contributions = succ;
    return t;
}

cobbie::agent::SessionRecord session_with_code(const std::string& code) {
    cobbie::agent::SessionRecord rec;
    cobbie::agent::SessionTurn turn;
    turn.code = code;
    rec.turns.push_back(std::move(turn));
    return rec;
}

using Rec = std::tuple<std::string, int, std::string>;

}  // namespace

TEST_CASE("deletion_score: spot values") {
    CHECK(deletion_score(make_tool("a", 0, 4, 4, 4)) == doctest::Approx(0.0));   // r=1, r=1
    CHECK(deletion_score(make_tool("b", 0, 0, 5, 0)) == doctest::Approx(1.0));   // r=0, r=0
    CHECK(deletion_score(make_tool("c", 0, 4, 8, 1)) == doctest::Approx(0.625));  // 0.5, 0.25
}

TEST_CASE("deletion_score: bounded in [0,1] for all counter values") {
    std::mt19937 rng(5);
    for (int i = 0; i < 2'000; ++i) {
        long avail = static_cast<long>(rng() % 50);
        long calls = avail > 0 ? static_cast<long>(rng() % (avail + 1)) : 0;
        long succ = calls > 0 ? static_cast<long>(rng() % (calls + 1)) : 0;
        ToolRecord t = make_tool("t", 0, calls, avail, succ);
        double s = deletion_score(t);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(t.r_call() >= 0.0);
        CHECK(t.r_call() <= 1.0);
        CHECK(t.r_succ() >= 0.0);
        CHECK(t.r_succ() <= 1.0);
    }
}

TEST_CASE("prune: contract cases") {
    SUBCASE("worst past-grace tool is pruned at 17 active") {
        ToolRepository repo(16, 10);
        for (int i = 0; i < 16; ++i) repo.insert_or_replace(make_tool("t" + std::to_string(i), 0, 5, 5, 5));
        repo.insert_or_replace(make_tool("worst", 0, 0, 5, 0));
        auto pruned = repo.prune(100);
        REQUIRE(pruned.size() == 1);
        CHECK(pruned[0] == "worst");
        CHECK(repo.active().size() == 16);
    }
    SUBCASE("worst tool inside grace survives, next-worst goes") {
        ToolRepository repo(16, 10);
        for (int i = 0; i < 15; ++i) repo.insert_or_replace(make_tool("t" + std::to_string(i), 0, 5, 5, 5));
        repo.insert_or_replace(make_tool("mediocre", 0, 2, 5, 1));
        repo.insert_or_replace(make_tool("worst_but_new", 95, 0, 5, 0));
        auto pruned = repo.prune(100);
        REQUIRE(pruned.size() == 1);
        CHECK(pruned[0] == "mediocre");
    }
    SUBCASE("16 active tools: no pruning") {
        ToolRepository repo(16, 10);
        for (int i = 0; i < 16; ++i) repo.insert_or_replace(make_tool("t" + std::to_string(i), 0, 0, 5, 0));
        CHECK(repo.prune(100).empty());
    }
    SUBCASE("all over-capacity tools in grace: capacity exceeded with diagnostic") {
        ToolRepository repo(16, 10);
        for (int i = 0; i < 17; ++i) repo.insert_or_replace(make_tool("t" + std::to_string(i), 95, 0, 5, 0));
        std::string diag;
        CHECK(repo.prune(100, &diag).empty());
        CHECK(repo.active().size() == 17);
        CHECK(!diag.empty());
    }
}

TEST_CASE("prune: randomized repositories match a brute-force argmax") {
    std::mt19937 rng(607);
    for (int trial = 0; trial < 200; ++trial) {
        int capacity = 2 + static_cast<int>(rng() % 6);
        int grace = static_cast<int>(rng() % 8);
        long now = 20 + static_cast<long>(rng() % 30);
        ToolRepository repo(capacity, grace);
        int n = capacity + 1 + static_cast<int>(rng() % 6);
        struct Shadow {
            std::string name;
            long created;
            double score;
            bool active = true;
        };
        std::vector<Shadow> shadow;
        for (int i = 0; i < n; ++i) {
            long created = static_cast<long>(rng() % 40);
            long avail = static_cast<long>(rng() % 10);
            long calls = avail > 0 ? static_cast<long>(rng() % (avail + 1)) : 0;
            long succ = calls > 0 ? static_cast<long>(rng() % (calls + 1)) : 0;
            ToolRecord t = make_tool("t" + std::to_string(i), created, calls, avail, succ);
            repo.insert_or_replace(t);
            shadow.push_back({t.name, created, deletion_score(t)});
        }
        auto pruned = repo.prune(now);
        // replay the greedy eligible-argmax independently
        std::vector<std::string> expected;
        auto active_count = [&] {
            int c = 0;
            for (const auto& s : shadow) c += s.active;
            return c;
        };
        while (active_count() > capacity) {
            const Shadow* victim = nullptr;
            for (const auto& s : shadow) {
                if (!s.active || now - s.created < grace) continue;
                if (!victim || s.score > victim->score ||
                    (s.score == victim->score &&
                     (s.created < victim->created ||
                      (s.created == victim->created && s.name < victim->name))))
                    victim = &s;
            }
            if (!victim) break;
            expected.push_back(victim->name);
            const_cast<Shadow*>(victim)->active = false;
        }
        CHECK(pruned == expected);
        // capacity invariant over tools past grace
        int active_past_grace = 0;
        for (const ToolRecord* t : repo.active())
            active_past_grace += (now - t->created_at_question >= grace);
        if (!pruned.empty() || static_cast<int>(repo.active().size()) <= capacity)
            CHECK((static_cast<int>(repo.active().size()) <= capacity ||
                   active_past_grace <= capacity));
    }
}

TEST_CASE("record_usage: per-question counters") {
    ToolRepository repo(16, 10);
    repo.insert_or_replace(make_tool("door_count", 0, 0, 0, 0));
    SUBCASE("installed but never called") {
        repo.record_usage(session_with_code("print(count(by_type(\"IfcDoor\")))"), true);
        const ToolRecord* t = repo.active()[0];
        CHECK(t->available_count == 1);
        CHECK(t->calls == 0);
        CHECK(t->success_contributions == 0);
    }
    SUBCASE("called in a correct session advances all three") {
        repo.record_usage(session_with_code("print(door_count())"), true);
        const ToolRecord* t = repo.active()[0];
        CHECK(t->available_count == 1);
        CHECK(t->calls == 1);
        CHECK(t->success_contributions == 1);
    }
    SUBCASE("two calls in one session count once") {
        repo.record_usage(session_with_code("print(door_count() + door_count())"), false);
        const ToolRecord* t = repo.active()[0];
        CHECK(t->calls == 1);
        CHECK(t->success_contributions == 0);
    }
    SUBCASE("substring names do not count as calls") {
        repo.record_usage(session_with_code("print(big_door_count())"), true);
        CHECK(repo.active()[0]->calls == 0);
    }
}

TEST_CASE("record_usage: counters are monotone") {
    ToolRepository repo(16, 10);
    repo.insert_or_replace(make_tool("t", 0, 0, 0, 0));
    std::mt19937 rng(11);
    long last_a = 0, last_c = 0, last_s = 0;
    for (int i = 0; i < 100; ++i) {
        bool call = rng() % 2;
        repo.record_usage(session_with_code(call ? "t()" : "print(1)"), rng() % 2);
        const ToolRecord* t = repo.active()[0];
        CHECK(t->available_count >= last_a);
        CHECK(t->calls >= last_c);
        CHECK(t->success_contributions >= last_s);
        last_a = t->available_count;
        last_c = t->calls;
        last_s = t->success_contributions;
    }
}

TEST_CASE("repository persistence: LDJSON round trip keeps pruned tools") {
    ToolRepository repo(16, 10);
    repo.insert_or_replace(make_tool("alive", 3, 2, 4, 1));
    ToolRecord dead = make_tool("dead", 1, 0, 9, 0);
    repo.insert_or_replace(dead);
    for (int i = 0; i < 15; ++i) repo.insert_or_replace(make_tool("f" + std::to_string(i), 0, 5, 5, 5));
    repo.prune(50);
    REQUIRE(repo.active().size() == 16);

    repo.save("repo_roundtrip.ldjson");
    ToolRepository loaded = ToolRepository::load("repo_roundtrip.ldjson");
    std::remove("repo_roundtrip.ldjson");
    REQUIRE(loaded.tools().size() == repo.tools().size());
    bool saw_pruned = false;
    for (const auto& t : loaded.tools()) {
        if (t.name == "dead") {
            CHECK(t.status == ToolStatus::Pruned);
            CHECK(t.available_count == 9);
            saw_pruned = true;
        }
        if (t.name == "alive") {
            CHECK(t.status == ToolStatus::Active);
            CHECK(t.calls == 2);
            CHECK(t.created_at_question == 3);
        }
    }
    CHECK(saw_pruned);
}

TEST_CASE("run_training_step: Path A persists a new tool") {
    auto provider = cobbie::agent::ReplayProvider::from_records({
        Rec{"T1/gen", 0, "```action\nprint(count(by_type(\"IfcDoor\")))\n```"},
        Rec{"T1/gen", 1, "FINAL: 2 doors"},
        Rec{"T1/verify", 0, R"({"verdict": "correct"})"},
        Rec{"T1/identify", 0,
            R"j({"create": true, "name": "door_count", "signature": "door_count()", "description": "counts doors"})j"},
        Rec{"T1/create", 0, "fn door_count() { return count(by_type(\"IfcDoor\")) }"},
        Rec{"T1/test", 0, "```action\nprint(door_count())\n```"},
        Rec{"T1/test", 1, "FINAL: 2 doors"},
        Rec{"T1/assess", 0, R"({"assessment": "positive"})"},
    });
    ToolRepository repo(16, 10);
    TrainingTuple tuple{"T1", "How many doors?", "2", "toy.ifc", "train_dev"};
    TrainingState st = run_training_step(tuple, repo, provider, load_graph, 0);
    CHECK(st.phase == Phase::Persist);
    CHECK(st.generate_correct);
    REQUIRE(repo.active().size() == 1);
    CHECK(repo.active()[0]->name == "door_count");
}

TEST_CASE("run_training_step: Path B replaces a faulty tool's source") {
    ToolRepository repo(16, 10);
    ToolRecord faulty = make_tool("door_count", 2, 3, 5, 0);
    faulty.source = "fn door_count() { return count(by_type(\"IfcWall\")) }";
    repo.insert_or_replace(faulty);
    std::string fixed = "fn door_count() { return count(by_type(\"IfcDoor\")) }";
    auto provider = cobbie::agent::ReplayProvider::from_records({
        Rec{"T2/gen", 0, "```action\nprint(door_count())\n```"},
        Rec{"T2/gen", 1, "FINAL: 2 doors (wrong tally)"},
        Rec{"T2/verify", 0, R"({"verdict": "wrong"})"},
        Rec{"T2/analyze", 0, R"({"faulty_tool": "door_count"})"},
        Rec{"T2/debug", 0, fixed},
        Rec{"T2/test", 0, "FINAL: 2 doors"},
        Rec{"T2/assess", 0, R"({"assessment": "positive"})"},
    });
    TrainingTuple tuple{"T2", "How many doors?", "2", "toy.ifc", "train_dev"};
    TrainingState st = run_training_step(tuple, repo, provider, load_graph, 7);
    CHECK(st.phase == Phase::Persist);
    CHECK(st.debugged);
    REQUIRE(repo.active().size() == 1);
    CHECK(repo.active()[0]->source == fixed);
    CHECK(repo.active()[0]->created_at_question == 2);  // replacement, not a new tool
}

TEST_CASE("run_training_step: abstained answer is a terminal Skip") {
    auto provider = cobbie::agent::ReplayProvider::from_records({
        Rec{"T3/gen", 0, "FINAL: Information not found in BIM model"},
    });
    ToolRepository repo(16, 10);
    TrainingTuple tuple{"T3", "q", "gt", "toy.ifc", "train_dev"};
    TrainingState st = run_training_step(tuple, repo, provider, load_graph, 0);
    CHECK(st.phase == Phase::Skip);
    CHECK(repo.active().empty());
}

TEST_CASE("run_training_step: unparseable tool consumes refinement turns") {
    SUBCASE("recovers on the third attempt") {
        auto provider = cobbie::agent::ReplayProvider::from_records({
            Rec{"T4/gen", 0, "FINAL: 2"},
            Rec{"T4/verify", 0, R"({"verdict": "correct"})"},
            Rec{"T4/identify", 0,
                R"j({"create": true, "name": "dc", "signature": "dc()", "description": "d"})j"},
            Rec{"T4/create", 0, "fn dc( { broken"},
            Rec{"T4/create", 1, "fn wrong_name() { return 1 }"},
            Rec{"T4/create", 2, "fn dc() { return count(by_type(\"IfcDoor\")) }"},
            Rec{"T4/test", 0, "FINAL: 2"},
            Rec{"T4/assess", 0, R"({"assessment": "positive"})"},
        });
        ToolRepository repo(16, 10);
        TrainingTuple tuple{"T4", "q", "2", "toy.ifc", "train_dev"};
        TrainingState st = run_training_step(tuple, repo, provider, load_graph, 0);
        CHECK(st.phase == Phase::Persist);
        CHECK(repo.active().size() == 1);
    }
    SUBCASE("three failures skip") {
        auto provider = cobbie::agent::ReplayProvider::from_records({
            Rec{"T4/gen", 0, "FINAL: 2"},
            Rec{"T4/verify", 0, R"({"verdict": "correct"})"},
            Rec{"T4/identify", 0,
                R"j({"create": true, "name": "dc", "signature": "dc()", "description": "d"})j"},
            Rec{"T4/create", -1, "fn dc( { broken"},
        });
        ToolRepository repo(16, 10);
        TrainingTuple tuple{"T4", "q", "2", "toy.ifc", "train_dev"};
        TrainingState st = run_training_step(tuple, repo, provider, load_graph, 0);
        CHECK(st.phase == Phase::Skip);
        CHECK(repo.active().empty());
    }
}

TEST_CASE("run_training_step: adversarial scripts always terminate in Persist or Skip") {
    std::mt19937 rng(2024);
    const char* junk[] = {"garbage", "FINAL: maybe", R"({"verdict": "sideways"})",
                          R"j({"create": true})j", "fn ( {", R"({"assessment": "positive"})",
                          R"({"faulty_tool": "ghost"})", "```action\nprint(1)\n```"};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rec> recs;
        for (const char* role : {"/gen", "/verify", "/identify", "/analyze", "/create",
                                 "/debug", "/test", "/assess"})
            recs.emplace_back("A" + std::string(role), -1, junk[rng() % std::size(junk)]);
        auto provider = cobbie::agent::ReplayProvider::from_records(recs);
        ToolRepository repo(16, 10);
        TrainingTuple tuple{"A", "q", "gt", "toy.ifc", "train_dev"};
        TrainingState st = run_training_step(tuple, repo, provider, load_graph, 0);
        CHECK((st.phase == Phase::Persist || st.phase == Phase::Skip));
        CHECK(st.transcript.size() <= 8);
    }
}

TEST_CASE("run_training: leakage guard and empty partition") {
    ToolRepository repo(16, 10);
    auto provider = cobbie::agent::ReplayProvider::from_records({});
    TrainingReport empty = run_training({}, repo, provider, load_graph);
    CHECK(empty.processed == 0);
    CHECK(empty.created.empty());
    CHECK(repo.tools().empty());

    std::vector<TrainingTuple> leak = {{"X", "q", "gt", "toy.ifc", "test"}};
    CHECK_THROWS_AS(run_training(leak, repo, provider, load_graph), std::invalid_argument);
}

TEST_CASE("run_training: five-tuple scripted run creates two tools with statistics") {
    auto provider = cobbie::agent::ReplayProvider::from_records({
        // T1: correct, creates door_count
        Rec{"T1/gen", 0, "FINAL: 2 doors"},
        Rec{"T1/verify", 0, R"({"verdict": "correct"})"},
        Rec{"T1/identify", 0,
            R"j({"create": true, "name": "door_count", "signature": "door_count()", "description": "counts doors"})j"},
        Rec{"T1/create", 0, "fn door_count() { return count(by_type(\"IfcDoor\")) }"},
        Rec{"T1/test", 0, "FINAL: 2"},
        Rec{"T1/assess", 0, R"({"assessment": "positive"})"},
        // T2: abstains
        Rec{"T2/gen", 0, "FINAL: Information not found in BIM model"},
        // T3: correct using door_count, creates wall_count
        Rec{"T3/gen", 0, "```action\nprint(door_count())\n```"},
        Rec{"T3/gen", 1, "FINAL: 2 doors"},
        Rec{"T3/verify", 0, R"({"verdict": "correct"})"},
        Rec{"T3/identify", 0,
            R"j({"create": true, "name": "wall_count", "signature": "wall_count()", "description": "counts walls"})j"},
        Rec{"T3/create", 0, "fn wall_count() { return count(by_type(\"IfcWall\")) }"},
        Rec{"T3/test", 0, "FINAL: 2"},
        Rec{"T3/assess", 0, R"({"assessment": "positive"})"},
        // T4: correct, no tool recommended
        Rec{"T4/gen", 0, "FINAL: yes"},
        Rec{"T4/verify", 0, R"({"verdict": "correct"})"},
        Rec{"T4/identify", 0, R"j({"create": false})j"},
        // T5: wrong, no faulty tool
        Rec{"T5/gen", 0, "FINAL: 7"},
        Rec{"T5/verify", 0, R"({"verdict": "wrong"})"},
        Rec{"T5/analyze", 0, R"({"faulty_tool": null})"},
    });
    ToolRepository repo(16, 10);
    std::vector<TrainingTuple> tuples;
    for (int i = 1; i <= 5; ++i)
        tuples.push_back({"T" + std::to_string(i), "q", "gt", "toy.ifc", "train_dev"});
    TrainingReport report = run_training(tuples, repo, provider, load_graph);
    CHECK(report.processed == 5);
    CHECK(report.created == std::vector<std::string>{"door_count", "wall_count"});
    CHECK(report.debugged.empty());
    CHECK(report.pruned.empty());

    const ToolRecord* dc = nullptr;
    const ToolRecord* wc = nullptr;
    for (const ToolRecord* t : repo.active()) {
        if (t->name == "door_count") dc = t;
        if (t->name == "wall_count") wc = t;
    }
    REQUIRE(dc != nullptr);
    REQUIRE(wc != nullptr);
    // door_count installed for T2..T5, called once (T3, correct)
    CHECK(dc->available_count == 4);
    CHECK(dc->calls == 1);
    CHECK(dc->success_contributions == 1);
    // wall_count installed for T4, T5 only
    CHECK(wc->available_count == 2);
    CHECK(wc->calls == 0);
}
