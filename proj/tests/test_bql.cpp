#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "cobbie/bql/env.hpp"
#include "cobbie/ifc/parser.hpp"

using namespace cobbie::bql;

namespace {

std::string fixture(const std::string& rel) { return std::string(COBBIE_FIXTURE_DIR) + "/" + rel; }

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const cobbie::ifc::EntityGraph& model(const std::string& rel) {
    static std::map<std::string, cobbie::ifc::EntityGraph> cache;
    auto it = cache.find(rel);
    if (it == cache.end()) {
        auto out = cobbie::ifc::parse_step(read_file(fixture(rel)));
        REQUIRE(out.ok());
        it = cache.emplace(rel, std::move(*out.graph)).first;
    }
    return it->second;
}

const cobbie::ifc::EntityGraph& toy_house() { return model("models/toy_house.ifc"); }

ExecResult run(const std::string& code) {
    ExecEnvironment env(toy_house());
    return env.execute(code);
}

}  // namespace

TEST_CASE("execute: wall count on the two-wall model") {
    ExecResult out = run(R"(let ws = by_type("IfcWall"); print(count(ws)))");
    REQUIRE(out.ok());
    CHECK(out.printed == "2\n");
}

TEST_CASE("execute: unknown identifier is an in-band error") {
    ExecResult out = run("print(undefined_var)");
    REQUIRE(out.error.has_value());
    CHECK(*out.error == "unknown identifier: undefined_var");
    CHECK(out.printed == "");
}

TEST_CASE("execute: bindings persist across iterations within one session") {
    ExecEnvironment env(toy_house());
    REQUIRE(env.execute("let x = 5;").ok());
    ExecResult out = env.execute("print(x + 1)");
    REQUIRE(out.ok());
    CHECK(out.printed == "6\n");
}

TEST_CASE("execute: printed output before an error is retained, as are bindings") {
    ExecEnvironment env(toy_house());
    ExecResult out = env.execute("let a = 2\nprint(a)\nprint(missing)");
    REQUIRE(out.error.has_value());
    CHECK(out.printed == "2\n");
    ExecResult after = env.execute("print(a * 10)");
    REQUIRE(after.ok());
    CHECK(after.printed == "20\n");
}

TEST_CASE("install_tool: installed function callable in later execute calls") {
    ExecEnvironment env(toy_house());
    auto err = env.install_tool("wall_count",
                                R"(fn wall_count() { return count(by_type("IfcWall")); })");
    REQUIRE(!err.has_value());
    ExecResult out = env.execute("print(wall_count())");
    REQUIRE(out.ok());
    CHECK(out.printed == "2\n");
}

TEST_CASE("install_tool: builtin name collision is rejected") {
    ExecEnvironment env(toy_house());
    auto err = env.install_tool("print", "fn print(x) { return x }");
    REQUIRE(err.has_value());
}

TEST_CASE("install_tool: syntax error carries a line number") {
    ExecEnvironment env(toy_house());
    auto err = env.install_tool("broken", "fn broken() {\n  let = 3\n}");
    REQUIRE(err.has_value());
    CHECK(err->line == 2);
}

TEST_CASE("install_tool: declared name must match the registered name") {
    ExecEnvironment env(toy_house());
    auto err = env.install_tool("alpha", "fn beta() { return 1 }");
    CHECK(err.has_value());
}

TEST_CASE("builtins: pset_value reads vendor-specific door width") {
    ExecEnvironment env(model("models/width_archicad.ifc"));
    ExecResult out = env.execute(
        R"bql(let door = by_type("IfcDoor")[0]
           print(pset_value(door, "ArchiCADProperties", "Breite (B)")))bql");
    REQUIRE(out.ok());
    CHECK(out.printed == "0.885\n");
}

TEST_CASE("builtins: sum of mapped extrusion volumes") {
    ExecResult out =
        run(R"(print(sum(map(by_type("IfcWall"), fn(w){ extruded_volume(w) }))))");
    REQUIRE(out.ok());
    CHECK(out.printed == "4\n");
}

TEST_CASE("builtins: filter with a lambda predicate") {
    ExecResult out = run("print(filter([1,2,3], fn(x){ x > 1 }))");
    REQUIRE(out.ok());
    CHECK(out.printed == "[2, 3]\n");
}

TEST_CASE("builtins: unknown builtin is an in-band error") {
    ExecResult out = run("open(\"/etc/passwd\")");
    REQUIRE(out.error.has_value());
    CHECK(*out.error == "unknown builtin: open");
}

TEST_CASE("builtins: catalogue has no file, network, environment, or clock access") {
    for (const char* name : {"read", "write", "open", "fetch", "http", "env", "getenv",
                             "time", "now", "clock", "exec", "system", "import"}) {
        CHECK(!is_builtin_name(name));
        ExecResult out = run(std::string(name) + "()");
        CHECK(out.error.has_value());
    }
}

TEST_CASE("builtins: traversal surface on the toy model") {
    ExecEnvironment env(toy_house());
    SUBCASE("typeof and name_of") {
        auto out = env.execute(
            R"(let s = by_type("IfcBuildingStorey")[0]; print(typeof(s)); print(name_of(s)))");
        REQUIRE(out.ok());
        CHECK(out.printed == "IFCBUILDINGSTOREY\nOK OG2\n");
    }
    SUBCASE("container and contained") {
        auto out = env.execute(
            R"(let w = by_type("IfcWall")[0]
               let st = container(w)
               print(count(contained(st))))");
        REQUIRE(out.ok());
        CHECK(out.printed == "5\n");
    }
    SUBCASE("parent chain reaches the project") {
        auto out = env.execute(
            R"(let st = by_type("IfcBuildingStorey")[0]
               print(typeof(parent(parent(st)))))");
        REQUIRE(out.ok());
        CHECK(out.printed == "IFCSITE\n");
    }
    SUBCASE("subtype expansion through by_type") {
        auto out = env.execute(R"(print(count(by_type("IfcBuildingElement", true))))");
        REQUIRE(out.ok());
        CHECK(out.printed == "5\n");  // 2 walls + 2 doors + 1 slab
    }
    SUBCASE("quantity lookup") {
        auto out = env.execute(
            R"(let w = by_type("IfcWall")[0]
               print(quantity(w, "BaseQuantities", "NetVolume")))");
        REQUIRE(out.ok());
        CHECK(out.printed == "2\n");
    }
    SUBCASE("instance pset overrides type pset") {
        auto out = env.execute(
            R"(for d in by_type("IfcDoor") {
                 print(pset_value(d, "Pset_DoorCommon", "IsExternal"))
               })");
        REQUIRE(out.ok());
        CHECK(out.printed == "true\nfalse\n");
    }
    SUBCASE("polygon_area") {
        auto out = env.execute("print(polygon_area([[0,0],[4,0],[4,3],[0,3]]))");
        REQUIRE(out.ok());
        CHECK(out.printed == "12\n");
    }
    SUBCASE("psets and keys") {
        auto out = env.execute(
            R"(let d = by_type("IfcDoor")[0]
               let m = pset(d, "Pset_DoorCommon")
               print(keys(m)))");
        REQUIRE(out.ok());
        CHECK(out.printed == "[\"FireRating\", \"IsExternal\"]\n");
    }
    SUBCASE("min max unique lower str_contains") {
        auto out = env.execute(
            R"(print(min([3, 1, 2])); print(max([3.5, 1, 2]))
               print(unique([1, 2, 1, 3]))
               print(lower("ABC")); print(str_contains("firewall", "wall")))");
        REQUIRE(out.ok());
        CHECK(out.printed == "1\n3.5\n[1, 2, 3]\nabc\ntrue\n");
    }
}

TEST_CASE("control flow: if/else, for-in, recursion depth") {
    SUBCASE("if else chain") {
        auto out = run(
            R"(let x = 2
               if (x == 1) { print("one") } else if (x == 2) { print("two") } else { print("many") })");
        REQUIRE(out.ok());
        CHECK(out.printed == "two\n");
    }
    SUBCASE("for-in accumulation") {
        auto out = run("let t = 0\nfor v in [1, 2, 3, 4] { t = t + v }\nprint(t)");
        REQUIRE(out.ok());
        CHECK(out.printed == "10\n");
    }
    SUBCASE("recursion beyond depth 64 fails in-band") {
        auto out = run("fn f(n) { return f(n + 1) }\nprint(f(0))");
        REQUIRE(out.error.has_value());
    }
}

TEST_CASE("budget: exhaustion stops execution with the exact error") {
    ExecEnvironment env(toy_house(), /*step_budget=*/50);
    ExecResult out = env.execute("let i = 0\nfor v in [1,2,3,4,5,6,7,8,9,10] { i = i + v }");
    REQUIRE(out.error.has_value());
    CHECK(*out.error == "step budget exceeded");
    CHECK(out.steps_used <= 50);
}

TEST_CASE("budget monotonicity: doubling the budget never changes completed output") {
    const std::string programs[] = {
        "let t = 0\nfor v in [1,2,3] { t = t + v }\nprint(t)",
        R"(print(count(by_type("IfcWall"))))",
        "print(filter([1,2,3,4], fn(x){ x % 2 == 0 }))",
    };
    for (const auto& p : programs) {
        ExecEnvironment base(toy_house());
        ExecResult first = base.execute(p);
        REQUIRE(first.ok());
        ExecEnvironment wide(toy_house(), first.steps_used * 2 + 10);
        ExecResult second = wide.execute(p);
        REQUIRE(second.ok());
        CHECK(first.printed == second.printed);
        CHECK(first.steps_used == second.steps_used);
    }
}

TEST_CASE("output truncation: bounded by limit plus marker, always") {
    ExecEnvironment env(toy_house(), kDefaultStepBudget, /*output_limit=*/40);
    ExecResult out = env.execute("for v in [1,2,3,4,5] { print(\"0123456789012345\") }");
    REQUIRE(out.ok());
    CHECK(out.printed.size() <= 40 + std::string(kTruncationMarker).size());
    CHECK(out.printed.find(kTruncationMarker) != std::string::npos);
}

TEST_CASE("determinism: identical sessions produce identical ExecResults") {
    const std::string code =
        R"(let vols = map(by_type("IfcBuildingElement", true), fn(e){ extruded_volume(e) })
           print(vols)
           print(sum(filter(vols, fn(v){ v != null }))))";
    ExecEnvironment a(toy_house());
    ExecEnvironment b(toy_house());
    ExecResult ra = a.execute(code);
    ExecResult rb = b.execute(code);
    CHECK(ra.printed == rb.printed);
    CHECK(ra.error == rb.error);
    CHECK(ra.steps_used == rb.steps_used);
}

TEST_CASE("error-as-data: fuzz corpus of malformed programs never escapes ExecResult") {
    const char* atoms[] = {"let",  "fn",   "if",    "for",  "in",   "return", "(",  ")",
                           "{",    "}",    "[",     "]",    ",",    ";",      "=",  "==",
                           "+",    "-",    "*",     "/",    "%",    "!",      "&&", "||",
                           "x",    "ws",   "print", "count", "by_type", "1",  "2.5", "\"s\"",
                           "\"",   "'",    "@",     "#",    "\\",   "\x01",   "}}", "(("};
    std::mt19937 rng(1234);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(atoms) - 1);
    std::uniform_int_distribution<int> len(1, 24);
    ExecEnvironment env(toy_house(), /*step_budget=*/20'000);
    int errors = 0;
    for (int i = 0; i < 1'000; ++i) {
        std::string program;
        int n = len(rng);
        for (int j = 0; j < n; ++j) {
            program += atoms[pick(rng)];
            program += ' ';
        }
        ExecResult out = env.execute(program);  // must not throw or abort
        if (out.error) ++errors;
        CHECK(out.printed.size() <= kDefaultOutputLimit + std::string(kTruncationMarker).size());
    }
    CHECK(errors > 500);  // corpus is overwhelmingly malformed
}

TEST_CASE("grammar: shipped EBNF matches the embedded prompt text") {
    std::string shipped = read_file(std::string(COBBIE_FIXTURE_DIR) + "/../docs/bql_grammar.ebnf");
    CHECK(grammar_text() == shipped);
}

TEST_CASE("numeric printing: reals use up to six fractional digits, zeros trimmed") {
    auto out = run("print(1.5); print(2.0); print(0.885); print(1/3 + 0.0); print(1.0/3.0)");
    REQUIRE(out.ok());
    CHECK(out.printed == "1.5\n2\n0.885\n0.333333\n0.333333\n");
}
