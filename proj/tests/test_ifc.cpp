#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cobbie/ifc/geometry.hpp"
#include "cobbie/ifc/navigate.hpp"
#include "cobbie/ifc/parser.hpp"
#include "cobbie/ifc/schema.hpp"

using namespace cobbie::ifc;

namespace {

std::string fixture(const std::string& rel) { return std::string(COBBIE_FIXTURE_DIR) + "/" + rel; }

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string wrap_data(const std::string& data) {
    return "ISO-10303-21;\nHEADER;\nFILE_SCHEMA(('IFC4'));\nENDSEC;\nDATA;\n" + data +
           "\nENDSEC;\nEND-ISO-10303-21;\n";
}

EntityGraph parse_ok(const std::string& text) {
    ParseOutcome out = parse_step(text);
    REQUIRE_MESSAGE(out.ok(), (out.error ? out.error->message : std::string()));
    return *out.graph;
}

// Independent transpose: re-walk every attribute tree by hand.
void brute_refs(const AttributeValue& v, int role, InstanceId from,
                std::vector<std::tuple<InstanceId, InstanceId, int>>& out) {
    if (v.is_ref()) {
        out.emplace_back(v.ref_id(), from, role);
    } else if (v.is_list()) {
        for (const auto& e : v.list()) brute_refs(e, role, from, out);
    } else if (auto* ts = std::get_if<TypedScalar>(&v.data); ts && ts->value) {
        brute_refs(*ts->value, role, from, out);
    }
}

void check_graph_invariants(const EntityGraph& g) {
    // type-index completeness
    std::size_t bucket_total = 0;
    for (const auto& [type, ids] : g.type_index) {
        bucket_total += ids.size();
        for (InstanceId id : ids) CHECK(g.at(id).ifc_type == type);
    }
    CHECK(bucket_total == g.size());

    // inverse index equals brute-force transpose of forward references
    std::vector<std::tuple<InstanceId, InstanceId, int>> expected;
    for (const auto& [id, inst] : g.entities)
        for (int role = 0; role < static_cast<int>(inst.attributes.size()); ++role)
            brute_refs(inst.attributes[role], role, id, expected);

    std::size_t inverse_total = 0;
    for (const auto& [target, entries] : g.inverse_index) {
        for (const auto& e : entries) {
            bool found = false;
            for (const auto& [t, f, r] : expected)
                if (t == target && f == e.referrer && r == e.role) found = true;
            CHECK(found);
            ++inverse_total;
        }
    }
    std::size_t resolved = 0;
    for (const auto& [t, f, r] : expected)
        if (g.has(t)) ++resolved;
    CHECK(inverse_total == resolved);
    // the rest must be recorded as dangling
    CHECK(expected.size() - resolved == g.dangling.size());
}

}  // namespace

TEST_CASE("single instance parse per the SPF grammar") {
    EntityGraph g =
        parse_ok(wrap_data("#1=IFCWALL('2O2Fr$t4X7Zf8NOew3FLOH',$,$,'W-1',$,$,$,$);"));
    REQUIRE(g.size() == 1);
    const EntityInstance& e = g.at(1);
    CHECK(e.ifc_type == "IFCWALL");
    REQUIRE(e.attributes.size() == 8);
    CHECK(e.attributes[0].text() == "2O2Fr$t4X7Zf8NOew3FLOH");
    CHECK(e.attributes[3].text() == "W-1");
    CHECK(e.attributes[1].is_null());
}

TEST_CASE("empty DATA section yields empty graph") {
    EntityGraph g = parse_ok(wrap_data(""));
    CHECK(g.size() == 0);
    CHECK(g.schema_id == "IFC4");
}

TEST_CASE("dangling reference recorded, never dropped") {
    EntityGraph g = parse_ok(wrap_data("#2=IFCDOOR(#1);"));
    CHECK(g.size() == 1);
    REQUIRE(g.dangling.size() == 1);
    CHECK(g.dangling[0].referrer == 2);
    CHECK(g.dangling[0].target == 1);
}

TEST_CASE("forward references are legal") {
    EntityGraph g = parse_ok(wrap_data("#1=IFCDOOR(#5);\n#5=IFCWALL('x',$,$,$);"));
    CHECK(g.dangling.empty());
    CHECK(g.inverse_index.at(5).size() == 1);
}

TEST_CASE("malformed input reports position") {
    ParseOutcome out = parse_step(wrap_data("#1=IFCWALL('unterminated;"));
    REQUIRE_FALSE(out.ok());
    CHECK(out.error->line > 0);
    CHECK_FALSE(out.error->message.empty());
}

TEST_CASE("duplicate instance id is an error") {
    ParseOutcome out = parse_step(wrap_data("#1=IFCWALL($);\n#1=IFCDOOR($);"));
    CHECK_FALSE(out.ok());
}

TEST_CASE("comments and multi-line instances") {
    EntityGraph g = parse_ok(wrap_data("/* a comment */\n#1=IFCWALL(\n  'g',$,\n  $,$);"));
    CHECK(g.size() == 1);
}

TEST_CASE("value grammar: numbers, enums, logicals, typed scalars, nested lists") {
    EntityGraph g = parse_ok(
        wrap_data("#1=IFCTHING(42,-3.5,1.E-05,.ELEMENT.,.T.,.F.,.U.,IFCLABEL('x'),((1,2),(3)));"));
    const auto& a = g.at(1).attributes;
    CHECK(std::get<std::int64_t>(a[0].data) == 42);
    CHECK(std::get<double>(a[1].data) == doctest::Approx(-3.5));
    CHECK(std::get<double>(a[2].data) == doctest::Approx(1e-5));
    CHECK(std::get<EnumToken>(a[3].data).token == "ELEMENT");
    CHECK(std::get<bool>(a[4].data) == true);
    CHECK(std::get<bool>(a[5].data) == false);
    CHECK(std::holds_alternative<LogicalUnknown>(a[6].data));
    const auto& ts = std::get<TypedScalar>(a[7].data);
    CHECK(ts.type_tag == "IFCLABEL");
    CHECK(ts.value->text() == "x");
    REQUIRE(a[8].is_list());
    CHECK(a[8].list().size() == 2);
}

TEST_CASE("escape decoding round-trips a fixture table") {
    // pairs of raw payload / expected decoded text
    const std::pair<const char*, const char*> table[] = {
        {"plain", "plain"},
        {"it''s", "it's"},
        {"a\\\\b", "a\\b"},
        {"H\\X2\\00F6\\X0\\he", "Höhe"},
        {"\\X2\\00C400D6\\X0\\", "ÄÖ"},
        {"T\\X\\FCr", "Tür"},
        {"\\S\\\x44", "Ä"},  // \S\D -> 0xC4
        {"line\\N\\break", "line\nbreak"},
        {"", ""},
        {"90\\X2\\00B0\\X0\\", "90°"},
    };
    for (const auto& [raw, want] : table) CHECK(decode_step_string(raw) == want);
}

TEST_CASE("by_type exact and subtype expansion") {
    EntityGraph g = parse_ok(wrap_data(
        "#1=IFCWALL('a',$,$,$);\n#3=IFCDOOR('b',$,$,$);\n#5=IFCWALL('c',$,$,$);"));
    CHECK(by_type(g, "IfcWall") == std::vector<InstanceId>{1, 5});
    CHECK(by_type(g, "IFCBUILDINGELEMENT", true) == std::vector<InstanceId>{1, 3, 5});
    CHECK(by_type(g, "IfcZeppelin").empty());

    // brute-force closure over the bundled table agrees
    auto closure = subtype_closure("IFCBUILDINGELEMENT");
    std::vector<InstanceId> brute;
    for (const auto& [id, inst] : g.entities)
        for (const auto& t : closure)
            if (inst.ifc_type == t) brute.push_back(id);
    std::sort(brute.begin(), brute.end());
    CHECK(by_type(g, "ifcbuildingelement", true) == brute);
}

TEST_CASE("parse determinism and invariants on all fixture models") {
    const char* models[] = {"models/toy_house.ifc", "models/width_revit.ifc",
                            "models/width_clinical.ifc", "models/width_archicad.ifc",
                            "models/spatial_site.ifc"};
    for (const char* m : models) {
        CAPTURE(m);
        std::string text = read_file(fixture(m));
        EntityGraph g1 = parse_ok(text);
        EntityGraph g2 = parse_ok(text);
        CHECK(g1 == g2);
        CHECK(g1.size() <= 200);
        check_graph_invariants(g1);
    }
}

TEST_CASE("pset traversal on the heterogeneity fixture") {
    EntityGraph g = parse_ok(read_file(fixture("models/toy_house.ifc")));

    auto psets = psets_of(g, 12);
    REQUIRE(psets.size() == 2);
    CHECK(psets[0].pset_name == "ArchiCADProperties");
    double width = 0;
    REQUIRE(psets[0].props.count("Breite (B)"));
    CHECK(psets[0].props.at("Breite (B)").as_real(width));
    CHECK(width == doctest::Approx(0.885));
    CHECK(psets[0].props.count("Höhe (H)"));

    // type pset present, instance value wins for IsExternal
    CHECK(psets[1].pset_name == "Pset_DoorCommon");
    CHECK(std::get<TypedScalar>(psets[1].props.at("FireRating").data).value->text() == "EI30");
    const auto& ext = std::get<TypedScalar>(psets[1].props.at("IsExternal").data);
    CHECK(std::get<bool>(ext.value->data) == true);

    // door 2 sees the un-overridden type value
    auto d2 = pset_value(g, 13, "Pset_DoorCommon", "IsExternal");
    REQUIRE(d2.has_value());
    CHECK(std::get<bool>(std::get<TypedScalar>(d2->data).value->data) == false);

    CHECK(psets_of(g, 14).empty());  // slab has no psets
    CHECK_THROWS_AS(psets_of(g, 9999), UnknownEntity);
}

TEST_CASE("quantity sets") {
    EntityGraph g = parse_ok(read_file(fixture("models/toy_house.ifc")));
    auto q = quantities_of(g, 10);
    REQUIRE(q.size() == 1);
    CHECK(q[0].pset_name == "BaseQuantities");
    double v = 0;
    CHECK(q[0].props.at("NetVolume").as_real(v));
    CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("spatial containment and decomposition") {
    EntityGraph g = parse_ok(read_file(fixture("models/toy_house.ifc")));
    auto storey = spatial_container(g, 10);
    REQUIRE(storey.has_value());
    CHECK(name_of(g, *storey) == std::string("OK OG2"));
    CHECK(contained_elements(g, 4) == std::vector<InstanceId>{10, 11, 12, 13, 14});
    CHECK(parent_of(g, 4) == InstanceId{3});
    CHECK(children_of(g, 3) == std::vector<InstanceId>{4});
    CHECK_FALSE(spatial_container(g, 2).has_value());  // site has no container

    // brute-force scan of all containment relationships agrees
    std::vector<InstanceId> brute;
    for (const auto& [id, inst] : g.entities) {
        if (inst.ifc_type != "IFCRELCONTAINEDINSPATIALSTRUCTURE") continue;
        if (inst.attributes[5].ref_id() != 4) continue;
        for (const auto& m : inst.attributes[4].list()) brute.push_back(m.ref_id());
    }
    std::sort(brute.begin(), brute.end());
    CHECK(contained_elements(g, 4) == brute);
}

TEST_CASE("extruded volumes") {
    EntityGraph g = parse_ok(read_file(fixture("models/toy_house.ifc")));
    auto wall = extruded_volume(g, 10);
    REQUIRE(wall.has_value());
    CHECK(*wall == doctest::Approx(2.0).epsilon(1e-9));
    auto slab = extruded_volume(g, 14);
    REQUIRE(slab.has_value());
    CHECK(*slab == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(footprint_area(g, 14) == doctest::Approx(12.0));
    CHECK_FALSE(extruded_volume(g, 12).has_value());  // door has no representation

    EntityGraph site = parse_ok(read_file(fixture("models/spatial_site.ifc")));
    CHECK_FALSE(extruded_volume(site, 10).has_value());  // BRep-only
}

TEST_CASE("polygon area shoelace") {
    CHECK(polygon_area({{0, 0}, {4, 0}, {4, 3}, {0, 3}}) == doctest::Approx(12.0));
    CHECK(polygon_area({{0, 0}, {0, 3}, {4, 3}, {4, 0}}) == doctest::Approx(12.0));  // reversed
    CHECK(polygon_area({{0, 0}, {1, 0}}) == 0.0);
}

TEST_CASE("diagnostic dump format") {
    EntityGraph g = parse_ok(wrap_data("#2=IFCDOOR('g',$);\n#1=IFCWALL('g',$,$);"));
    CHECK(diagnostic_dump(g) == "1\tIFCWALL\t3\n2\tIFCDOOR\t2\n");
}
