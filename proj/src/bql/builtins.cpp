#include <algorithm>

#include "cobbie/bql/interp.hpp"
#include "cobbie/ifc/geometry.hpp"
#include "cobbie/ifc/navigate.hpp"
#include "cobbie/ifc/schema.hpp"

namespace cobbie::bql {

namespace {

namespace ifc = cobbie::ifc;

Value from_attribute(const ifc::AttributeValue& a) {
    if (std::holds_alternative<ifc::NullValue>(a.data) ||
        std::holds_alternative<ifc::DerivedPlaceholder>(a.data) ||
        std::holds_alternative<ifc::LogicalUnknown>(a.data))
        return Value::null();
    if (auto* i = std::get_if<std::int64_t>(&a.data)) return Value::integer(*i);
    if (auto* d = std::get_if<double>(&a.data)) return Value::real(*d);
    if (auto* s = std::get_if<std::string>(&a.data)) return Value::str(*s);
    if (auto* e = std::get_if<ifc::EnumToken>(&a.data)) return Value::str(e->token);
    if (auto* b = std::get_if<bool>(&a.data)) return Value::boolean(*b);
    if (auto* r = std::get_if<ifc::Reference>(&a.data)) return Value::entity(r->id);
    if (auto* t = std::get_if<ifc::TypedScalar>(&a.data))
        return t->value ? from_attribute(*t->value) : Value::null();
    if (auto* l = std::get_if<ifc::AttributeList>(&a.data)) {
        ValueList out;
        out.reserve(l->size());
        for (const auto& item : *l) out.push_back(from_attribute(item));
        return Value::list(std::move(out));
    }
    return Value::null();
}

// Well-known attribute positions; schema-independent fallback is attr_N.
std::string attribute_label(const std::string& ifc_type, std::size_t idx) {
    static const char* rooted[] = {"GlobalId", "OwnerHistory", "Name", "Description"};
    if (idx < 4 && ifc_type.rfind("IFCREL", 0) != 0) return rooted[idx];
    if (idx < 4) return rooted[idx];
    if ((ifc_type == "IFCDOOR" || ifc_type == "IFCWINDOW")) {
        if (idx == 8) return "OverallHeight";
        if (idx == 9) return "OverallWidth";
    }
    return "attr_" + std::to_string(idx);
}

Value entity_list(const std::vector<ifc::InstanceId>& ids) {
    ValueList out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(Value::entity(id));
    return Value::list(std::move(out));
}

const ValueList& want_list(Interpreter& in, const Value& v, const char* fn) {
    if (!v.is_list())
        in.fail(std::string("type mismatch: ") + fn + " expects a list, got " + type_name(v));
    return *std::get<std::shared_ptr<ValueList>>(v.data);
}

const std::string& want_str(Interpreter& in, const Value& v, const char* fn) {
    if (!v.is_str())
        in.fail(std::string("type mismatch: ") + fn + " expects a string, got " + type_name(v));
    return std::get<std::string>(v.data);
}

void want_arity(Interpreter& in, const std::vector<Value>& args, std::size_t lo, std::size_t hi,
                const char* fn) {
    if (args.size() < lo || args.size() > hi)
        in.fail(std::string("arity mismatch: ") + fn + " expects " + std::to_string(lo) +
                (hi != lo ? ".." + std::to_string(hi) : "") + " argument(s), got " +
                std::to_string(args.size()));
}

Value pset_map(const ifc::PsetView& view) {
    ValueMap props;
    for (const auto& [k, v] : view.props) props[k] = from_attribute(v);
    return Value::map(std::move(props));
}

std::optional<Value> find_set_value(const std::vector<ifc::PsetView>& sets,
                                    const std::string& set_name, const std::string& prop) {
    for (const auto& s : sets) {
        if (s.pset_name != set_name) continue;
        auto it = s.props.find(prop);
        if (it != s.props.end()) return from_attribute(it->second);
    }
    return std::nullopt;
}

std::map<std::string, Builtin> make_table() {
    std::map<std::string, Builtin> t;

    t["types"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 0, 0, "types");
        std::vector<std::string> names;
        for (const auto& [type, ids] : in.graph().type_index) names.push_back(type);
        std::sort(names.begin(), names.end());
        ValueList out;
        for (auto& n : names) out.push_back(Value::str(std::move(n)));
        return Value::list(std::move(out));
    };
    t["by_type"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 2, "by_type");
        bool subtypes = args.size() == 2 && args[1].truthy();
        return entity_list(ifc::by_type(in.graph(), want_str(in, args[0], "by_type"), subtypes));
    };
    t["typeof"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "typeof");
        return Value::str(in.graph().at(in.require_entity(args[0], "typeof")).ifc_type);
    };
    t["attrs"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "attrs");
        const auto& e = in.graph().at(in.require_entity(args[0], "attrs"));
        ValueMap out;
        for (std::size_t i = 0; i < e.attributes.size(); ++i)
            out[attribute_label(e.ifc_type, i)] = from_attribute(e.attributes[i]);
        return Value::map(std::move(out));
    };
    t["attr"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 2, 2, "attr");
        const auto& e = in.graph().at(in.require_entity(args[0], "attr"));
        if (args[1].is_int()) {
            auto idx = std::get<std::int64_t>(args[1].data);
            if (idx < 0 || idx >= static_cast<std::int64_t>(e.attributes.size()))
                return Value::null();
            return from_attribute(e.attributes[static_cast<std::size_t>(idx)]);
        }
        const std::string& name = want_str(in, args[1], "attr");
        for (std::size_t i = 0; i < e.attributes.size(); ++i)
            if (attribute_label(e.ifc_type, i) == name) return from_attribute(e.attributes[i]);
        return Value::null();
    };
    t["name_of"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "name_of");
        auto n = ifc::name_of(in.graph(), in.require_entity(args[0], "name_of"));
        return n ? Value::str(*n) : Value::null();
    };
    t["guid"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "guid");
        auto g = ifc::guid_of(in.graph(), in.require_entity(args[0], "guid"));
        return g ? Value::str(*g) : Value::null();
    };
    t["psets"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "psets");
        ValueList out;
        for (const auto& p : ifc::psets_of(in.graph(), in.require_entity(args[0], "psets")))
            out.push_back(Value::str(p.pset_name));
        return Value::list(std::move(out));
    };
    t["pset"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 2, 2, "pset");
        const std::string& name = want_str(in, args[1], "pset");
        for (const auto& p : ifc::psets_of(in.graph(), in.require_entity(args[0], "pset")))
            if (p.pset_name == name) return pset_map(p);
        return Value::null();
    };
    t["pset_value"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 3, 3, "pset_value");
        auto sets = ifc::psets_of(in.graph(), in.require_entity(args[0], "pset_value"));
        auto v = find_set_value(sets, want_str(in, args[1], "pset_value"),
                                want_str(in, args[2], "pset_value"));
        return v.value_or(Value::null());
    };
    t["quantities"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "quantities");
        ValueList out;
        for (const auto& q : ifc::quantities_of(in.graph(), in.require_entity(args[0], "quantities")))
            out.push_back(Value::str(q.pset_name));
        return Value::list(std::move(out));
    };
    t["quantity"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 3, 3, "quantity");
        auto sets = ifc::quantities_of(in.graph(), in.require_entity(args[0], "quantity"));
        auto v = find_set_value(sets, want_str(in, args[1], "quantity"),
                                want_str(in, args[2], "quantity"));
        return v.value_or(Value::null());
    };
    t["container"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "container");
        auto c = ifc::spatial_container(in.graph(), in.require_entity(args[0], "container"));
        return c ? Value::entity(*c) : Value::null();
    };
    t["contained"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "contained");
        return entity_list(
            ifc::contained_elements(in.graph(), in.require_entity(args[0], "contained")));
    };
    t["parent"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "parent");
        auto p = ifc::parent_of(in.graph(), in.require_entity(args[0], "parent"));
        return p ? Value::entity(*p) : Value::null();
    };
    t["children"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "children");
        return entity_list(ifc::children_of(in.graph(), in.require_entity(args[0], "children")));
    };
    t["extruded_volume"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "extruded_volume");
        auto v = ifc::extruded_volume(in.graph(), in.require_entity(args[0], "extruded_volume"));
        return v ? Value::real(*v) : Value::null();
    };
    t["footprint_area"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "footprint_area");
        auto v = ifc::footprint_area(in.graph(), in.require_entity(args[0], "footprint_area"));
        return v ? Value::real(*v) : Value::null();
    };
    t["polygon_area"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "polygon_area");
        std::vector<ifc::Point2> ring;
        for (const auto& pt : want_list(in, args[0], "polygon_area")) {
            const auto& pair = want_list(in, pt, "polygon_area point");
            if (pair.size() < 2 || !pair[0].is_number() || !pair[1].is_number())
                in.fail("type mismatch: polygon_area expects [x, y] pairs");
            ring.push_back({pair[0].as_number(), pair[1].as_number()});
        }
        return Value::real(ifc::polygon_area(ring));
    };
    t["count"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "count");
        if (args[0].is_str())
            return Value::integer(
                static_cast<std::int64_t>(std::get<std::string>(args[0].data).size()));
        if (args[0].is_map())
            return Value::integer(static_cast<std::int64_t>(
                std::get<std::shared_ptr<ValueMap>>(args[0].data)->size()));
        return Value::integer(
            static_cast<std::int64_t>(want_list(in, args[0], "count").size()));
    };
    t["sum"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "sum");
        double total = 0;
        std::int64_t int_total = 0;
        bool all_int = true;
        for (const auto& v : want_list(in, args[0], "sum")) {
            if (v.is_null()) continue;  // NotComputable results skipped
            if (!v.is_number())
                in.fail("type mismatch: sum expects numbers, got " + type_name(v));
            if (v.is_int()) {
                int_total += std::get<std::int64_t>(v.data);
            } else {
                all_int = false;
            }
            total += v.as_number();
        }
        return all_int ? Value::integer(int_total) : Value::real(total);
    };
    auto extremum = [](bool minimum) {
        return [minimum](Interpreter& in, std::vector<Value>& args) {
            want_arity(in, args, 1, 1, minimum ? "min" : "max");
            const ValueList& list = want_list(in, args[0], minimum ? "min" : "max");
            Value best;
            for (const auto& v : list) {
                if (v.is_null()) continue;
                if (!v.is_number())
                    in.fail("type mismatch: min/max expect numbers, got " + type_name(v));
                if (best.is_null() || (minimum ? v.as_number() < best.as_number()
                                              : v.as_number() > best.as_number()))
                    best = v;
            }
            return best;
        };
    };
    t["min"] = extremum(true);
    t["max"] = extremum(false);
    t["unique"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "unique");
        ValueList out;
        for (const auto& v : want_list(in, args[0], "unique")) {
            bool seen = false;
            for (const auto& u : out)
                if (value_equals(u, v)) {
                    seen = true;
                    break;
                }
            if (!seen) out.push_back(v);
        }
        return Value::list(std::move(out));
    };
    t["filter"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 2, 2, "filter");
        ValueList out;
        for (const auto& v : want_list(in, args[0], "filter")) {
            in.tick();
            if (in.call_callable(args[1], {v}).truthy()) out.push_back(v);
        }
        return Value::list(std::move(out));
    };
    t["map"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 2, 2, "map");
        ValueList out;
        for (const auto& v : want_list(in, args[0], "map")) {
            in.tick();
            out.push_back(in.call_callable(args[1], {v}));
        }
        return Value::list(std::move(out));
    };
    t["lower"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "lower");
        std::string s = want_str(in, args[0], "lower");
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return Value::str(std::move(s));
    };
    t["str_contains"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 2, 2, "str_contains");
        return Value::boolean(want_str(in, args[0], "str_contains")
                                  .find(want_str(in, args[1], "str_contains")) !=
                              std::string::npos);
    };
    t["keys"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "keys");
        if (!args[0].is_map())
            in.fail("type mismatch: keys expects a map, got " + type_name(args[0]));
        ValueList out;
        for (const auto& [k, v] : *std::get<std::shared_ptr<ValueMap>>(args[0].data))
            out.push_back(Value::str(k));
        return Value::list(std::move(out));
    };
    t["print"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "print");
        in.emit(format_value(args[0]) + "\n");
        return Value::null();
    };
    t["str"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "str");
        return Value::str(format_value(args[0]));
    };
    t["docs"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "docs");
        const auto& cb = in.env().docs_callback();
        if (!cb) in.fail("documentation retrieval is not available in this session");
        return Value::str(cb(want_str(in, args[0], "docs")));
    };
    t["source"] = [](Interpreter& in, std::vector<Value>& args) {
        want_arity(in, args, 1, 1, "source");
        const auto& sources = in.env().tool_sources();
        auto it = sources.find(want_str(in, args[0], "source"));
        if (it == sources.end()) in.fail("unknown tool: " + std::get<std::string>(args[0].data));
        return Value::str(it->second);
    };
    return t;
}

}  // namespace

const std::map<std::string, Builtin>& builtin_table() {
    static const std::map<std::string, Builtin> table = make_table();
    return table;
}

}  // namespace cobbie::bql
