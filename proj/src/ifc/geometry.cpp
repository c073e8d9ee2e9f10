#include "cobbie/ifc/geometry.hpp"

#include <cmath>

namespace cobbie::ifc {

namespace {

const AttributeValue* attr_at(const EntityInstance& e, std::size_t idx) {
    return idx < e.attributes.size() ? &e.attributes[idx] : nullptr;
}

std::optional<double> profile_area(const EntityGraph& g, const EntityInstance& profile) {
    if (profile.ifc_type == "IFCRECTANGLEPROFILEDEF") {
        double x, y;
        const AttributeValue* xs = attr_at(profile, 3);
        const AttributeValue* ys = attr_at(profile, 4);
        if (xs && ys && xs->as_real(x) && ys->as_real(y)) return x * y;
        return std::nullopt;
    }
    if (profile.ifc_type == "IFCARBITRARYCLOSEDPROFILEDEF") {
        const AttributeValue* curve_ref = attr_at(profile, 2);
        if (!curve_ref || !curve_ref->is_ref()) return std::nullopt;
        const EntityInstance* curve = g.find(curve_ref->ref_id());
        if (!curve || curve->ifc_type != "IFCPOLYLINE") return std::nullopt;
        const AttributeValue* pts = attr_at(*curve, 0);
        if (!pts || !pts->is_list()) return std::nullopt;
        std::vector<Point2> ring;
        for (const auto& pref : pts->list()) {
            if (!pref.is_ref()) return std::nullopt;
            const EntityInstance* pt = g.find(pref.ref_id());
            if (!pt || pt->ifc_type != "IFCCARTESIANPOINT") return std::nullopt;
            const AttributeValue* coords = attr_at(*pt, 0);
            if (!coords || !coords->is_list() || coords->list().size() < 2) return std::nullopt;
            double x, y;
            if (!coords->list()[0].as_real(x) || !coords->list()[1].as_real(y))
                return std::nullopt;
            ring.push_back({x, y});
        }
        if (ring.size() < 3) return std::nullopt;
        return polygon_area(ring);
    }
    return std::nullopt;
}

// MappingTarget operator must be identity up to translation (null/1.0 scale,
// no axis overrides); volume is translation-invariant.
bool mapping_is_translation_only(const EntityGraph& g, const AttributeValue* op_ref) {
    if (!op_ref || !op_ref->is_ref()) return true;
    const EntityInstance* op = g.find(op_ref->ref_id());
    if (!op) return false;
    auto axis_clear = [&](std::size_t idx) {
        const AttributeValue* a = attr_at(*op, idx);
        return !a || a->is_null();
    };
    if (!axis_clear(0) || !axis_clear(1)) return false;
    if (const AttributeValue* scale = attr_at(*op, 3); scale && !scale->is_null()) {
        double s;
        if (!scale->as_real(s) || std::abs(s - 1.0) > 1e-12) return false;
    }
    if (op->attributes.size() > 4 && !axis_clear(4)) return false;
    return true;
}

std::optional<const EntityInstance*> find_extrusion(const EntityGraph& g,
                                                    const EntityInstance& entity);

const EntityInstance* extrusion_in_items(const EntityGraph& g, const AttributeValue& items) {
    if (!items.is_list()) return nullptr;
    for (const auto& item_ref : items.list()) {
        if (!item_ref.is_ref()) continue;
        const EntityInstance* item = g.find(item_ref.ref_id());
        if (!item) continue;
        if (item->ifc_type == "IFCEXTRUDEDAREASOLID") return item;
        if (item->ifc_type == "IFCMAPPEDITEM") {
            if (!mapping_is_translation_only(g, attr_at(*item, 1))) continue;
            const AttributeValue* src = attr_at(*item, 0);
            if (!src || !src->is_ref()) continue;
            const EntityInstance* map = g.find(src->ref_id());
            if (!map || map->ifc_type != "IFCREPRESENTATIONMAP") continue;
            const AttributeValue* mapped = attr_at(*map, 1);
            if (!mapped || !mapped->is_ref()) continue;
            const EntityInstance* rep = g.find(mapped->ref_id());
            if (!rep) continue;
            if (const AttributeValue* inner = attr_at(*rep, 3))
                if (const EntityInstance* found = extrusion_in_items(g, *inner)) return found;
        }
    }
    return nullptr;
}

const EntityInstance* body_extrusion(const EntityGraph& g, const EntityInstance& entity) {
    // find the product definition shape among the entity's references
    for (const auto& attr : entity.attributes) {
        if (!attr.is_ref()) continue;
        const EntityInstance* shape = g.find(attr.ref_id());
        if (!shape || shape->ifc_type != "IFCPRODUCTDEFINITIONSHAPE") continue;
        const AttributeValue* reps = attr_at(*shape, 2);
        if (!reps || !reps->is_list()) continue;
        for (const auto& rep_ref : reps->list()) {
            if (!rep_ref.is_ref()) continue;
            const EntityInstance* rep = g.find(rep_ref.ref_id());
            if (!rep) continue;
            if (const AttributeValue* items = attr_at(*rep, 3))
                if (const EntityInstance* found = extrusion_in_items(g, *items)) return found;
        }
    }
    return nullptr;
}

}  // namespace

double polygon_area(const std::vector<Point2>& points) {
    if (points.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point2& a = points[i];
        const Point2& b = points[(i + 1) % points.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) / 2.0;
}

std::optional<double> footprint_area(const EntityGraph& g, InstanceId id) {
    const EntityInstance& entity = g.at(id);
    const EntityInstance* solid = body_extrusion(g, entity);
    if (!solid) return std::nullopt;
    const AttributeValue* swept = attr_at(*solid, 0);
    if (!swept || !swept->is_ref()) return std::nullopt;
    const EntityInstance* profile = g.find(swept->ref_id());
    if (!profile) return std::nullopt;
    return profile_area(g, *profile);
}

std::optional<double> extruded_volume(const EntityGraph& g, InstanceId id) {
    const EntityInstance& entity = g.at(id);
    const EntityInstance* solid = body_extrusion(g, entity);
    if (!solid) return std::nullopt;
    const AttributeValue* swept = attr_at(*solid, 0);
    const AttributeValue* depth_v = attr_at(*solid, 3);
    if (!swept || !swept->is_ref() || !depth_v) return std::nullopt;
    const EntityInstance* profile = g.find(swept->ref_id());
    if (!profile) return std::nullopt;
    double depth;
    if (!depth_v->as_real(depth)) return std::nullopt;
    auto area = profile_area(g, *profile);
    if (!area) return std::nullopt;
    return *area * depth;
}

}  // namespace cobbie::ifc
