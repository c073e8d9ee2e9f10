#include "cobbie/ifc/navigate.hpp"

#include <algorithm>

namespace cobbie::ifc {

namespace {

const AttributeValue* attr_at(const EntityInstance& e, std::size_t idx) {
    return idx < e.attributes.size() ? &e.attributes[idx] : nullptr;
}

bool list_contains_ref(const AttributeValue* v, InstanceId id) {
    if (!v || !v->is_list()) return false;
    for (const auto& e : v->list())
        if (e.is_ref() && e.ref_id() == id) return true;
    return false;
}

// IfcPropertySingleValue / IfcComplexProperty tree -> flat name->value map
void collect_props(const EntityGraph& g, const AttributeValue& prop_ref,
                   const std::string& prefix, std::map<std::string, AttributeValue>& out) {
    if (!prop_ref.is_ref()) return;
    const EntityInstance* p = g.find(prop_ref.ref_id());
    if (!p) return;
    const AttributeValue* name = attr_at(*p, 0);
    if (!name || !name->is_text()) return;
    std::string full = prefix.empty() ? name->text() : prefix + "." + name->text();
    if (p->ifc_type == "IFCPROPERTYSINGLEVALUE") {
        if (const AttributeValue* v = attr_at(*p, 2)) out[full] = *v;
    } else if (p->ifc_type == "IFCCOMPLEXPROPERTY") {
        if (const AttributeValue* nested = attr_at(*p, 3); nested && nested->is_list())
            for (const auto& child : nested->list()) collect_props(g, child, full, out);
    }
    // enumerated/list/bounded properties are not single-value; skipped by contract
}

std::optional<PsetView> view_of_pset(const EntityGraph& g, InstanceId owner,
                                     const EntityInstance& pset) {
    const AttributeValue* name = attr_at(pset, 2);
    if (!name || !name->is_text()) return std::nullopt;
    PsetView view;
    view.owner = owner;
    view.pset_name = name->text();
    if (const AttributeValue* props = attr_at(pset, pset.ifc_type == "IFCELEMENTQUANTITY" ? 5 : 4);
        props && props->is_list()) {
        for (const auto& ref : props->list()) {
            if (pset.ifc_type == "IFCELEMENTQUANTITY") {
                if (!ref.is_ref()) continue;
                const EntityInstance* q = g.find(ref.ref_id());
                if (!q) continue;
                const AttributeValue* qname = attr_at(*q, 0);
                const AttributeValue* qval = attr_at(*q, 3);
                if (qname && qname->is_text() && qval) view.props[qname->text()] = *qval;
            } else {
                collect_props(g, ref, "", view.props);
            }
        }
    }
    return view;
}

std::vector<PsetView> collect_sets(const EntityGraph& g, InstanceId id,
                                   const std::string& wanted_type) {
    g.at(id);  // UnknownEntity on bad id

    // type-object sets first, instance sets after: instance values override
    std::vector<PsetView> type_views;
    for (InstanceId rel_id : g.referrers_of_type(id, "IFCRELDEFINESBYTYPE")) {
        const EntityInstance& rel = g.at(rel_id);
        if (!list_contains_ref(attr_at(rel, 4), id)) continue;
        const AttributeValue* type_ref = attr_at(rel, 5);
        if (!type_ref || !type_ref->is_ref()) continue;
        const EntityInstance* type_obj = g.find(type_ref->ref_id());
        if (!type_obj) continue;
        if (const AttributeValue* sets = attr_at(*type_obj, 5); sets && sets->is_list()) {
            for (const auto& sref : sets->list()) {
                if (!sref.is_ref()) continue;
                const EntityInstance* pset = g.find(sref.ref_id());
                if (!pset || pset->ifc_type != wanted_type) continue;
                if (auto v = view_of_pset(g, id, *pset)) type_views.push_back(std::move(*v));
            }
        }
    }

    std::vector<PsetView> views = std::move(type_views);
    for (InstanceId rel_id : g.referrers_of_type(id, "IFCRELDEFINESBYPROPERTIES")) {
        const EntityInstance& rel = g.at(rel_id);
        if (!list_contains_ref(attr_at(rel, 4), id)) continue;
        const AttributeValue* def = attr_at(rel, 5);
        if (!def || !def->is_ref()) continue;
        const EntityInstance* pset = g.find(def->ref_id());
        if (!pset || pset->ifc_type != wanted_type) continue;
        auto v = view_of_pset(g, id, *pset);
        if (!v) continue;
        auto existing = std::find_if(views.begin(), views.end(), [&](const PsetView& pv) {
            return pv.pset_name == v->pset_name;
        });
        if (existing != views.end()) {
            for (auto& [k, val] : v->props) existing->props[k] = val;
        } else {
            views.push_back(std::move(*v));
        }
    }
    std::sort(views.begin(), views.end(),
              [](const PsetView& a, const PsetView& b) { return a.pset_name < b.pset_name; });
    return views;
}

std::optional<InstanceId> rel_single(const EntityGraph& g, InstanceId id,
                                     const std::string& rel_type, int list_role,
                                     int single_role) {
    g.at(id);
    for (InstanceId rel_id : g.referrers_of_type(id, rel_type)) {
        const EntityInstance& rel = g.at(rel_id);
        if (!list_contains_ref(attr_at(rel, static_cast<std::size_t>(list_role)), id)) continue;
        const AttributeValue* target = attr_at(rel, static_cast<std::size_t>(single_role));
        if (target && target->is_ref()) return target->ref_id();
    }
    return std::nullopt;
}

std::vector<InstanceId> rel_many(const EntityGraph& g, InstanceId id, const std::string& rel_type,
                                 int single_role, int list_role) {
    g.at(id);
    std::vector<InstanceId> out;
    for (InstanceId rel_id : g.referrers_of_type(id, rel_type)) {
        const EntityInstance& rel = g.at(rel_id);
        const AttributeValue* anchor = attr_at(rel, static_cast<std::size_t>(single_role));
        if (!anchor || !anchor->is_ref() || anchor->ref_id() != id) continue;
        const AttributeValue* members = attr_at(rel, static_cast<std::size_t>(list_role));
        if (!members || !members->is_list()) continue;
        for (const auto& m : members->list())
            if (m.is_ref()) out.push_back(m.ref_id());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<PsetView> psets_of(const EntityGraph& g, InstanceId id) {
    return collect_sets(g, id, "IFCPROPERTYSET");
}

std::vector<PsetView> quantities_of(const EntityGraph& g, InstanceId id) {
    return collect_sets(g, id, "IFCELEMENTQUANTITY");
}

std::optional<AttributeValue> pset_value(const EntityGraph& g, InstanceId id,
                                         const std::string& pset_name,
                                         const std::string& prop_name) {
    for (const auto& view : psets_of(g, id)) {
        if (view.pset_name != pset_name) continue;
        auto it = view.props.find(prop_name);
        if (it != view.props.end()) return it->second;
    }
    return std::nullopt;
}

std::optional<InstanceId> spatial_container(const EntityGraph& g, InstanceId id) {
    return rel_single(g, id, "IFCRELCONTAINEDINSPATIALSTRUCTURE", 4, 5);
}

std::vector<InstanceId> contained_elements(const EntityGraph& g, InstanceId id) {
    return rel_many(g, id, "IFCRELCONTAINEDINSPATIALSTRUCTURE", 5, 4);
}

std::optional<InstanceId> parent_of(const EntityGraph& g, InstanceId id) {
    return rel_single(g, id, "IFCRELAGGREGATES", 5, 4);
}

std::vector<InstanceId> children_of(const EntityGraph& g, InstanceId id) {
    return rel_many(g, id, "IFCRELAGGREGATES", 4, 5);
}

std::optional<std::string> name_of(const EntityGraph& g, InstanceId id) {
    const EntityInstance& e = g.at(id);
    if (const AttributeValue* n = attr_at(e, 2); n && n->is_text()) return n->text();
    return std::nullopt;
}

std::optional<std::string> guid_of(const EntityGraph& g, InstanceId id) {
    const EntityInstance& e = g.at(id);
    if (const AttributeValue* n = attr_at(e, 0); n && n->is_text()) return n->text();
    return std::nullopt;
}

}  // namespace cobbie::ifc
