#include "cobbie/ifc/schema.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace cobbie::ifc {

namespace {

// supertype -> direct subtypes. Covers what the action language navigates;
// vendor/proxy types fall outside the table and match only exactly.
const std::unordered_map<std::string, std::vector<std::string>>& table() {
    static const std::unordered_map<std::string, std::vector<std::string>> t = {
        {"IFCROOT", {"IFCOBJECTDEFINITION", "IFCPROPERTYDEFINITION", "IFCRELATIONSHIP"}},
        {"IFCOBJECTDEFINITION", {"IFCOBJECT", "IFCTYPEOBJECT"}},
        {"IFCOBJECT", {"IFCPRODUCT", "IFCGROUP", "IFCPROCESS", "IFCACTOR"}},
        {"IFCPRODUCT", {"IFCELEMENT", "IFCSPATIALSTRUCTUREELEMENT", "IFCPORT", "IFCANNOTATION"}},
        {"IFCSPATIALSTRUCTUREELEMENT",
         {"IFCSITE", "IFCBUILDING", "IFCBUILDINGSTOREY", "IFCSPACE"}},
        {"IFCELEMENT",
         {"IFCBUILDINGELEMENT", "IFCDISTRIBUTIONELEMENT", "IFCFURNISHINGELEMENT",
          "IFCELEMENTASSEMBLY", "IFCOPENINGELEMENT", "IFCBUILDINGELEMENTPROXY",
          "IFCVIRTUALELEMENT", "IFCTRANSPORTELEMENT"}},
        {"IFCBUILDINGELEMENT",
         {"IFCWALL", "IFCSLAB", "IFCBEAM", "IFCCOLUMN", "IFCDOOR", "IFCWINDOW", "IFCROOF",
          "IFCSTAIR", "IFCSTAIRFLIGHT", "IFCRAMP", "IFCRAMPFLIGHT", "IFCRAILING",
          "IFCCURTAINWALL", "IFCPLATE", "IFCMEMBER", "IFCFOOTING", "IFCPILE", "IFCCOVERING"}},
        {"IFCWALL", {"IFCWALLSTANDARDCASE", "IFCWALLELEMENTEDCASE"}},
        {"IFCSLAB", {"IFCSLABSTANDARDCASE", "IFCSLABELEMENTEDCASE"}},
        {"IFCDISTRIBUTIONELEMENT",
         {"IFCDISTRIBUTIONFLOWELEMENT", "IFCDISTRIBUTIONCONTROLELEMENT"}},
        {"IFCDISTRIBUTIONFLOWELEMENT",
         {"IFCFLOWTERMINAL", "IFCFLOWSEGMENT", "IFCFLOWFITTING", "IFCFLOWCONTROLLER"}},
        {"IFCRELATIONSHIP",
         {"IFCRELDEFINES", "IFCRELDECOMPOSES", "IFCRELCONNECTS", "IFCRELASSOCIATES",
          "IFCRELASSIGNS"}},
        {"IFCRELDEFINES", {"IFCRELDEFINESBYPROPERTIES", "IFCRELDEFINESBYTYPE"}},
        {"IFCRELDECOMPOSES", {"IFCRELAGGREGATES", "IFCRELNESTS"}},
        {"IFCRELCONNECTS",
         {"IFCRELCONTAINEDINSPATIALSTRUCTURE", "IFCRELFILLSELEMENT", "IFCRELVOIDSELEMENT",
          "IFCRELSPACEBOUNDARY"}},
        {"IFCRELASSOCIATES", {"IFCRELASSOCIATESMATERIAL", "IFCRELASSOCIATESCLASSIFICATION"}},
        {"IFCPROPERTYDEFINITION", {"IFCPROPERTYSETDEFINITION"}},
        {"IFCPROPERTYSETDEFINITION", {"IFCPROPERTYSET", "IFCELEMENTQUANTITY"}},
        {"IFCPROPERTY", {"IFCSIMPLEPROPERTY", "IFCCOMPLEXPROPERTY"}},
        {"IFCSIMPLEPROPERTY",
         {"IFCPROPERTYSINGLEVALUE", "IFCPROPERTYENUMERATEDVALUE", "IFCPROPERTYLISTVALUE",
          "IFCPROPERTYBOUNDEDVALUE", "IFCPROPERTYTABLEVALUE"}},
        {"IFCPHYSICALQUANTITY", {"IFCPHYSICALSIMPLEQUANTITY"}},
        {"IFCPHYSICALSIMPLEQUANTITY",
         {"IFCQUANTITYLENGTH", "IFCQUANTITYAREA", "IFCQUANTITYVOLUME", "IFCQUANTITYCOUNT",
          "IFCQUANTITYWEIGHT", "IFCQUANTITYTIME"}},
        {"IFCTYPEOBJECT", {"IFCTYPEPRODUCT"}},
        {"IFCTYPEPRODUCT", {"IFCELEMENTTYPE", "IFCDOORSTYLE", "IFCWINDOWSTYLE"}},
        {"IFCELEMENTTYPE", {"IFCBUILDINGELEMENTTYPE", "IFCFURNISHINGELEMENTTYPE"}},
        {"IFCBUILDINGELEMENTTYPE",
         {"IFCWALLTYPE", "IFCSLABTYPE", "IFCBEAMTYPE", "IFCCOLUMNTYPE", "IFCDOORTYPE",
          "IFCWINDOWTYPE", "IFCCOVERINGTYPE", "IFCRAILINGTYPE", "IFCMEMBERTYPE",
          "IFCPLATETYPE"}},
    };
    return t;
}

}  // namespace

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

const std::vector<std::string>& direct_subtypes(const std::string& upper_name) {
    static const std::vector<std::string> empty;
    auto it = table().find(upper_name);
    return it == table().end() ? empty : it->second;
}

std::vector<std::string> subtype_closure(const std::string& upper_name) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::vector<std::string> stack{upper_name};
    while (!stack.empty()) {
        std::string cur = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(cur).second) continue;
        for (const auto& sub : direct_subtypes(cur)) stack.push_back(sub);
        out.push_back(std::move(cur));
    }
    return out;
}

std::vector<InstanceId> by_type(const EntityGraph& g, const std::string& type_name,
                                bool include_subtypes) {
    std::string upper = to_upper(type_name);
    std::vector<InstanceId> out;
    if (!include_subtypes) {
        out = g.of_type(upper);
        return out;
    }
    for (const auto& t : subtype_closure(upper)) {
        const auto& ids = g.of_type(t);
        out.insert(out.end(), ids.begin(), ids.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace cobbie::ifc
