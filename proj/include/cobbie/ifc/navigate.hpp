#pragma once
// Property-set, quantity-set, and spatial navigation over an EntityGraph.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cobbie/ifc/graph.hpp"

namespace cobbie::ifc {

struct PsetView {
    InstanceId owner = 0;
    std::string pset_name;
    // single-value properties only; complex properties flattened "parent.child"
    std::map<std::string, AttributeValue> props;
};

// All IfcPropertySet views reachable via IfcRelDefinesByProperties, plus
// type-object property sets via IfcRelDefinesByType. For a pset name defined
// both on the type and the instance, instance values win per property.
std::vector<PsetView> psets_of(const EntityGraph& g, InstanceId id);

// Same traversal for IfcElementQuantity sets; props hold the quantity values.
std::vector<PsetView> quantities_of(const EntityGraph& g, InstanceId id);

std::optional<AttributeValue> pset_value(const EntityGraph& g, InstanceId id,
                                         const std::string& pset_name,
                                         const std::string& prop_name);

// IfcRelContainedInSpatialStructure
std::optional<InstanceId> spatial_container(const EntityGraph& g, InstanceId id);
std::vector<InstanceId> contained_elements(const EntityGraph& g, InstanceId id);

// IfcRelAggregates
std::optional<InstanceId> parent_of(const EntityGraph& g, InstanceId id);
std::vector<InstanceId> children_of(const EntityGraph& g, InstanceId id);

std::optional<std::string> name_of(const EntityGraph& g, InstanceId id);
std::optional<std::string> guid_of(const EntityGraph& g, InstanceId id);

}  // namespace cobbie::ifc
