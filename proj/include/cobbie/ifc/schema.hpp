#pragma once
// Minimal hand-written IFC subtype table: spatial structure, building elements,
// relationships, and property/quantity resources. Not a full EXPRESS schema.

#include <string>
#include <vector>

#include "cobbie/ifc/graph.hpp"

namespace cobbie::ifc {

// Direct subtypes of an uppercase type name; empty if none or unknown.
const std::vector<std::string>& direct_subtypes(const std::string& upper_name);

// Transitive closure including the type itself.
std::vector<std::string> subtype_closure(const std::string& upper_name);

std::string to_upper(std::string_view s);

// Case-insensitive type lookup, optionally expanded through the subtype table.
// Result sorted ascending by id; unknown types yield an empty list.
std::vector<InstanceId> by_type(const EntityGraph& g, const std::string& type_name,
                                bool include_subtypes = false);

}  // namespace cobbie::ifc
