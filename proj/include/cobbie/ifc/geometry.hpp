#pragma once
// Swept-solid quantities. Only extruded-area solids with rectangle or closed
// polyline profiles are computed; anything else is NotComputable.

#include <optional>
#include <vector>

#include "cobbie/ifc/graph.hpp"

namespace cobbie::ifc {

struct Point2 {
    double x = 0;
    double y = 0;
};

// Signed shoelace area made absolute. Open rings are closed implicitly.
double polygon_area(const std::vector<Point2>& points);

// profile_area x extrusion_depth in model length-units cubed.
std::optional<double> extruded_volume(const EntityGraph& g, InstanceId id);

// Area of the extrusion profile.
std::optional<double> footprint_area(const EntityGraph& g, InstanceId id);

}  // namespace cobbie::ifc
