#pragma once

#include <string>
#include <vector>

#include "hgbc/mesh.hpp"

namespace hgbc {

std::vector<std::string> builtin_names();

// Throws std::invalid_argument for an unknown name.
Polygon builtin_polygon(const std::string& name);

// Number of uniform refinements applied to the ear-clipped polygon to get
// the design mesh of a built-in shape.
int builtin_design_levels(const std::string& name);

// Ear-clipped polygon refined `levels` times.
Triangulation design_mesh(const Polygon& polygon, int levels);
Triangulation builtin_design_mesh(const std::string& name);

}  // namespace hgbc
