#include "hgbc/builtin.hpp"

#include <stdexcept>

namespace hgbc {

namespace {

struct Builtin {
  const char* name;
  std::vector<Point> vertices;
  int design_levels;
};

const std::vector<Builtin>& table() {
  static const std::vector<Builtin> shapes = {
      {"square", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0},
      {"convex-quad", {{0, 0}, {2, 0.2}, {1.7, 1.9}, {0.1, 1.5}}, 3},
      {"nonconvex-quad", {{0, 0}, {2, 0.3}, {0.9, 0.9}, {0.3, 2}}, 3},
      {"lshape", {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, 2},
  };
  return shapes;
}

const Builtin& find(const std::string& name) {
  for (const auto& b : table()) {
    if (name == b.name) return b;
  }
  std::string known;
  for (const auto& b : table()) known += std::string(known.empty() ? "" : ", ") + b.name;
  throw std::invalid_argument("unknown built-in polygon '" + name + "' (known: " + known + ")");
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& b : table()) names.emplace_back(b.name);
  return names;
}

Polygon builtin_polygon(const std::string& name) { return Polygon(find(name).vertices); }

int builtin_design_levels(const std::string& name) { return find(name).design_levels; }

Triangulation design_mesh(const Polygon& polygon, int levels) {
  if (levels < 0) throw std::invalid_argument("refinement level count must be non-negative");
  Triangulation mesh(polygon.vertices(), ear_clip(polygon.vertices()));
  for (int l = 0; l < levels; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

Triangulation builtin_design_mesh(const std::string& name) {
  return design_mesh(builtin_polygon(name), builtin_design_levels(name));
}

}  // namespace hgbc
