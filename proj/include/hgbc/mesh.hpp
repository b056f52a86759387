#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgbc/geometry.hpp"

namespace hgbc {

// Simple closed polygon, stored counter-clockwise.
class Polygon {
public:
  // Validates the loop; a clockwise loop is reversed. Throws GeometryError on
  // fewer than 3 vertices, repeated consecutive vertices, zero area or
  // self-intersection (the message names the crossing edges).
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const { return signed_area(vertices_); }
  bool is_star_shaped_from_centroid() const;
  Point centroid() const;

private:
  std::vector<Point> vertices_;
};

using Triangle = std::array<int, 3>;
using Edge = std::array<int, 2>;  // sorted vertex pair

struct Location {
  int triangle = -1;
  Bary bary{};
};

// Conforming triangulation of a polygonal region. Immutable after
// construction; all queries are safe to call concurrently.
class Triangulation {
public:
  // Validates orientation, conformity and boundary structure. Throws
  // GeometryError with a diagnostic on failure.
  Triangulation(std::vector<Point> vertices, std::vector<Triangle> triangles);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  Point vertex(int v) const { return vertices_[v]; }
  const Triangle& triangle(int t) const { return triangles_[t]; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  const std::vector<std::uint8_t>& boundary_vertex_flags() const { return boundary_vertex_; }
  std::vector<int> boundary_vertices() const;
  std::vector<int> interior_vertices() const;

  // Sorted unique edges and, per edge, the one or two incident triangles
  // (second entry -1 for boundary edges).
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::array<int, 2>>& edge_triangles() const { return edge_triangles_; }
  int edge_index(int a, int b) const;  // -1 when absent
  bool is_boundary_edge(int a, int b) const;

  const std::vector<int>& triangles_of_vertex(int v) const { return vertex_triangles_[v]; }
  std::vector<int> vertex_neighbors(int v) const;

  double mesh_size() const { return mesh_size_; }  // longest edge
  double area() const;
  double triangle_area(int t) const;
  Point bbox_min() const { return bbox_min_; }
  Point bbox_max() const { return bbox_max_; }

  // Containing triangle (lowest index on ties) and barycentric coordinates,
  // or nullopt when p is outside. Points within 1e-12 (barycentric) of an
  // edge count as inside.
  std::optional<Location> locate(Point p) const;

  // Boundary loop of the region, counter-clockwise, starting at the lowest
  // boundary vertex index.
  std::vector<int> boundary_loop() const;

  static constexpr double kLocateTolerance = 1e-12;

private:
  void build_topology();
  void build_locator();

  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::vector<std::vector<int>> vertex_triangles_;
  double mesh_size_ = 0.0;
  Point bbox_min_{}, bbox_max_{};

  // Uniform bucket grid over triangle bounding boxes.
  int grid_nx_ = 1, grid_ny_ = 1;
  double cell_w_ = 1.0, cell_h_ = 1.0;
  std::vector<int> cell_start_;
  std::vector<int> cell_items_;
};

enum class TriangulationMethod { Auto, EarClipping, Fan };

// Coarse triangulation followed by uniform refinement until the mesh size is
// at most target_size. Auto uses ear clipping; Fan connects every boundary
// vertex to the centroid and requires a star-shaped polygon.
Triangulation triangulate(const Polygon& polygon, double target_size,
                          TriangulationMethod method = TriangulationMethod::Auto);

// Ear clipping with deterministic ear order (lowest loop position first).
std::vector<Triangle> ear_clip(const std::vector<Point>& loop);

struct Refinement {
  Triangulation mesh;
  // Child 4t+k of parent t: k = 0,1,2 are the corner triangles at parent
  // corners 0,1,2, k = 3 the middle one. Parent vertices keep their ids.
  std::vector<int> parent;
};

Refinement refine_with_parents(const Triangulation& mesh);
Triangulation refine_uniform(const Triangulation& mesh);

// star^k around a vertex or a triangle.
struct StarRegion {
  enum class CenterKind { Vertex, Triangle };
  CenterKind kind = CenterKind::Vertex;
  int center = 0;
  int ring = 1;
  std::vector<int> triangle_indices;  // sorted
  std::vector<int> vertex_indices;    // sorted
  std::vector<int> artificial_boundary_vertices;  // on the region boundary but not on the domain boundary
};

StarRegion star_of_vertex(const Triangulation& mesh, int vertex, int k);
StarRegion star_of_triangle(const Triangulation& mesh, int triangle, int k);

// Ring index of every triangle: the smallest k with the triangle in
// star^k(vertex). Triangles touching the vertex get 1.
std::vector<int> triangle_rings_from_vertex(const Triangulation& mesh, int vertex);

// Vertex-sharing hop distance from triangle `from` to every triangle.
std::vector<int> triangle_distances(const Triangulation& mesh, int from);
int triangle_distance(const Triangulation& mesh, int a, int b);

// max over triangles of mesh_size / inradius. Throws GeometryError on a
// degenerate triangle.
double quasi_uniformity(const Triangulation& mesh);

}  // namespace hgbc
