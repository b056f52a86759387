#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "hgbc/error.hpp"
#include "hgbc/mesh.hpp"

using namespace hgbc;
using namespace hgbc::testing;

namespace {

double area_sum(const Triangulation& m) {
  double a = 0.0;
  for (int t = 0; t < int(m.triangle_count()); ++t) a += m.triangle_area(t);
  return a;
}

}  // namespace

TEST_CASE("triangulate the unit square") {
  const Polygon square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Triangulation coarse = triangulate(square, 2.0);
  CHECK(coarse.triangle_count() == 2);
  CHECK(coarse.vertex_count() == 4);

  const Triangulation fine = triangulate(square, 0.8);
  CHECK(fine.triangle_count() == 8);
  CHECK(area_sum(fine) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fine.mesh_size() <= 0.8);
}

TEST_CASE("triangle area") {
  const Polygon tri({{0, 0}, {1, 0}, {0, 1}});
  for (double h : {5.0, 0.3, 0.1}) {
    CHECK(std::abs(area_sum(triangulate(tri, h)) - 0.5) <= 1e-12);
  }
}

TEST_CASE("fan triangulation connects the centroid") {
  const Polygon square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Triangulation fan = triangulate(square, 2.0, TriangulationMethod::Fan);
  CHECK(fan.triangle_count() == 4);
  CHECK(fan.interior_vertices().size() == 1);
  const Point c = fan.vertex(fan.interior_vertices()[0]);
  CHECK(c.x == doctest::Approx(0.5));
  CHECK(c.y == doctest::Approx(0.5));
}

TEST_CASE("ear clipping of a reflex quadrilateral") {
  const std::vector<Point> quad{{0, 0}, {2, 0.3}, {0.9, 0.9}, {0.3, 2}};
  const auto tris = ear_clip(quad);
  REQUIRE(tris.size() == 2);
  const Triangulation mesh(quad, tris);
  CHECK(std::abs(mesh.area() - std::abs(signed_area(quad))) <= 1e-12);
  // The diagonal must pass through the reflex vertex 2.
  CHECK(mesh.edge_index(0, 2) >= 0);
  CHECK(mesh.edge_index(1, 3) < 0);
}

TEST_CASE("polygon validation") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), GeometryError);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
  try {
    Polygon bowtie({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    FAIL("self-intersecting polygon accepted");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("crosses edge") != std::string::npos);
  }
  const Polygon clockwise({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(clockwise.area() > 0.0);
}

TEST_CASE("triangulation validation") {
  CHECK_THROWS_AS(Triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}), GeometryError);
  CHECK_THROWS_AS(Triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}), GeometryError);
  CHECK_THROWS_AS(Triangulation({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), GeometryError);
  // Two copies of the same triangle.
  CHECK_THROWS_AS(Triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}, {0, 1, 2}}), GeometryError);
  // Unused vertex.
  CHECK_THROWS_AS(Triangulation({{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {{0, 1, 2}}), GeometryError);
}

TEST_CASE("uniform refinement") {
  const Triangulation square = unit_square();
  const Triangulation fine = refine_uniform(square);
  CHECK(fine.triangle_count() == 8);
  CHECK(fine.vertex_count() == 9);

  const Triangulation grid = diagonal_grid(3);
  const Refinement r = refine_with_parents(grid);
  CHECK(r.mesh.vertex_count() == grid.vertex_count() + grid.edges().size());
  CHECK(r.mesh.mesh_size() == doctest::Approx(grid.mesh_size() / 2).epsilon(1e-14));
  CHECK(r.parent.size() == 4 * grid.triangle_count());
  for (std::size_t e = 0; e < grid.edges().size(); ++e) {
    const int mid = int(grid.vertex_count() + e);
    const bool boundary = grid.edge_triangles()[e][1] < 0;
    CHECK(r.mesh.is_boundary_vertex(mid) == boundary);
  }
  for (int v = 0; v < int(grid.vertex_count()); ++v) {
    CHECK(r.mesh.vertex(v) == grid.vertex(v));
    CHECK(r.mesh.is_boundary_vertex(v) == grid.is_boundary_vertex(v));
  }
}

TEST_CASE("boundary flags match edge ownership") {
  for (const Triangulation& m : {diagonal_grid(4), refine_uniform(crisscross_square())}) {
    std::vector<int> owned(m.vertex_count(), 0);
    for (std::size_t e = 0; e < m.edges().size(); ++e) {
      if (m.edge_triangles()[e][1] < 0) owned[m.edges()[e][0]] = owned[m.edges()[e][1]] = 1;
    }
    for (int v = 0; v < int(m.vertex_count()); ++v) CHECK(m.is_boundary_vertex(v) == (owned[v] == 1));
  }
}

TEST_CASE("star of an interior grid vertex") {
  const Triangulation grid = diagonal_grid(2);
  const int center = 4;
  REQUIRE(!grid.is_boundary_vertex(center));
  const StarRegion s1 = star_of_vertex(grid, center, 1);
  CHECK(s1.triangle_indices.size() == 6);

  const StarRegion all = star_of_vertex(grid, center, 5);
  CHECK(all.triangle_indices.size() == grid.triangle_count());
  CHECK(all.artificial_boundary_vertices.empty());
  CHECK_THROWS(star_of_vertex(grid, 99, 1));
  CHECK_THROWS(star_of_vertex(grid, center, 0));
}

TEST_CASE("star vertex sets match breadth-first search") {
  const Triangulation mesh = refine_uniform(refine_uniform(crisscross_square()));
  for (int v : mesh.interior_vertices()) {
    for (int k = 1; k <= 4; ++k) {
      const StarRegion s = star_of_vertex(mesh, v, k);
      const std::set<int> oracle = bfs_within(mesh, v, k);
      CHECK(std::set<int>(s.vertex_indices.begin(), s.vertex_indices.end()) == oracle);
    }
  }
}

TEST_CASE("star of a triangle and triangle distance") {
  const Triangulation grid = diagonal_grid(3);
  const StarRegion s = star_of_triangle(grid, 0, 1);
  for (int t : s.triangle_indices) CHECK(triangle_distance(grid, 0, t) <= 1);
  CHECK(triangle_distance(grid, 5, 5) == 0);
  for (int t = 0; t < int(grid.triangle_count()); ++t) {
    const auto& a = grid.triangle(0);
    const auto& b = grid.triangle(t);
    bool share = false;
    for (int x : a) share = share || std::find(b.begin(), b.end(), x) != b.end();
    if (t != 0 && share) CHECK(triangle_distance(grid, 0, t) == 1);
    if (!share) CHECK(triangle_distance(grid, 0, t) >= 2);
  }
  CHECK_THROWS(triangle_distance(grid, 0, 1000));
}

TEST_CASE("triangle rings from a vertex") {
  const Triangulation grid = diagonal_grid(4);
  const std::vector<int> ring = triangle_rings_from_vertex(grid, 12);
  for (int t = 0; t < int(grid.triangle_count()); ++t) {
    const StarRegion s = star_of_vertex(grid, 12, ring[t]);
    CHECK(std::binary_search(s.triangle_indices.begin(), s.triangle_indices.end(), t));
    if (ring[t] > 1) {
      const StarRegion smaller = star_of_vertex(grid, 12, ring[t] - 1);
      CHECK(!std::binary_search(smaller.triangle_indices.begin(), smaller.triangle_indices.end(), t));
    }
  }
}

TEST_CASE("locate round trip") {
  const Triangulation mesh = refine_uniform(Triangulation({{0, 0}, {2, 0.3}, {0.9, 0.9}, {0.3, 2}},
                                                          {{0, 1, 2}, {0, 2, 3}}));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.2, 2.2);
  int inside = 0;
  for (int i = 0; i < 2000; ++i) {
    const Point p{u(rng), u(rng)};
    const auto loc = mesh.locate(p);
    if (!loc) continue;
    ++inside;
    const auto& t = mesh.triangle(loc->triangle);
    const Point q = loc->bary[0] * mesh.vertex(t[0]) + loc->bary[1] * mesh.vertex(t[1]) +
                    loc->bary[2] * mesh.vertex(t[2]);
    CHECK(std::abs(q.x - p.x) <= 1e-12);
    CHECK(std::abs(q.y - p.y) <= 1e-12);
  }
  CHECK(inside > 200);
  CHECK(!mesh.locate({-1.0, -1.0}));
  CHECK(!mesh.locate({1.5, 1.5}));  // inside the hull, outside the reflex notch
  const auto corner = mesh.locate({0.0, 0.0});
  REQUIRE(corner);
}

TEST_CASE("quasi uniformity") {
  const double s = std::sqrt(3.0);
  const Triangulation equilateral({{0, 0}, {2, 0}, {1, s}}, {{0, 1, 2}});
  // Side 2, inradius 1/sqrt(3).
  CHECK(quasi_uniformity(equilateral) == doctest::Approx(2.0 * s).epsilon(1e-14));
  const Triangulation square = unit_square();
  // Longest edge sqrt(2) over inradius (2 - sqrt(2)) / 2 of the right triangle.
  CHECK(quasi_uniformity(square) == doctest::Approx(std::sqrt(2.0) * 2.0 / (2.0 - std::sqrt(2.0))));
  CHECK(quasi_uniformity(refine_uniform(square)) == doctest::Approx(quasi_uniformity(square)));
}
