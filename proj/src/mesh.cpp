#include "hgbc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "hgbc/error.hpp"

namespace hgbc {

namespace {

bool on_segment(Point p, Point q, Point r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
         std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Orientation sign of c against the line ab, treating rounding-level values
// as collinear.
int orient_sign(Point a, Point b, Point c) {
  const double o = orient(a, b, c);
  const double scale = norm(b - a) * std::max(norm(c - a), norm(c - b));
  return std::abs(o) <= 1e-12 * scale ? 0 : sign(o);
}

std::string edge_name(int a, int b) {
  std::ostringstream os;
  os << "(" << a << "," << b << ")";
  return os.str();
}

}  // namespace

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orient_sign(p1, p2, q1);
  const int o2 = orient_sign(p1, p2, q2);
  const int o3 = orient_sign(q1, q2, p1);
  const int o4 = orient_sign(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, q1, p2)) return true;
  if (o2 == 0 && on_segment(p1, q2, p2)) return true;
  if (o3 == 0 && on_segment(q1, p1, q2)) return true;
  if (o4 == 0 && on_segment(q1, p2, q2)) return true;
  return false;
}

// ---------------------------------------------------------------- Polygon

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices_[i] == vertices_[(i + 1) % n]) {
      throw GeometryError("polygon vertices " + std::to_string(i) + " and " +
                          std::to_string((i + 1) % n) + " coincide");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i], b = vertices_[(i + 1) % n];
    // Adjacent edges may only touch at their shared vertex.
    const Point c = vertices_[(i + 2) % n];
    if (orient_sign(a, b, c) == 0 && dot(a - b, c - b) > 0.0) {
      throw GeometryError("polygon edges " + edge_name(int(i), int((i + 1) % n)) + " and " +
                          edge_name(int((i + 1) % n), int((i + 2) % n)) + " overlap");
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point p = vertices_[j], q = vertices_[(j + 1) % n];
      if (segments_intersect(a, b, p, q)) {
        throw GeometryError("polygon is not simple: edge " + edge_name(int(i), int((i + 1) % n)) +
                            " crosses edge " + edge_name(int(j), int((j + 1) % n)));
      }
    }
  }

  const double area = signed_area(vertices_);
  if (!(std::abs(area) > 0.0)) throw GeometryError("degenerate polygon: zero area");
  if (area < 0.0) std::reverse(vertices_.begin(), vertices_.end());
}

Point Polygon::centroid() const {
  double cx = 0.0, cy = 0.0, twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i], b = vertices_[(i + 1) % n];
    const double w = cross(a, b);
    twice += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

bool Polygon::is_star_shaped_from_centroid() const {
  const Point c = centroid();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(orient(vertices_[i], vertices_[(i + 1) % n], c) > 0.0)) return false;
  }
  return true;
}

// ---------------------------------------------------------- Triangulation

Triangulation::Triangulation(std::vector<Point> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (triangles_.empty()) throw GeometryError("triangulation has no triangles");
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw GeometryError("triangle " + std::to_string(t) + " references missing vertex " +
                            std::to_string(v));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw GeometryError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    if (!(orient(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) > 0.0)) {
      throw GeometryError("triangle " + std::to_string(t) +
                          " is degenerate or not counter-clockwise");
    }
  }
  build_topology();
  build_locator();
}

void Triangulation::build_topology() {
  const int nv = static_cast<int>(vertices_.size());
  const int nt = static_cast<int>(triangles_.size());

  struct HalfEdge {
    int lo, hi, tri;
    bool forward;  // stored lo->hi in the triangle's orientation
  };
  std::vector<HalfEdge> half;
  half.reserve(3 * triangles_.size());
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = triangles_[t][k], b = triangles_[t][(k + 1) % 3];
      half.push_back({std::min(a, b), std::max(a, b), t, a < b});
    }
  }
  std::stable_sort(half.begin(), half.end(), [](const HalfEdge& x, const HalfEdge& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
  });

  edges_.clear();
  edge_triangles_.clear();
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) ++j;
    const std::size_t count = j - i;
    if (count > 2) {
      throw GeometryError("edge " + edge_name(half[i].lo, half[i].hi) + " is shared by " +
                          std::to_string(count) + " triangles");
    }
    if (count == 2 && half[i].forward == half[i + 1].forward) {
      throw GeometryError("triangles " + std::to_string(half[i].tri) + " and " +
                          std::to_string(half[i + 1].tri) + " overlap across edge " +
                          edge_name(half[i].lo, half[i].hi));
    }
    edges_.push_back({half[i].lo, half[i].hi});
    edge_triangles_.push_back({half[i].tri, count == 2 ? half[i + 1].tri : -1});
    i = j;
  }

  vertex_triangles_.assign(nv, {});
  for (int t = 0; t < nt; ++t) {
    for (int v : triangles_[t]) vertex_triangles_[v].push_back(t);
  }
  for (int v = 0; v < nv; ++v) {
    if (vertex_triangles_[v].empty()) {
      throw GeometryError("vertex " + std::to_string(v) + " is not used by any triangle");
    }
  }

  boundary_vertex_.assign(nv, 0);
  mesh_size_ = 0.0;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    mesh_size_ = std::max(mesh_size_, norm(vertices_[edges_[e][1]] - vertices_[edges_[e][0]]));
    if (edge_triangles_[e][1] < 0) {
      boundary_vertex_[edges_[e][0]] = 1;
      boundary_vertex_[edges_[e][1]] = 1;
    }
  }

  // The boundary must be one simple closed loop enclosing exactly the
  // triangles' area; together with consistent orientation this rules out
  // overlapping triangles.
  const std::vector<int> loop = boundary_loop();
  std::vector<Point> loop_points;
  loop_points.reserve(loop.size());
  for (int v : loop) loop_points.push_back(vertices_[v]);
  try {
    Polygon check(loop_points);
  } catch (const GeometryError& e) {
    throw GeometryError(std::string("boundary loop invalid: ") + e.what());
  }
  const double enclosed = signed_area(loop_points);
  const double total = area();
  if (!(enclosed > 0.0) || std::abs(total - enclosed) > 1e-10 * std::abs(enclosed)) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      for (std::size_t f = e + 1; f < edges_.size(); ++f) {
        const Edge& a = edges_[e];
        const Edge& b = edges_[f];
        if (a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1]) continue;
        if (segments_intersect(vertices_[a[0]], vertices_[a[1]], vertices_[b[0]],
                               vertices_[b[1]])) {
          throw GeometryError("triangulation is not conforming: edge " + edge_name(a[0], a[1]) +
                              " crosses edge " + edge_name(b[0], b[1]));
        }
      }
    }
    throw GeometryError("triangles overlap: total area " + std::to_string(total) +
                        " differs from enclosed area " + std::to_string(enclosed));
  }
}

std::vector<int> Triangulation::boundary_loop() const {
  const int nv = static_cast<int>(vertices_.size());
  std::vector<int> next(nv, -1);
  int boundary_edges = 0;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_triangles_[e][1] >= 0) continue;
    ++boundary_edges;
    const auto& tri = triangles_[edge_triangles_[e][0]];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (std::min(a, b) == edges_[e][0] && std::max(a, b) == edges_[e][1]) {
        if (next[a] >= 0) {
          throw GeometryError("boundary is not a single loop at vertex " + std::to_string(a));
        }
        next[a] = b;
      }
    }
  }
  int start = -1;
  for (int v = 0; v < nv; ++v) {
    if (next[v] >= 0) {
      start = v;
      break;
    }
  }
  if (start < 0) throw GeometryError("triangulation has no boundary");
  std::vector<int> loop;
  int v = start;
  do {
    loop.push_back(v);
    v = next[v];
    if (v < 0 || static_cast<int>(loop.size()) > boundary_edges) {
      throw GeometryError("boundary edges do not form a closed loop");
    }
  } while (v != start);
  if (static_cast<int>(loop.size()) != boundary_edges) {
    throw GeometryError("boundary has more than one loop (holes are not supported)");
  }
  return loop;
}

void Triangulation::build_locator() {
  bbox_min_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  bbox_max_ = {-bbox_min_.x, -bbox_min_.y};
  for (const Point& p : vertices_) {
    bbox_min_ = {std::min(bbox_min_.x, p.x), std::min(bbox_min_.y, p.y)};
    bbox_max_ = {std::max(bbox_max_.x, p.x), std::max(bbox_max_.y, p.y)};
  }
  const double w = std::max(bbox_max_.x - bbox_min_.x, 1e-300);
  const double h = std::max(bbox_max_.y - bbox_min_.y, 1e-300);
  const double cells = std::max(1.0, std::sqrt(double(triangles_.size())));
  grid_nx_ = std::max(1, static_cast<int>(std::ceil(cells * std::sqrt(w / h))));
  grid_ny_ = std::max(1, static_cast<int>(std::ceil(cells * std::sqrt(h / w))));
  grid_nx_ = std::min(grid_nx_, 4096);
  grid_ny_ = std::min(grid_ny_, 4096);
  cell_w_ = w / grid_nx_;
  cell_h_ = h / grid_ny_;

  const double pad = 1e-9 * std::max(w, h);
  auto cell_range = [&](const Triangle& tri) {
    double x0 = bbox_max_.x, y0 = bbox_max_.y, x1 = bbox_min_.x, y1 = bbox_min_.y;
    for (int v : tri) {
      x0 = std::min(x0, vertices_[v].x);
      y0 = std::min(y0, vertices_[v].y);
      x1 = std::max(x1, vertices_[v].x);
      y1 = std::max(y1, vertices_[v].y);
    }
    auto clampx = [&](double x) {
      return std::clamp(static_cast<int>(std::floor((x - bbox_min_.x) / cell_w_)), 0, grid_nx_ - 1);
    };
    auto clampy = [&](double y) {
      return std::clamp(static_cast<int>(std::floor((y - bbox_min_.y) / cell_h_)), 0, grid_ny_ - 1);
    };
    return std::array<int, 4>{clampx(x0 - pad), clampx(x1 + pad), clampy(y0 - pad), clampy(y1 + pad)};
  };

  std::vector<int> counts(static_cast<std::size_t>(grid_nx_) * grid_ny_ + 1, 0);
  for (const auto& tri : triangles_) {
    const auto r = cell_range(tri);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) ++counts[static_cast<std::size_t>(j) * grid_nx_ + i + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  cell_start_ = counts;
  cell_items_.assign(cell_start_.back(), 0);
  std::vector<int> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) {
    const auto r = cell_range(triangles_[t]);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) cell_items_[fill[static_cast<std::size_t>(j) * grid_nx_ + i]++] = t;
  }
}

std::optional<Location> Triangulation::locate(Point p) const {
  const double w = bbox_max_.x - bbox_min_.x, h = bbox_max_.y - bbox_min_.y;
  const double pad = 1e-9 * std::max(w, h);
  if (p.x < bbox_min_.x - pad || p.x > bbox_max_.x + pad || p.y < bbox_min_.y - pad ||
      p.y > bbox_max_.y + pad) {
    return std::nullopt;
  }
  const int i = std::clamp(static_cast<int>(std::floor((p.x - bbox_min_.x) / cell_w_)), 0, grid_nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((p.y - bbox_min_.y) / cell_h_)), 0, grid_ny_ - 1);
  const std::size_t cell = static_cast<std::size_t>(j) * grid_nx_ + i;
  std::optional<Location> best;
  for (int k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
    const int t = cell_items_[k];
    if (best && best->triangle < t) continue;
    const auto& tri = triangles_[t];
    const Bary b = barycentric(p, vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (b[0] >= -kLocateTolerance && b[1] >= -kLocateTolerance && b[2] >= -kLocateTolerance) {
      best = Location{t, b};
    }
  }
  return best;
}

std::vector<int> Triangulation::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
    if (boundary_vertex_[v]) out.push_back(v);
  return out;
}

std::vector<int> Triangulation::interior_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
    if (!boundary_vertex_[v]) out.push_back(v);
  return out;
}

int Triangulation::edge_index(int a, int b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool Triangulation::is_boundary_edge(int a, int b) const {
  const int e = edge_index(a, b);
  return e >= 0 && edge_triangles_[e][1] < 0;
}

std::vector<int> Triangulation::vertex_neighbors(int v) const {
  std::vector<int> out;
  for (int t : vertex_triangles_[v])
    for (int w : triangles_[t])
      if (w != v) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Triangulation::triangle_area(int t) const {
  const auto& tri = triangles_[t];
  return 0.5 * orient(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Triangulation::area() const {
  double a = 0.0;
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) a += triangle_area(t);
  return a;
}

// ----------------------------------------------------------- construction

std::vector<Triangle> ear_clip(const std::vector<Point>& loop) {
  std::vector<int> remaining(loop.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<Triangle> out;
  while (remaining.size() > 3) {
    const std::size_t m = remaining.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m && !clipped; ++i) {
      const int a = remaining[(i + m - 1) % m], b = remaining[i], c = remaining[(i + 1) % m];
      if (!(orient(loop[a], loop[b], loop[c]) > 0.0)) continue;
      bool blocked = false;
      for (int v : remaining) {
        if (v == a || v == b || v == c) continue;
        const Point p = loop[v];
        if (orient(loop[a], loop[b], p) >= 0.0 && orient(loop[b], loop[c], p) >= 0.0 &&
            orient(loop[c], loop[a], p) >= 0.0) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      out.push_back({a, b, c});
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) throw GeometryError("ear clipping failed: no ear found");
  }
  if (!(orient(loop[remaining[0]], loop[remaining[1]], loop[remaining[2]]) > 0.0)) {
    throw GeometryError("ear clipping failed: degenerate final triangle");
  }
  out.push_back({remaining[0], remaining[1], remaining[2]});
  return out;
}

Triangulation triangulate(const Polygon& polygon, double target_size, TriangulationMethod method) {
  if (!(target_size > 0.0)) throw GeometryError("target size must be positive");
  std::vector<Point> pts = polygon.vertices();
  std::vector<Triangle> tris;
  if (method == TriangulationMethod::Fan) {
    if (!polygon.is_star_shaped_from_centroid()) {
      throw GeometryError("fan triangulation needs a polygon star-shaped from its centroid");
    }
    const int c = static_cast<int>(pts.size());
    pts.push_back(polygon.centroid());
    for (int i = 0; i < c; ++i) tris.push_back({i, (i + 1) % c, c});
  } else {
    tris = ear_clip(pts);
  }
  Triangulation mesh(std::move(pts), std::move(tris));
  while (mesh.mesh_size() > target_size) mesh = refine_uniform(mesh);
  return mesh;
}

Refinement refine_with_parents(const Triangulation& mesh) {
  const int nv = static_cast<int>(mesh.vertex_count());
  std::vector<Point> pts = mesh.vertices();
  pts.reserve(nv + mesh.edges().size());
  for (const Edge& e : mesh.edges()) pts.push_back(midpoint(mesh.vertex(e[0]), mesh.vertex(e[1])));

  std::vector<Triangle> tris;
  std::vector<int> parent;
  tris.reserve(4 * mesh.triangle_count());
  parent.reserve(4 * mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto [a, b, c] = mesh.triangle(t);
    const int ab = nv + mesh.edge_index(a, b);
    const int bc = nv + mesh.edge_index(b, c);
    const int ca = nv + mesh.edge_index(c, a);
    tris.push_back({a, ab, ca});
    tris.push_back({ab, b, bc});
    tris.push_back({ca, bc, c});
    tris.push_back({ab, bc, ca});
    for (int k = 0; k < 4; ++k) parent.push_back(t);
  }
  return {Triangulation(std::move(pts), std::move(tris)), std::move(parent)};
}

Triangulation refine_uniform(const Triangulation& mesh) { return refine_with_parents(mesh).mesh; }

// ----------------------------------------------------------------- stars

namespace {

StarRegion finish_region(const Triangulation& mesh, StarRegion region, std::vector<char> in_region) {
  region.triangle_indices.clear();
  std::vector<char> vmark(mesh.vertex_count(), 0);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    if (!in_region[t]) continue;
    region.triangle_indices.push_back(t);
    for (int v : mesh.triangle(t)) vmark[v] = 1;
  }
  std::vector<char> artificial(mesh.vertex_count(), 0);
  const auto& edges = mesh.edges();
  const auto& owners = mesh.edge_triangles();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int t0 = owners[e][0], t1 = owners[e][1];
    if (t1 < 0) continue;
    if (bool(in_region[t0]) != bool(in_region[t1])) {
      for (int v : edges[e])
        if (!mesh.is_boundary_vertex(v)) artificial[v] = 1;
    }
  }
  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    if (vmark[v]) region.vertex_indices.push_back(v);
    if (artificial[v]) region.artificial_boundary_vertices.push_back(v);
  }
  return region;
}

std::vector<int> vertex_hops(const Triangulation& mesh, const std::vector<int>& sources) {
  std::vector<int> dist(mesh.vertex_count(), -1);
  std::deque<int> queue;
  for (int s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : mesh.vertex_neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

void check_ring(int k) {
  if (k < 1) throw GeometryError("star ring must be at least 1");
}

}  // namespace

StarRegion star_of_vertex(const Triangulation& mesh, int vertex, int k) {
  if (vertex < 0 || vertex >= static_cast<int>(mesh.vertex_count())) {
    throw GeometryError("star center vertex " + std::to_string(vertex) + " does not exist");
  }
  check_ring(k);
  const std::vector<int> ring = triangle_rings_from_vertex(mesh, vertex);
  std::vector<char> in(mesh.triangle_count(), 0);
  for (std::size_t t = 0; t < ring.size(); ++t) in[t] = ring[t] <= k;
  StarRegion region;
  region.kind = StarRegion::CenterKind::Vertex;
  region.center = vertex;
  region.ring = k;
  return finish_region(mesh, std::move(region), std::move(in));
}

StarRegion star_of_triangle(const Triangulation& mesh, int triangle, int k) {
  if (triangle < 0 || triangle >= static_cast<int>(mesh.triangle_count())) {
    throw GeometryError("star center triangle " + std::to_string(triangle) + " does not exist");
  }
  check_ring(k);
  const std::vector<int> dist = triangle_distances(mesh, triangle);
  std::vector<char> in(mesh.triangle_count(), 0);
  for (std::size_t t = 0; t < dist.size(); ++t) in[t] = dist[t] <= k;
  StarRegion region;
  region.kind = StarRegion::CenterKind::Triangle;
  region.center = triangle;
  region.ring = k;
  return finish_region(mesh, std::move(region), std::move(in));
}

std::vector<int> triangle_rings_from_vertex(const Triangulation& mesh, int vertex) {
  const std::vector<int> hops = vertex_hops(mesh, {vertex});
  std::vector<int> ring(mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto& tri = mesh.triangle(t);
    ring[t] = 1 + std::min({hops[tri[0]], hops[tri[1]], hops[tri[2]]});
  }
  return ring;
}

std::vector<int> triangle_distances(const Triangulation& mesh, int from) {
  const auto& src = mesh.triangle(from);
  const std::vector<int> hops = vertex_hops(mesh, {src[0], src[1], src[2]});
  std::vector<int> dist(mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto& tri = mesh.triangle(t);
    dist[t] = t == from ? 0 : 1 + std::min({hops[tri[0]], hops[tri[1]], hops[tri[2]]});
  }
  return dist;
}

int triangle_distance(const Triangulation& mesh, int a, int b) {
  const int nt = static_cast<int>(mesh.triangle_count());
  if (a < 0 || a >= nt || b < 0 || b >= nt) throw GeometryError("triangle index out of range");
  return triangle_distances(mesh, a)[b];
}

double quasi_uniformity(const Triangulation& mesh) {
  double beta = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto& tri = mesh.triangle(t);
    const Point a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    const double perimeter = norm(b - a) + norm(c - b) + norm(a - c);
    const double inradius = 2.0 * mesh.triangle_area(t) / perimeter;
    if (!(inradius > 0.0)) {
      throw GeometryError("triangle " + std::to_string(t) + " has zero inradius");
    }
    beta = std::max(beta, mesh.mesh_size() / inradius);
  }
  return beta;
}

}  // namespace hgbc
