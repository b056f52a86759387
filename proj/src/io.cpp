#include "hgbc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hgbc/error.hpp"

namespace hgbc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeometryError(std::string("malformed geometry document: ") + e.what());
  }
}

std::vector<Point> read_points(const json& doc) {
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw GeometryError("geometry document has no 'vertices' array");
  }
  std::vector<Point> points;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw GeometryError("vertex entries must be [x, y] number pairs");
    }
    points.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return points;
}

Triangulation mesh_from_doc(const json& doc) {
  std::vector<Point> points = read_points(doc);
  if (!doc["triangles"].is_array()) throw GeometryError("'triangles' must be an array");
  std::vector<Triangle> triangles;
  for (const auto& t : doc["triangles"]) {
    if (!t.is_array() || t.size() != 3) throw GeometryError("triangle entries must be [i, j, k] index triples");
    Triangle tri{};
    for (int k = 0; k < 3; ++k) {
      if (!t[k].is_number_integer()) throw GeometryError("triangle indices must be integers");
      tri[k] = t[k].get<int>();
    }
    triangles.push_back(tri);
  }
  return Triangulation(std::move(points), std::move(triangles));
}

std::string format_coefficients(const std::vector<double>& values) {
  std::string out;
  char buf[40];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

std::vector<double> parse_coefficients(const fs::path& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<double> values;
  values.reserve(expected);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t used = 0;
    try {
      values.push_back(std::stod(line, &used));
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != line.size()) throw Error(path.string() + ": bad coefficient '" + line + "'");
  }
  if (values.size() != expected) {
    throw Error(path.string() + ": expected " + std::to_string(expected) + " coefficients, found " +
                std::to_string(values.size()));
  }
  return values;
}

std::string field_file(FieldKind kind, int vertex) {
  return std::string(kind == FieldKind::Boundary ? "S_" : "R_") + std::to_string(vertex) + ".txt";
}

}  // namespace

std::string mesh_to_json(const Triangulation& mesh) {
  json doc;
  doc["vertices"] = json::array();
  for (const Point& p : mesh.vertices()) doc["vertices"].push_back({p.x, p.y});
  doc["triangles"] = json::array();
  for (const Triangle& t : mesh.triangles()) doc["triangles"].push_back({t[0], t[1], t[2]});
  return doc.dump() + "\n";
}

Triangulation mesh_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.contains("triangles")) throw GeometryError("mesh document has no 'triangles' array");
  return mesh_from_doc(doc);
}

void write_mesh(const fs::path& path, const Triangulation& mesh) { write_text(path, mesh_to_json(mesh)); }

Triangulation read_mesh(const fs::path& path) { return mesh_from_json(read_text(path)); }

std::variant<Polygon, Triangulation> read_geometry(const fs::path& path) {
  const json doc = parse(read_text(path));
  if (doc.contains("triangles")) return mesh_from_doc(doc);
  return Polygon(read_points(doc));
}

void save_gbc_set(const fs::path& dir, const GbcSet& set, const RunInfo& info) {
  fs::create_directories(dir);
  write_mesh(dir / "coarse.json", set.pair->coarse());
  write_mesh(dir / "fine.json", set.pair->fine());

  json manifest;
  manifest["degree"] = set.space->degree();
  manifest["levels"] = set.pair->levels();
  manifest["dof_count"] = set.space->dof_count();
  manifest["solver"] = set.solver.kind == SolverKind::Direct ? "direct" : "cg";
  manifest["tolerance"] = set.solver.tolerance;
  manifest["provenance"] = set.provenance.local ? "local" : "global";
  manifest["ring"] = set.provenance.local ? json(set.provenance.ring) : json(nullptr);
  if (!info.command.empty()) manifest["command"] = info.command;
  if (!info.quadrature_stiffness.empty()) manifest["quadrature_stiffness"] = info.quadrature_stiffness;
  if (!info.quadrature_mass.empty()) manifest["quadrature_mass"] = info.quadrature_mass;
  if (!info.kernel_backend.empty()) manifest["kernel_backend"] = info.kernel_backend;

  json fields = json::array();
  auto emit = [&](FieldKind kind, const std::vector<int>& vertices, const std::vector<FeField>& values) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const std::string name = field_file(kind, vertices[i]);
      write_text(dir / name, format_coefficients(values[i].coefficients()));
      fields.push_back({{"kind", kind == FieldKind::Boundary ? "boundary" : "interior"},
                        {"vertex", vertices[i]},
                        {"file", name}});
    }
  };
  emit(FieldKind::Boundary, set.boundary_vertices, set.boundary_fields);
  emit(FieldKind::Interior, set.interior_vertices, set.interior_fields);
  manifest["fields"] = std::move(fields);
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

namespace {

GbcSet load_checked(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_text(dir / "manifest.json"));
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  auto coarse = std::make_shared<const Triangulation>(read_mesh(dir / "coarse.json"));
  GbcSet set;
  set.pair = std::make_shared<const DesignPair>(coarse, manifest.at("levels").get<int>());
  set.space = std::make_shared<const FeSpace>(set.pair->fine_ptr(), manifest.at("degree").get<int>());
  if (set.space->dof_count() != manifest.at("dof_count").get<int>()) {
    throw Error("manifest dof count does not match the rebuilt space");
  }
  set.solver.kind = manifest.at("solver").get<std::string>() == "cg" ? SolverKind::ConjugateGradient
                                                                     : SolverKind::Direct;
  set.solver.tolerance = manifest.at("tolerance").get<double>();
  set.provenance.local = manifest.at("provenance").get<std::string>() == "local";
  if (set.provenance.local) set.provenance.ring = manifest.at("ring").get<int>();

  const std::size_t n = static_cast<std::size_t>(set.space->dof_count());
  for (const auto& entry : manifest.at("fields")) {
    const int vertex = entry.at("vertex").get<int>();
    const bool boundary = entry.at("kind").get<std::string>() == "boundary";
    if (vertex < 0 || vertex >= int(coarse->vertex_count()) || coarse->is_boundary_vertex(vertex) != boundary) {
      throw Error("manifest field entry for vertex " + std::to_string(vertex) + " does not match the coarse mesh");
    }
    FeField field(set.space, parse_coefficients(dir / entry.at("file").get<std::string>(), n));
    if (boundary) {
      set.boundary_vertices.push_back(vertex);
      set.boundary_fields.push_back(std::move(field));
    } else {
      set.interior_vertices.push_back(vertex);
      set.interior_fields.push_back(std::move(field));
    }
  }
  return set;
}

}  // namespace

GbcSet load_gbc_set(const fs::path& dir) {
  try {
    return load_checked(dir);
  } catch (const json::exception& e) {
    throw Error("malformed manifest in " + dir.string() + ": " + e.what());
  }
}

}  // namespace hgbc
