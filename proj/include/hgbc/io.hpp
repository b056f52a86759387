#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "hgbc/gbc.hpp"
#include "hgbc/mesh.hpp"

namespace hgbc {

// Mesh documents: {"vertices": [[x, y], ...], "triangles": [[i, j, k], ...]}.
// Coordinates are written with round-trip precision.
std::string mesh_to_json(const Triangulation& mesh);
Triangulation mesh_from_json(const std::string& text);
void write_mesh(const std::filesystem::path& path, const Triangulation& mesh);
Triangulation read_mesh(const std::filesystem::path& path);

// A geometry file holding either a mesh or, when "triangles" is absent, a
// polygon given by its "vertices". Invalid geometry throws GeometryError.
std::variant<Polygon, Triangulation> read_geometry(const std::filesystem::path& path);

struct RunInfo {
  std::string command;
  std::string quadrature_stiffness;
  std::string quadrature_mass;
  std::string kernel_backend;
};

// Directory layout: coarse.json, fine.json, manifest.json and one text file
// per field (one coefficient per line in dof order, 17 significant digits).
void save_gbc_set(const std::filesystem::path& dir, const GbcSet& set, const RunInfo& info = {});
GbcSet load_gbc_set(const std::filesystem::path& dir);

}  // namespace hgbc
