#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "hgbc/builtin.hpp"
#include "hgbc/error.hpp"
#include "hgbc/io.hpp"

using namespace hgbc;
using namespace hgbc::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hgbc_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("mesh json round trip is exact") {
  Triangulation mesh = builtin_design_mesh("nonconvex-quad");
  mesh = refine_uniform(mesh);
  const Triangulation back = mesh_from_json(mesh_to_json(mesh));
  REQUIRE(back.vertex_count() == mesh.vertex_count());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    CHECK(back.vertex(v).x == mesh.vertex(v).x);
    CHECK(back.vertex(v).y == mesh.vertex(v).y);
  }
  CHECK(back.triangles() == mesh.triangles());

  const fs::path dir = scratch("mesh");
  write_mesh(dir / "m.json", mesh);
  CHECK(read_mesh(dir / "m.json").triangles() == mesh.triangles());
}

TEST_CASE("geometry reader") {
  const fs::path dir = scratch("geometry");
  write(dir / "poly.json", R"({"vertices": [[0,0],[1,0],[1,1],[0,1]]})");
  const auto poly = read_geometry(dir / "poly.json");
  REQUIRE(std::holds_alternative<Polygon>(poly));
  CHECK(std::get<Polygon>(poly).size() == 4);

  write(dir / "mesh.json", mesh_to_json(unit_square()));
  CHECK(std::holds_alternative<Triangulation>(read_geometry(dir / "mesh.json")));

  write(dir / "bowtie.json", R"({"vertices": [[0,0],[1,1],[1,0],[0,1]]})");
  try {
    read_geometry(dir / "bowtie.json");
    FAIL("expected a geometry error");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("crosses edge") != std::string::npos);
  }

  const std::vector<std::string> bad{
      "not json",
      R"({"points": []})",
      R"({"vertices": [[0,0],[1]]})",
      R"({"vertices": [[0,0],[1,0],[0,1]], "triangles": [[0,1]]})",
      R"({"vertices": [[0,0],[1,0],[0,1]], "triangles": [[0,1,7]]})",
      R"({"vertices": [[0,0],[1,0],[0,1]], "triangles": [[0,1,2.5]]})",
      R"({"vertices": [[0,0],[1,0],[2,0]]})",
  };
  for (const std::string& text : bad) {
    INFO(text);
    write(dir / "bad.json", text);
    CHECK_THROWS_AS(read_geometry(dir / "bad.json"), GeometryError);
  }
  CHECK_THROWS_AS(read_geometry(dir / "missing.json"), Error);
}

TEST_CASE("coordinate set persistence") {
  for (int degree : {1, 3}) {
    auto pair = std::make_shared<const DesignPair>(shared(builtin_design_mesh("lshape")), 1);
    auto space = std::make_shared<const FeSpace>(pair->fine_ptr(), degree);
    const GbcSet set = GbcProblem(pair, space).compute_all(4);
    const fs::path dir = scratch("set" + std::to_string(degree));
    save_gbc_set(dir, set, {"gbc", "stiffness-rule", "mass-rule", "scalar"});

    const GbcSet back = load_gbc_set(dir);
    CHECK(back.boundary_vertices == set.boundary_vertices);
    CHECK(back.interior_vertices == set.interior_vertices);
    CHECK(back.space->degree() == degree);
    CHECK(back.pair->levels() == 1);
    const std::vector<Point> grid = grid_points_in_domain(set.pair->fine(), 101);
    auto same = [&](const FeField& a, const FeField& b) {
      CHECK(a.coefficients() == b.coefficients());
      for (const Point& p : grid) {
        if (*a.eval(p) != *b.eval(p)) {
          FAIL("grid evaluation differs at " << p.x << ", " << p.y);
          return;
        }
      }
    };
    for (std::size_t i = 0; i < set.boundary_fields.size(); ++i) same(set.boundary_fields[i], back.boundary_fields[i]);
    for (std::size_t j = 0; j < set.interior_fields.size(); ++j) same(set.interior_fields[j], back.interior_fields[j]);

    std::ifstream in(dir / "manifest.json");
    const nlohmann::json manifest = nlohmann::json::parse(in);
    CHECK(manifest["degree"] == degree);
    CHECK(manifest["solver"] == "direct");
    CHECK(manifest["provenance"] == "global");
    CHECK(manifest["kernel_backend"] == "scalar");
    CHECK(manifest["fields"].size() == set.boundary_fields.size() + set.interior_fields.size());
    CHECK(fs::exists(dir / "fine.json"));
  }
}

TEST_CASE("corrupt coordinate sets are rejected") {
  auto pair = std::make_shared<const DesignPair>(shared(builtin_design_mesh("square")), 1);
  auto space = std::make_shared<const FeSpace>(pair->fine_ptr(), 1);
  const GbcSet set = GbcProblem(pair, space).compute_all();

  auto fresh = [&](const std::string& name) {
    const fs::path dir = scratch(name);
    save_gbc_set(dir, set);
    return dir;
  };
  CHECK_NOTHROW(load_gbc_set(fresh("ok")));

  fs::path dir = fresh("short");
  write(dir / "S_0.txt", "0.5\n");
  CHECK_THROWS_AS(load_gbc_set(dir), Error);

  dir = fresh("garbage");
  std::string text;
  for (int d = 0; d < space->dof_count(); ++d) text += "x1\n";
  write(dir / "S_0.txt", text);
  CHECK_THROWS_AS(load_gbc_set(dir), Error);

  dir = fresh("manifest");
  write(dir / "manifest.json", R"({"degree": 1})");
  CHECK_THROWS_AS(load_gbc_set(dir), Error);

  dir = fresh("kind");
  std::ifstream in(dir / "manifest.json");
  nlohmann::json manifest = nlohmann::json::parse(in);
  in.close();
  manifest["fields"][0]["kind"] = "interior";
  write(dir / "manifest.json", manifest.dump());
  CHECK_THROWS_AS(load_gbc_set(dir), Error);

  dir = fresh("missing");
  fs::remove(dir / "coarse.json");
  CHECK_THROWS_AS(load_gbc_set(dir), Error);
}
