#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgbc/builtin.hpp"
#include "hgbc/error.hpp"
#include "hgbc/gbc.hpp"
#include "hgbc/io.hpp"
#include "hgbc/kernels.hpp"
#include "hgbc/locality.hpp"
#include "hgbc/parallel.hpp"
#include "hgbc/poisson.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hgbc;

namespace {

constexpr unsigned kSeed = 20240611;

struct RunConfig {
  std::string polygon = "convex-quad";
  std::string polygon_file;
  int design_levels = -1;  // -1: built-in default, 0 for files
  int degree = 1;
  int refine = 1;
  int levels = 1;
  std::vector<int> rings{2, 3, 4, 5, 6};
  int grid = 101;
  double tol = 1e-10;
  std::string solver = "direct";
  std::string out = "out";
  int workers = 1;
  bool paper_mode = false;
  std::optional<int> center;
  int ring_level = -1;
};

// Collects named invariant checks; the process exit code is 1 if any fails.
class Checks {
public:
  void expect(bool ok, const std::string& invariant) {
    if (!ok) {
      failures_.push_back(invariant);
      std::cout << "INVARIANT FAILED: " << invariant << "\n";
    }
  }
  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

private:
  std::vector<std::string> failures_;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions s;
  s.kind = c.solver == "cg" ? SolverKind::ConjugateGradient : SolverKind::Direct;
  s.tolerance = c.tol;
  return s;
}

std::shared_ptr<const Triangulation> load_design(const RunConfig& c) {
  if (!c.polygon_file.empty()) {
    auto geometry = read_geometry(c.polygon_file);
    if (auto* mesh = std::get_if<Triangulation>(&geometry)) {
      Triangulation m = *mesh;
      for (int l = 0; l < std::max(0, c.design_levels); ++l) m = refine_uniform(m);
      return std::make_shared<const Triangulation>(std::move(m));
    }
    return std::make_shared<const Triangulation>(
        design_mesh(std::get<Polygon>(geometry), std::max(0, c.design_levels)));
  }
  const int levels = c.design_levels >= 0 ? c.design_levels : builtin_design_levels(c.polygon);
  return std::make_shared<const Triangulation>(design_mesh(builtin_polygon(c.polygon), levels));
}

json config_json(const RunConfig& c, const std::string& command) {
  json j;
  j["command"] = command;
  j["polygon"] = c.polygon_file.empty() ? c.polygon : c.polygon_file;
  j["design_levels"] = c.design_levels;
  j["degree"] = c.degree;
  j["refine"] = c.refine;
  j["levels"] = c.levels;
  j["rings"] = c.rings;
  j["grid"] = c.grid;
  j["tolerance"] = c.tol;
  j["solver"] = c.solver;
  j["workers"] = c.workers;
  j["paper_mode"] = c.paper_mode;
  j["seed"] = kSeed;
  j["kernel_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
  j["quadrature_stiffness"] = stiffness_rule_name(c.degree);
  j["quadrature_mass"] = mass_rule_name(c.degree);
  return j;
}

void write_manifest(const fs::path& dir, json manifest, const Checks& checks) {
  manifest["invariants_passed"] = checks.passed();
  manifest["failed_invariants"] = checks.failures();
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
}

std::string mesh_stats(const std::string& label, const Triangulation& m) {
  std::ostringstream os;
  os << label << ": vertices=" << m.vertex_count() << " triangles=" << m.triangle_count()
     << " boundary_vertices=" << m.boundary_vertices().size() << " beta=" << fmt(quasi_uniformity(m), 8)
     << " h=" << fmt(m.mesh_size(), 8);
  return os.str();
}

bool is_rectangle(const Triangulation& coarse) {
  if (coarse.vertex_count() != 4 || !coarse.interior_vertices().empty()) return false;
  const std::vector<int> loop = coarse.boundary_loop();
  for (int k = 0; k < 4; ++k) {
    const Point a = coarse.vertex(loop[k]), b = coarse.vertex(loop[(k + 1) % 4]), c = coarse.vertex(loop[(k + 2) % 4]);
    if (std::abs(dot(b - a, c - b)) > 1e-12 * norm(b - a) * norm(c - b)) return false;
  }
  return true;
}

// ------------------------------------------------------------------ mesh

int cmd_mesh(const RunConfig& c) {
  Checks checks;
  const fs::path out(c.out);
  fs::create_directories(out);
  auto design = load_design(c);
  const DesignPair pair(design, c.refine);
  write_mesh(out / "coarse.json", pair.coarse());
  write_mesh(out / "fine.json", pair.fine());
  const std::string coarse_line = mesh_stats("design", pair.coarse());
  const std::string fine_line = mesh_stats("fine", pair.fine());
  std::cout << coarse_line << "\n" << fine_line << "\n";

  const double relative = std::abs(pair.fine().area() - pair.coarse().area()) / pair.coarse().area();
  checks.expect(relative <= 1e-10, "refined area equals design area within 1e-10 relative");

  json manifest = config_json(c, "mesh");
  manifest["design"] = {{"vertices", pair.coarse().vertex_count()},
                        {"triangles", pair.coarse().triangle_count()},
                        {"beta", quasi_uniformity(pair.coarse())},
                        {"mesh_size", pair.coarse().mesh_size()}};
  manifest["fine"] = {{"vertices", pair.fine().vertex_count()},
                      {"triangles", pair.fine().triangle_count()},
                      {"beta", quasi_uniformity(pair.fine())},
                      {"mesh_size", pair.fine().mesh_size()}};
  write_manifest(out, manifest, checks);
  return checks.passed() ? 0 : 1;
}

// ------------------------------------------------------------------- gbc

int cmd_gbc(const RunConfig& c) {
  Checks checks;
  const fs::path out(c.out);
  fs::create_directories(out);
  auto pair = std::make_shared<const DesignPair>(load_design(c), c.refine);
  auto space = std::make_shared<const FeSpace>(pair->fine_ptr(), c.degree);
  std::cout << mesh_stats("design", pair->coarse()) << "\n" << mesh_stats("fine", pair->fine()) << "\n";

  const auto t0 = std::chrono::steady_clock::now();
  const GbcProblem problem(pair, space, solver_options(c), c.workers);
  const double setup_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  GbcSet set;
  set.pair = pair;
  set.space = space;
  set.solver = solver_options(c);
  set.boundary_vertices = pair->coarse().boundary_vertices();
  set.interior_vertices = pair->coarse().interior_vertices();
  const int nb = static_cast<int>(set.boundary_vertices.size());
  const int ni = static_cast<int>(set.interior_vertices.size());
  std::vector<std::optional<FeField>> fields(nb + ni);
  std::vector<double> seconds(nb + ni);
  parallel_for(nb + ni, c.workers, [&](int i) {
    const auto start = std::chrono::steady_clock::now();
    fields[i] = i < nb ? problem.solve_boundary(set.boundary_vertices[i])
                       : problem.solve_interior(set.interior_vertices[i - nb]);
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  for (int i = 0; i < nb; ++i) set.boundary_fields.push_back(std::move(*fields[i]));
  for (int i = 0; i < ni; ++i) set.interior_fields.push_back(std::move(*fields[nb + i]));

  {
    std::ofstream timing(out / "timings.csv");
    timing << "kind,vertex,seconds\n";
    for (int i = 0; i < nb + ni; ++i) {
      timing << (i < nb ? "boundary," : "interior,") << (i < nb ? set.boundary_vertices[i] : set.interior_vertices[i - nb])
             << ',' << fmt(seconds[i], 6) << '\n';
    }
  }
  double total = 0.0;
  for (double s : seconds) total += s;
  std::cout << "fields: boundary=" << nb << " interior=" << ni << " setup_seconds=" << fmt(setup_seconds, 4)
            << " solve_seconds_total=" << fmt(total, 4) << " mean_per_field=" << fmt(total / std::max(1, nb + ni), 4)
            << "\n";

  const std::vector<Point> samples = grid_points_in_domain(pair->fine(), c.grid);
  const IdentityReport report = verify_gbc_identities(set, samples);
  std::cout << "samples=" << report.samples << " partition_of_unity=" << fmt(report.partition_of_unity, 3)
            << " linear_precision=" << fmt(report.linear_precision, 3) << " min_value=" << fmt(report.min_value, 6)
            << " interior_residual=" << fmt(report.interior_residual, 3)
            << " interior_residual_relative=" << fmt(report.interior_residual_relative, 3) << "\n";
  checks.expect(report.partition_of_unity <= 1e-9, "partition of unity residual <= 1e-9");
  checks.expect(report.linear_precision <= 1e-8, "linear precision residual <= 1e-8");
  checks.expect(report.interior_residual_relative <= 1e-8, "interior weak residual <= 1e-8 relative");

  const fs::path set_dir = out / "gbc_set";
  RunInfo info{"gbc", stiffness_rule_name(c.degree), mass_rule_name(c.degree),
               std::string(kernels::backend_name(kernels::active_backend()))};
  save_gbc_set(set_dir, set, info);
  const GbcSet reloaded = load_gbc_set(set_dir);
  const IdentityReport again = verify_gbc_identities(reloaded, samples);
  const bool identical = again.partition_of_unity == report.partition_of_unity &&
                         again.linear_precision == report.linear_precision &&
                         again.min_value == report.min_value && again.interior_residual == report.interior_residual;
  bool evaluations_identical = true;
  for (int i = 0; i < nb && evaluations_identical; ++i) {
    evaluations_identical = reloaded.boundary_fields[i].coefficients() == set.boundary_fields[i].coefficients();
  }
  for (int j = 0; j < ni && evaluations_identical; ++j) {
    evaluations_identical = reloaded.interior_fields[j].coefficients() == set.interior_fields[j].coefficients();
  }
  std::cout << "reload: residuals_identical=" << (identical ? "yes" : "no")
            << " coefficients_identical=" << (evaluations_identical ? "yes" : "no") << "\n";
  checks.expect(identical, "reload reproduces identity residuals bit-identically");
  checks.expect(evaluations_identical, "reload reproduces coefficients bit-identically");

  json manifest = config_json(c, "gbc");
  manifest["identities"] = {{"samples", report.samples},
                            {"partition_of_unity", report.partition_of_unity},
                            {"linear_precision", report.linear_precision},
                            {"min_value", report.min_value},
                            {"interior_residual", report.interior_residual},
                            {"interior_residual_relative", report.interior_residual_relative}};
  manifest["setup_seconds"] = setup_seconds;
  manifest["solve_seconds_total"] = total;
  write_manifest(out, manifest, checks);
  return checks.passed() ? 0 : 1;
}

// -------------------------------------------------------------- locality

int nearest(const Triangulation& mesh, const std::vector<int>& candidates, Point target) {
  int best = candidates.front();
  for (int v : candidates) {
    if (norm(mesh.vertex(v) - target) < norm(mesh.vertex(best) - target)) best = v;
  }
  return best;
}

void locality_study(const RunConfig& c, const GbcProblem& problem, FieldId id, const fs::path& out, Checks& checks,
                    json& summary) {
  const DesignPair& pair = problem.pair();
  const std::string tag = std::string(id.kind == FieldKind::Boundary ? "boundary" : "interior") + "_" +
                          std::to_string(id.vertex);
  const FeField global = id.kind == FieldKind::Boundary ? problem.solve_boundary(id.vertex)
                                                        : problem.solve_interior(id.vertex);

  const bool rectangle = is_rectangle(pair.coarse());
  int ring_level = c.ring_level;
  if (ring_level < 0) ring_level = pair.coarse().interior_vertices().empty() ? pair.levels() : 0;
  const DecayReport decay = measure_decay(pair, global, id, ring_level);
  std::ofstream(out / ("decay_" + tag + ".csv")) << [&] {
    std::ostringstream os;
    write_decay_csv(os, decay);
    return os.str();
  }();
  std::ofstream(out / ("surface_" + tag + ".csv")) << [&] {
    std::ostringstream os;
    write_surface_csv(os, global, c.grid);
    return os.str();
  }();

  std::cout << tag << " at (" << fmt(pair.coarse().vertex(id.vertex).x) << ", " << fmt(pair.coarse().vertex(id.vertex).y)
            << "): ring_level=" << ring_level << " rings=" << decay.ring_maxima.size();
  if (decay.sigma) std::cout << " sigma=" << fmt(*decay.sigma, 4) << " K=" << fmt(*decay.k_fit, 4);
  std::cout << " linear_r2=" << fmt(decay.linear_r2, 4) << " log_r2=" << fmt(decay.log_r2, 4)
            << " sub_exponential=" << (decay.sub_exponential ? "yes" : "no") << "\n";
  if (decay.ratio_above_one) std::cout << tag << ": some consecutive ring ratio exceeds 1\n";

  std::vector<double> sequence;
  for (const auto& [k, a] : decay.ring_maxima) sequence.push_back(a);
  const double c_obs = deboor_constant(sequence);
  if (c_obs > 0.0 && c_obs < 1.0) {
    const DeBoorResult db = deboor_check(sequence, c_obs);
    std::cout << tag << ": de Boor c=" << fmt(c_obs, 4) << " lambda=" << fmt(db.lambda, 4)
              << " condition=" << (db.condition_holds ? "pass" : "fail") << " bound=" << (db.bound_holds ? "pass" : "fail")
              << "\n";
    checks.expect(db.condition_holds && db.bound_holds, tag + ": de Boor check passes with the observed constant");
  }
  if (rectangle) {
    if (!decay.sigma) std::cout << tag << ": fewer than 3 rings above 1e-12; increase --refine\n";
    checks.expect(decay.sub_exponential, tag + ": rectangle decay is flagged sub-exponential");
  }

  const std::vector<int> ring_of = triangle_rings_from_vertex(pair.coarse(), id.vertex);
  const int saturation = *std::max_element(ring_of.begin(), ring_of.end());
  std::vector<int> rings;
  for (int k : c.rings) {
    if (k >= 1 && k < saturation) rings.push_back(k);
  }
  rings.push_back(saturation);
  std::sort(rings.begin(), rings.end());
  rings.erase(std::unique(rings.begin(), rings.end()), rings.end());

  const LocalityTable table = local_vs_global_table(problem, id.vertex, rings, c.grid, c.workers);
  std::ofstream(out / ("locality_" + tag + ".csv")) << [&] {
    std::ostringstream os;
    write_locality_csv(os, table);
    return os.str();
  }();
  std::cout << "ring,max_error,rate\n";
  for (const auto& row : table.rows) {
    std::cout << row.ring << ',' << fmt(row.max_error, 6) << ',' << (row.rate ? fmt(*row.rate, 4) : "") << "\n";
  }
  bool monotone = true;
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    if (table.rows[r].max_error > table.rows[r - 1].max_error * (1.0 + 1e-12) + 1e-14) monotone = false;
  }
  checks.expect(monotone, tag + ": local-vs-global error is non-increasing in the ring");
  checks.expect(table.rows.back().max_error <= 1e-10, tag + ": saturation ring error <= 1e-10");
  const auto mean = table.mean_rate(3, 6);
  if (mean) std::cout << tag << ": mean rate over rings 3-6 = " << fmt(*mean, 4) << "\n";

  json entry = {{"vertex", id.vertex},
                {"kind", id.kind == FieldKind::Boundary ? "boundary" : "interior"},
                {"ring_level", ring_level},
                {"saturation_ring", saturation},
                {"sub_exponential", decay.sub_exponential},
                {"linear_r2", decay.linear_r2},
                {"log_r2", decay.log_r2}};
  if (decay.sigma) entry["sigma"] = *decay.sigma;
  if (mean) entry["mean_rate_3_6"] = *mean;
  summary.push_back(entry);
}

int cmd_locality(const RunConfig& c) {
  Checks checks;
  const fs::path out(c.out);
  fs::create_directories(out);
  auto pair = std::make_shared<const DesignPair>(load_design(c), c.refine);
  auto space = std::make_shared<const FeSpace>(pair->fine_ptr(), c.degree);
  std::cout << mesh_stats("design", pair->coarse()) << "\n" << mesh_stats("fine", pair->fine()) << "\n";
  const GbcProblem problem(pair, space, solver_options(c), c.workers);
  const Triangulation& coarse = pair->coarse();

  std::vector<FieldId> ids;
  if (c.center) {
    if (*c.center < 0 || *c.center >= static_cast<int>(coarse.vertex_count())) {
      throw std::invalid_argument("center vertex " + std::to_string(*c.center) + " is out of range");
    }
    ids.push_back({coarse.is_boundary_vertex(*c.center) ? FieldKind::Boundary : FieldKind::Interior, *c.center});
  } else {
    ids.push_back({FieldKind::Boundary, nearest(coarse, coarse.boundary_vertices(),
                                                midpoint(coarse.vertex(0), coarse.vertex(1)))});
    const std::vector<int> interior = coarse.interior_vertices();
    if (!interior.empty()) {
      Point centre{0.0, 0.0};
      for (const Point& p : coarse.vertices()) centre = centre + p;
      centre = (1.0 / static_cast<double>(coarse.vertex_count())) * centre;
      ids.push_back({FieldKind::Interior, nearest(coarse, interior, centre)});
    }
  }

  json summary = json::array();
  for (const FieldId& id : ids) locality_study(c, problem, id, out, checks, summary);
  json manifest = config_json(c, "locality");
  manifest["fields"] = summary;
  write_manifest(out, manifest, checks);
  return checks.passed() ? 0 : 1;
}

// --------------------------------------------------------------- poisson

int cmd_poisson(const RunConfig& c) {
  Checks checks;
  const fs::path out(c.out);
  fs::create_directories(out);
  auto design = load_design(c);

  BenchmarkConfig bench;
  bench.refinements = c.levels;
  bench.fine_levels = c.refine;
  bench.degree = c.degree;
  bench.grid = c.grid;
  bench.workers = c.workers;
  bench.solver = solver_options(c);
  const std::vector<PoissonReport> reports = run_benchmark(*design, bench);
  {
    std::ofstream csv(out / "benchmark.csv");
    write_benchmark_csv(csv, reports);
  }
  {
    std::ofstream csv(out / "convergence.csv");
    write_convergence_csv(csv, reports);
  }
  write_convergence_csv(std::cout, reports);

  // Exact-oracle checks on the unrefined design pair.
  auto pair = std::make_shared<const DesignPair>(design, c.refine);
  auto space = std::make_shared<const FeSpace>(pair->fine_ptr(), c.degree);
  const GbcProblem problem(pair, space, solver_options(c), c.workers);
  const GbcSet set = problem.compute_all(c.workers);

  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> f(set.interior_vertices.size()), g(set.boundary_vertices.size());
  for (double& v : f) v = uniform(rng);
  for (double& v : g) v = uniform(rng);
  const double residual = superposition_equivalence_check(set, problem, f, g);
  std::cout << "superposition_equivalence_residual=" << fmt(residual, 3) << " (seed " << kSeed << ")\n";
  checks.expect(residual <= 1e-9, "superposition equivalence residual <= 1e-9");

  const std::uint64_t before = solve_count();
  double boundary_error = 0.0;
  for (int id : bench.cases) {
    const PoissonProblem p = manufactured_case(id);
    const FeField lu = solve_by_superposition(set, p);
    for (int v : set.boundary_vertices) {
      // Design vertices keep their index in the refined mesh.
      const double value = lu.coefficients()[space->vertex_dof(v)];
      boundary_error = std::max(boundary_error, std::abs(value - p.g(pair->coarse().vertex(v))));
    }
  }
  const std::uint64_t solves = solve_count() - before;
  std::cout << "superposition_linear_solves=" << solves << " boundary_exactness=" << fmt(boundary_error, 3) << "\n";
  checks.expect(solves == 0, "superposition performs no linear solve");
  checks.expect(boundary_error <= 1e-9, "superposition matches g at design boundary vertices to 1e-9");

  json manifest = config_json(c, "poisson");
  manifest["interior_sign"] = kInteriorSign;
  manifest["fem_reference_mesh"] = "design";
  manifest["superposition_equivalence_residual"] = residual;
  manifest["rows"] = reports.size();
  write_manifest(out, manifest, checks);
  return checks.passed() ? 0 : 1;
}

void add_common(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--polygon", c.polygon, "built-in polygon: square, convex-quad, nonconvex-quad, lshape");
  cmd->add_option("--polygon-file", c.polygon_file, "JSON polygon or mesh file (overrides --polygon)");
  cmd->add_option("--design-levels", c.design_levels, "refinements turning the polygon into the design mesh");
  cmd->add_option("--degree", c.degree, "element degree (1..3)")->check(CLI::Range(1, 3));
  cmd->add_option("--refine", c.refine, "refinements from the design mesh to the computation mesh")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--grid", c.grid, "sampling grid resolution per axis")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c.tol, "relative residual for the iterative solver")->check(CLI::PositiveNumber);
  cmd->add_option("--solver", c.solver, "direct or cg")->check(CLI::IsMember({"direct", "cg"}));
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--paper-mode", c.paper_mode, "1000x1000 grid and two design refinements");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic generalized barycentric coordinates toolkit"};
  app.require_subcommand(1);
  RunConfig config;

  auto* mesh = app.add_subcommand("mesh", "generate the design pair and print mesh statistics");
  add_common(mesh, config);
  auto* gbc = app.add_subcommand("gbc", "compute, verify and persist all coordinate functions");
  add_common(gbc, config);
  auto* locality = app.add_subcommand("locality", "decay and local-vs-global studies");
  add_common(locality, config);
  locality->add_option("--rings", config.rings, "rings for the local solves, e.g. 2,3,4,5,6")->delimiter(',');
  locality->add_option("--center", config.center, "design vertex to study (default: one boundary, one interior)");
  locality->add_option("--ring-level", config.ring_level,
                       "refinement level of the ring mesh for decay (default: 0, or the fine level "
                       "when the design mesh has no interior vertex)");
  auto* poisson = app.add_subcommand("poisson", "Poisson benchmark for the five manufactured cases");
  add_common(poisson, config);
  poisson->add_option("--levels", config.levels, "design refinements for the convergence study")
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);
  if (config.paper_mode) {
    config.grid = 1000;
    config.levels = 2;
  }

  try {
    if (*mesh) return cmd_mesh(config);
    if (*gbc) return cmd_gbc(config);
    if (*locality) return cmd_locality(config);
    if (*poisson) return cmd_poisson(config);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (residual " << e.residual() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
