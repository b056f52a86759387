#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "hgbc/builtin.hpp"
#include "hgbc/poisson.hpp"

using namespace hgbc;
using namespace hgbc::testing;

namespace {

struct Setup {
  std::shared_ptr<const DesignPair> pair;
  std::shared_ptr<const FeSpace> space;
  std::unique_ptr<GbcProblem> problem;
  GbcSet set;
};

Setup make(Triangulation coarse, int levels, int degree = 1) {
  Setup s;
  s.pair = std::make_shared<const DesignPair>(shared(std::move(coarse)), levels);
  s.space = std::make_shared<const FeSpace>(s.pair->fine_ptr(), degree);
  s.problem = std::make_unique<GbcProblem>(s.pair, s.space);
  s.set = s.problem->compute_all(4);
  return s;
}

PoissonProblem harmonic(std::function<double(Point)> u) {
  PoissonProblem p;
  p.f = [](Point) { return 0.0; };
  p.g = u;
  p.exact = u;
  return p;
}

const PoissonReport& find(const std::vector<PoissonReport>& reports, int id, const std::string& method, int level) {
  for (const auto& r : reports) {
    if (r.case_id == id && r.method == method && r.refinement == level) return r;
  }
  throw std::runtime_error("missing report");
}

}  // namespace

TEST_CASE("manufactured cases satisfy the equation") {
  const double h = 1e-4;
  for (int id = 1; id <= 5; ++id) {
    const PoissonProblem p = manufactured_case(id);
    for (Point q : {Point{0.3, 0.7}, Point{1.2, 0.4}, Point{0.9, 1.6}}) {
      const double lap = (p.exact({q.x + h, q.y}) + p.exact({q.x - h, q.y}) + p.exact({q.x, q.y + h}) +
                          p.exact({q.x, q.y - h}) - 4.0 * p.exact(q)) /
                         (h * h);
      CHECK(-lap == doctest::Approx(p.f(q)).epsilon(1e-5));
      const Point g = p.exact_gradient(q);
      CHECK(g.x == doctest::Approx((p.exact({q.x + h, q.y}) - p.exact({q.x - h, q.y})) / (2 * h)).epsilon(1e-7));
      CHECK(g.y == doctest::Approx((p.exact({q.x, q.y + h}) - p.exact({q.x, q.y - h})) / (2 * h)).epsilon(1e-7));
      CHECK(p.g(q) == p.exact(q));
    }
  }
  CHECK_THROWS_AS(manufactured_case(6), std::invalid_argument);
}

TEST_CASE("superposition reproduces constants and linear functions") {
  for (int degree : {1, 2}) {
    const Setup s = make(builtin_design_mesh("nonconvex-quad"), 1, degree);
    const FeField one = solve_by_superposition(s.set, harmonic([](Point) { return 1.0; }));
    for (double c : one.coefficients()) CHECK(std::abs(c - 1.0) <= 1e-9);
    auto linear = [](Point q) { return 2.0 * q.x - 3.0 * q.y + 0.5; };
    const FeField l = solve_by_superposition(s.set, harmonic(linear));
    CHECK(max_grid_error(l, linear, 41) <= 1e-9);
  }
}

TEST_CASE("superposition rejects mismatched samples") {
  const Setup s = make(builtin_design_mesh("lshape"), 1);
  const std::vector<double> f(s.set.interior_vertices.size()), g(s.set.boundary_vertices.size() - 1);
  CHECK_THROWS_AS(superpose(s.set, f, g), std::invalid_argument);
}

TEST_CASE("superposition does not solve") {
  const Setup s = make(builtin_design_mesh("convex-quad"), 1);
  const std::uint64_t before = solve_count();
  for (int id = 1; id <= 5; ++id) solve_by_superposition(s.set, manufactured_case(id));
  CHECK(solve_count() == before);
}

TEST_CASE("boundary exactness") {
  const Setup s = make(builtin_design_mesh("convex-quad"), 1, 2);
  for (int id = 1; id <= 5; ++id) {
    const PoissonProblem p = manufactured_case(id);
    const FeField u = solve_by_superposition(s.set, p);
    for (int v : s.set.boundary_vertices) {
      const Point q = s.pair->coarse().vertex(v);
      CHECK(std::abs(*u.eval(q) - p.g(q)) <= 1e-9);
    }
  }
}

TEST_CASE("superposition equivalence with random samples") {
  std::mt19937_64 rng(20240611);
  for (const char* name : {"square", "convex-quad", "lshape"}) {
    const Setup s = make(builtin_design_mesh(name), 1);
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> f = random_vector(s.set.interior_vertices.size(), rng, -5.0, 5.0);
      std::vector<double> g = random_vector(s.set.boundary_vertices.size(), rng, -5.0, 5.0);
      CHECK(superposition_equivalence_check(s.set, *s.problem, f, g) <= 1e-9);
      std::fill(g.begin(), g.end(), 0.0);
      CHECK(superposition_equivalence_check(s.set, *s.problem, f, g) <= 1e-9);
    }
  }
}

TEST_CASE("load that is already a hat interpolant matches the direct solve") {
  const Setup s = make(builtin_design_mesh("convex-quad"), 1);
  std::vector<double> hf(s.space->dof_count(), 0.0);
  for (int v : s.set.interior_vertices) {
    const std::vector<double> hat = coarse_hat_coefficients(*s.pair, *s.space, v);
    for (int d = 0; d < s.space->dof_count(); ++d) hf[d] += s.pair->coarse().vertex(v).x * hat[d];
  }
  const FeField interpolant(s.space, hf);
  PoissonProblem p;
  p.f = [&](Point q) { return *interpolant.eval(q); };
  p.g = [](Point q) { return q.y; };
  const FeField a = solve_by_superposition(s.set, p);
  const FeField b = solve_direct_fem(*s.problem, p);
  for (int d = 0; d < s.space->dof_count(); ++d) CHECK(std::abs(a.coefficients()[d] - b.coefficients()[d]) <= 1e-10);
}

TEST_CASE("direct FEM agrees with the dense oracle") {
  const auto space = std::make_shared<const FeSpace>(shared(diagonal_grid(2)), 1);
  PoissonProblem p;
  p.f = [](Point q) { return 1.0 + q.x * q.y; };
  p.g = [](Point q) { return q.x - q.y * q.y; };
  const FeField u = solve_direct_fem(space, p);
  const SparseMatrix k = assemble_stiffness(*space);
  const std::vector<double> load = assemble_mass(*space).multiply(interpolate(*space, p.f));
  std::vector<char> free(space->dof_count());
  for (int d = 0; d < space->dof_count(); ++d) free[d] = !space->is_boundary_dof(d);
  const std::vector<double> oracle = dense_dirichlet(k, load, free, interpolate(*space, p.g));
  REQUIRE(space->dof_count() <= 10);
  for (int d = 0; d < space->dof_count(); ++d) CHECK(std::abs(u.coefficients()[d] - oracle[d]) <= 1e-10);
}

TEST_CASE("direct FEM reproduces linear data and converges quadratically") {
  Triangulation mesh = builtin_design_mesh("convex-quad");
  auto linear = [](Point q) { return 1.0 - q.x + 4.0 * q.y; };
  const FeField l = solve_direct_fem(std::make_shared<const FeSpace>(shared(mesh), 1), harmonic(linear));
  CHECK(max_grid_error(l, linear, 41) <= 1e-10);

  PoissonProblem p;
  p.exact = [](Point q) { return q.x * q.x + q.y * q.y; };
  p.g = p.exact;
  p.f = [](Point) { return -4.0; };
  std::vector<double> errors;
  for (int level = 0; level < 3; ++level) {
    errors.push_back(max_grid_error(solve_direct_fem(std::make_shared<const FeSpace>(shared(mesh), 1), p), p.exact, 101));
    mesh = refine_uniform(mesh);
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    INFO(errors[i - 1] << " -> " << errors[i]);
    CHECK(errors[i - 1] / errors[i] >= 3.0);
    CHECK(errors[i - 1] / errors[i] <= 5.0);
  }
}

TEST_CASE("zero data gives zero errors") {
  const Setup s = make(builtin_design_mesh("lshape"), 1);
  const PoissonProblem p = harmonic([](Point) { return 0.0; });
  CHECK(max_grid_error(solve_by_superposition(s.set, p), p.exact, 51) == 0.0);
  CHECK(max_grid_error(solve_direct_fem(*s.problem, p), p.exact, 51) == 0.0);
}

TEST_CASE("benchmark on the convex quadrilateral") {
  BenchmarkConfig config;
  config.cases = {1, 4, 5};
  config.refinements = 2;
  config.workers = 4;
  const std::vector<PoissonReport> reports = run_benchmark(builtin_design_mesh("convex-quad"), config);
  CHECK(reports.size() == 3 * 3 * 2);
  for (int id : config.cases) {
    INFO("case " << id);
    for (int level = 0; level <= 2; ++level) {
      const PoissonReport& gbc = find(reports, id, "gbc-superposition", level);
      const PoissonReport& fem = find(reports, id, "direct-fem", level);
      CHECK(gbc.grid == 101);
      CHECK(gbc.samples > 5000);
      const double parity = gbc.max_error / fem.max_error;
      CHECK(parity >= 0.3);
      CHECK(parity <= 3.0);
      if (level == 0) continue;
      const PoissonReport& previous = find(reports, id, "gbc-superposition", level - 1);
      CHECK(previous.max_error / gbc.max_error >= 3.0);
      CHECK(previous.max_error / gbc.max_error <= 5.0);
      CHECK(previous.energy_error / gbc.energy_error >= 1.8);
      CHECK(previous.energy_error / gbc.energy_error <= 2.5);
    }
  }
  // Harmonic case reference error 0.0175, order of magnitude only.
  const double harmonic_error = find(reports, 4, "gbc-superposition", 0).max_error;
  CHECK(harmonic_error > 0.0175 / 10);
  CHECK(harmonic_error < 0.0175 * 10);

  config.workers = 1;
  const std::vector<PoissonReport> serial = run_benchmark(builtin_design_mesh("convex-quad"), config);
  for (std::size_t i = 0; i < reports.size(); ++i) CHECK(serial[i].max_error == reports[i].max_error);
}

TEST_CASE("benchmark anchors on other polygons") {
  BenchmarkConfig config;
  config.cases = {1};
  config.refinements = 0;
  const auto nonconvex = run_benchmark(builtin_design_mesh("nonconvex-quad"), config);
  const double ratio = find(nonconvex, 1, "gbc-superposition", 0).max_error / find(nonconvex, 1, "direct-fem", 0).max_error;
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 2.0);

  config.cases = {2};
  config.refinements = 2;
  const auto convex = run_benchmark(builtin_design_mesh("convex-quad"), config);
  for (int level = 1; level <= 2; ++level) {
    const double r = find(convex, 2, "gbc-superposition", level - 1).max_error /
                     find(convex, 2, "gbc-superposition", level).max_error;
    CHECK(r >= 3.0);
    CHECK(r <= 5.0);
  }
}

TEST_CASE("benchmark csv") {
  PoissonReport a;
  a.case_id = 1;
  a.method = "gbc-superposition";
  a.max_error = 0.04;
  a.energy_error = 0.2;
  a.grid = 101;
  PoissonReport b = a;
  b.refinement = 1;
  b.max_error = 0.01;
  b.energy_error = 0.1;
  const std::vector<PoissonReport> reports{a, b};
  std::ostringstream bench, conv;
  write_benchmark_csv(bench, reports);
  write_convergence_csv(conv, reports);
  CHECK(bench.str() == "case,method,refinement,max_error,grid\n1,gbc-superposition,0,0.04,101\n1,gbc-superposition,1,0.01,101\n");
  CHECK(conv.str() ==
        "case,method,refinement,max_error,ratio,energy_error,energy_ratio\n"
        "1,gbc-superposition,0,0.04,,0.2,\n1,gbc-superposition,1,0.01,4,0.1,2\n");
}
