#include "hgbc/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hgbc/kernels.hpp"

namespace hgbc {

PoissonProblem manufactured_case(int id) {
  PoissonProblem p;
  switch (id) {
    case 1:
      p.name = "1/(1+x^2+y^2)";
      p.exact = [](Point q) { return 1.0 / (1.0 + q.x * q.x + q.y * q.y); };
      p.exact_gradient = [](Point q) {
        const double s = 1.0 + q.x * q.x + q.y * q.y;
        return Point{-2.0 * q.x / (s * s), -2.0 * q.y / (s * s)};
      };
      p.f = [](Point q) {
        const double r2 = q.x * q.x + q.y * q.y;
        const double s = 1.0 + r2;
        return 4.0 * (1.0 - r2) / (s * s * s);
      };
      break;
    case 2:
      p.name = "x^2+3y^3+4xy";
      p.exact = [](Point q) { return q.x * q.x + 3.0 * q.y * q.y * q.y + 4.0 * q.x * q.y; };
      p.exact_gradient = [](Point q) { return Point{2.0 * q.x + 4.0 * q.y, 9.0 * q.y * q.y + 4.0 * q.x}; };
      p.f = [](Point q) { return -2.0 - 18.0 * q.y; };
      break;
    case 3:
      p.name = "x^4+y^4";
      p.exact = [](Point q) { return std::pow(q.x, 4) + std::pow(q.y, 4); };
      p.exact_gradient = [](Point q) { return Point{4.0 * std::pow(q.x, 3), 4.0 * std::pow(q.y, 3)}; };
      p.f = [](Point q) { return -12.0 * (q.x * q.x + q.y * q.y); };
      break;
    case 4:
      p.name = "sin(x)exp(y)";
      p.exact = [](Point q) { return std::sin(q.x) * std::exp(q.y); };
      p.exact_gradient = [](Point q) {
        return Point{std::cos(q.x) * std::exp(q.y), std::sin(q.x) * std::exp(q.y)};
      };
      p.f = [](Point) { return 0.0; };
      break;
    case 5:
      p.name = "10exp(-x^2-y^2)";
      p.exact = [](Point q) { return 10.0 * std::exp(-(q.x * q.x + q.y * q.y)); };
      p.exact_gradient = [](Point q) {
        const double e = std::exp(-(q.x * q.x + q.y * q.y));
        return Point{-20.0 * q.x * e, -20.0 * q.y * e};
      };
      p.f = [](Point q) {
        const double r2 = q.x * q.x + q.y * q.y;
        return 40.0 * (1.0 - r2) * std::exp(-r2);
      };
      break;
    default:
      throw std::invalid_argument("unknown manufactured case " + std::to_string(id) + " (expected 1..5)");
  }
  p.g = p.exact;
  return p;
}

FeField superpose(const GbcSet& set, std::span<const double> f_samples, std::span<const double> g_samples) {
  if (g_samples.size() != set.boundary_fields.size() || f_samples.size() != set.interior_fields.size()) {
    throw std::invalid_argument("sample count does not match the coordinate set");
  }
  std::vector<double> weights;
  std::vector<const double*> columns;
  weights.reserve(g_samples.size() + f_samples.size());
  for (std::size_t i = 0; i < g_samples.size(); ++i) {
    weights.push_back(g_samples[i]);
    columns.push_back(set.boundary_fields[i].coefficients().data());
  }
  for (std::size_t j = 0; j < f_samples.size(); ++j) {
    weights.push_back(kInteriorSign * f_samples[j]);
    columns.push_back(set.interior_fields[j].coefficients().data());
  }
  std::vector<double> out(set.space->dof_count());
  kernels::combine(weights, columns, out);
  return FeField(set.space, std::move(out));
}

FeField solve_by_superposition(const GbcSet& set, const PoissonProblem& problem) {
  const Triangulation& coarse = set.pair->coarse();
  std::vector<double> g(set.boundary_vertices.size()), f(set.interior_vertices.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = problem.g(coarse.vertex(set.boundary_vertices[i]));
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = problem.f(coarse.vertex(set.interior_vertices[j]));
  return superpose(set, f, g);
}

FeField solve_direct_fem(const GbcProblem& system, const PoissonProblem& problem) {
  const FeSpace& space = system.space();
  const std::vector<double> f_interp = interpolate(space, problem.f);
  const std::vector<double> g_interp = interpolate(space, problem.g);
  const std::vector<double> load = system.mass().multiply(f_interp);
  return FeField(system.space_ptr(), system.solve_with(load, g_interp));
}

FeField solve_direct_fem(std::shared_ptr<const FeSpace> space, const PoissonProblem& problem,
                         SolverOptions solver) {
  const FeSpace& s = *space;
  const SparseMatrix k = assemble_stiffness(s);
  const SparseMatrix m = assemble_mass(s);
  std::vector<char> free(s.dof_count());
  for (int d = 0; d < s.dof_count(); ++d) free[d] = !s.is_boundary_dof(d);
  const DirichletSolver dirichlet(k, std::move(free), solver);
  const std::vector<double> load = m.multiply(interpolate(s, problem.f));
  return FeField(space, dirichlet.solve(load, interpolate(s, problem.g)));
}

double superposition_equivalence_check(const GbcSet& set, const GbcProblem& system,
                                       std::span<const double> f_samples, std::span<const double> g_samples) {
  const FeField combined = superpose(set, f_samples, g_samples);
  const int n = system.space().dof_count();
  std::vector<double> hf(n, 0.0), trace(n, 0.0);
  for (std::size_t j = 0; j < f_samples.size(); ++j) {
    kernels::axpy(f_samples[j], coarse_hat_coefficients(system.pair(), system.space(), set.interior_vertices[j]), hf);
  }
  for (std::size_t i = 0; i < g_samples.size(); ++i) {
    kernels::axpy(g_samples[i], coarse_hat_coefficients(system.pair(), system.space(), set.boundary_vertices[i]), trace);
  }
  const std::vector<double> direct = system.solve_with(system.mass().multiply(hf), trace);
  double worst = 0.0;
  for (int d = 0; d < n; ++d) worst = std::max(worst, std::abs(direct[d] - combined.coefficients()[d]));
  return worst;
}

namespace {

double max_error_at(const FeField& field, const std::function<double(Point)>& exact,
                    const std::vector<Location>& locations, const std::vector<Point>& points) {
  double worst = 0.0;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    worst = std::max(worst, std::abs(field.eval_at(locations[i]) - exact(points[i])));
  }
  return worst;
}

}  // namespace

double max_grid_error(const FeField& field, const std::function<double(Point)>& exact, int grid) {
  const Triangulation& mesh = field.space().mesh();
  const std::vector<Point> points = grid_points_in_domain(mesh, grid);
  std::vector<Location> locations;
  for (const Point& p : points) locations.push_back(*mesh.locate(p));
  return max_error_at(field, exact, locations, points);
}

std::vector<PoissonReport> run_benchmark(const Triangulation& design, const BenchmarkConfig& config) {
  std::vector<PoissonReport> reports;
  auto coarse = std::make_shared<const Triangulation>(design);
  for (int level = 0; level <= config.refinements; ++level) {
    if (level > 0) coarse = std::make_shared<const Triangulation>(refine_uniform(*coarse));
    auto pair = std::make_shared<const DesignPair>(coarse, config.fine_levels);
    auto space = std::make_shared<const FeSpace>(pair->fine_ptr(), config.degree);
    const GbcProblem system(pair, space, config.solver, config.workers);
    const GbcSet set = system.compute_all(config.workers);
    auto design_space = std::make_shared<const FeSpace>(coarse, config.degree);

    const std::vector<Point> points = grid_points_in_domain(pair->fine(), config.grid);
    std::vector<Location> fine_locations, design_locations;
    fine_locations.reserve(points.size());
    design_locations.reserve(points.size());
    for (const Point& p : points) {
      fine_locations.push_back(*pair->fine().locate(p));
      design_locations.push_back(*coarse->locate(p));
    }

    for (int id : config.cases) {
      const PoissonProblem problem = manufactured_case(id);
      const FeField gbc = solve_by_superposition(set, problem);
      const FeField fem = solve_direct_fem(design_space, problem, config.solver);
      struct Run {
        const char* method;
        const FeField* field;
        const std::vector<Location>* locations;
      };
      for (const Run& run : {Run{"gbc-superposition", &gbc, &fine_locations},
                             Run{"direct-fem", &fem, &design_locations}}) {
        PoissonReport r;
        r.case_id = id;
        r.method = run.method;
        r.refinement = level;
        r.grid = config.grid;
        r.samples = points.size();
        r.max_error = max_error_at(*run.field, problem.exact, *run.locations, points);
        r.energy_error = energy_error(*run.field, problem.exact_gradient);
        r.coarse_vertices = pair->coarse().vertex_count();
        r.fine_vertices = pair->fine().vertex_count();
        r.fine_mesh_size = pair->fine().mesh_size();
        reports.push_back(std::move(r));
      }
    }
  }
  return reports;
}

void write_benchmark_csv(std::ostream& os, std::span<const PoissonReport> reports) {
  const auto precision = os.precision(10);
  os << "case,method,refinement,max_error,grid\n";
  for (const auto& r : reports) {
    os << r.case_id << ',' << r.method << ',' << r.refinement << ',' << r.max_error << ',' << r.grid << '\n';
  }
  os.precision(precision);
}

void write_convergence_csv(std::ostream& os, std::span<const PoissonReport> reports) {
  const auto precision = os.precision(10);
  os << "case,method,refinement,max_error,ratio,energy_error,energy_ratio\n";
  for (const auto& r : reports) {
    os << r.case_id << ',' << r.method << ',' << r.refinement << ',' << r.max_error << ',';
    const PoissonReport* previous = nullptr;
    for (const auto& q : reports) {
      if (q.case_id == r.case_id && q.method == r.method && q.refinement == r.refinement - 1) previous = &q;
    }
    if (previous && r.max_error > 0.0) os << previous->max_error / r.max_error;
    os << ',' << r.energy_error << ',';
    if (previous && r.energy_error > 0.0) os << previous->energy_error / r.energy_error;
    os << '\n';
  }
  os.precision(precision);
}

}  // namespace hgbc
