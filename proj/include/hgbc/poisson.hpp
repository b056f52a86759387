#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hgbc/gbc.hpp"

namespace hgbc {

// -Laplace(u) = f in the domain, u = g on its boundary.
struct PoissonProblem {
  std::string name;
  std::function<double(Point)> f;
  std::function<double(Point)> g;
  std::function<double(Point)> exact;            // optional
  std::function<Point(Point)> exact_gradient;    // optional
};

// Manufactured solutions 1..5:
//   1: 1/(1+x^2+y^2)   2: x^2+3y^3+4xy   3: x^4+y^4
//   4: sin(x) exp(y)   5: 10 exp(-x^2-y^2)
// with f = -Laplace(u) and g = u.
PoissonProblem manufactured_case(int id);

// Interior fields solve <grad R, grad v> = -<h, v>, i.e. Laplace(R) ~ h,
// while the Poisson equation is -Laplace(u) = f; the interior samples are
// therefore weighted by -1.
inline constexpr double kInteriorSign = -1.0;

// L_u = sum g(v_i) S_i + kInteriorSign * sum f(v_j) R_j. Pure coefficient
// combination; no linear system is solved.
FeField superpose(const GbcSet& set, std::span<const double> f_samples, std::span<const double> g_samples);
FeField solve_by_superposition(const GbcSet& set, const PoissonProblem& problem);

// Galerkin solution of K u = M f_I with u = g_I on the boundary, where f_I and
// g_I are interpolants on the same space.
FeField solve_direct_fem(const GbcProblem& system, const PoissonProblem& problem);
FeField solve_direct_fem(std::shared_ptr<const FeSpace> space, const PoissonProblem& problem,
                         SolverOptions solver = {});

// Max coefficient difference between superposition and a single direct solve
// with load M H_f (H_f the coarse hat interpolant of the f samples) and
// boundary data sum g_i l_i.
double superposition_equivalence_check(const GbcSet& set, const GbcProblem& system,
                                       std::span<const double> f_samples, std::span<const double> g_samples);

struct PoissonReport {
  int case_id = 0;
  std::string method;  // "gbc-superposition" or "direct-fem"
  int refinement = 0;
  double max_error = 0.0;
  double energy_error = 0.0;
  int grid = 0;
  std::size_t samples = 0;
  std::size_t coarse_vertices = 0;
  std::size_t fine_vertices = 0;
  double fine_mesh_size = 0.0;
};

struct BenchmarkConfig {
  std::vector<int> cases{1, 2, 3, 4, 5};
  int refinements = 1;  // design pair refined 0..refinements times
  int fine_levels = 1;  // fine mesh = design mesh refined this often
  int degree = 1;
  int grid = 101;
  int workers = 1;
  SolverOptions solver{};
};

// Both methods' grid max errors and energy errors for every case and
// refinement level, ordered by (refinement, case, method). The direct FEM
// reference is solved on the design mesh, i.e. from the same vertex samples
// the superposition uses.
std::vector<PoissonReport> run_benchmark(const Triangulation& design, const BenchmarkConfig& config);

// Max |field - exact| over the grid points of the field's mesh in the domain.
double max_grid_error(const FeField& field, const std::function<double(Point)>& exact, int grid);

// "case,method,refinement,max_error,grid"
void write_benchmark_csv(std::ostream& os, std::span<const PoissonReport> reports);
// "case,method,refinement,max_error,ratio,energy_error,energy_ratio"
void write_convergence_csv(std::ostream& os, std::span<const PoissonReport> reports);

}  // namespace hgbc
