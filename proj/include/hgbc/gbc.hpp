#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgbc/fem.hpp"
#include "hgbc/mesh.hpp"
#include "hgbc/sparse.hpp"

namespace hgbc {

// A coarse design mesh whose vertices carry coordinate functions, and the
// uniformly refined mesh the functions are computed on.
class DesignPair {
public:
  DesignPair(std::shared_ptr<const Triangulation> coarse, int levels);

  const Triangulation& coarse() const { return *coarse_; }
  const Triangulation& fine() const { return *fine_; }
  const std::shared_ptr<const Triangulation>& coarse_ptr() const { return coarse_; }
  const std::shared_ptr<const Triangulation>& fine_ptr() const { return fine_; }
  int levels() const { return levels_; }

  // Fine triangles of coarse triangle t occupy [first, first + count).
  int children_per_triangle() const { return children_; }
  int coarse_parent(int fine_triangle) const { return fine_triangle / children_; }
  // Ancestor of a fine triangle after `level` refinements of the coarse mesh.
  int ancestor(int fine_triangle, int level) const;

  // Barycentric coordinates (w.r.t. the coarse parent) of a fine triangle's
  // corners. Built by midpoint averaging, so they are exact dyadic numbers.
  const std::array<Bary, 3>& corner_bary(int fine_triangle) const { return corner_bary_[fine_triangle]; }

  // Location of a fine vertex on the coarse mesh.
  Location vertex_parent(int fine_vertex) const;

private:
  std::shared_ptr<const Triangulation> coarse_;
  std::shared_ptr<const Triangulation> fine_;
  int levels_;
  int children_;
  std::vector<std::array<Bary, 3>> corner_bary_;
};

// Coefficients (over a space on pair.fine()) of the coarse piecewise linear
// hat function of a coarse vertex. Exact because the hat is linear on every
// fine triangle.
std::vector<double> coarse_hat_coefficients(const DesignPair& pair, const FeSpace& space, int vertex);

// Hat trace at every fine boundary degree of freedom, as (dof, value).
// Throws std::invalid_argument if `vertex` is not a coarse boundary vertex.
std::vector<std::pair<int, double>> boundary_trace_hat(const DesignPair& pair, const FeSpace& space,
                                                       int vertex);

enum class FieldKind { Boundary, Interior };

struct FieldId {
  FieldKind kind = FieldKind::Boundary;
  int vertex = 0;  // coarse vertex index
};

struct Provenance {
  bool local = false;
  int ring = 0;  // only meaningful for local fields
};

// Boundary fields S_i for every coarse boundary vertex and interior fields
// R_j for every coarse interior vertex.
struct GbcSet {
  std::shared_ptr<const DesignPair> pair;
  std::shared_ptr<const FeSpace> space;
  std::vector<int> boundary_vertices;
  std::vector<FeField> boundary_fields;
  std::vector<int> interior_vertices;
  std::vector<FeField> interior_fields;
  Provenance provenance;
  SolverOptions solver;

  const FeField& boundary_field(int vertex) const;
  const FeField& interior_field(int vertex) const;
  const FeField& field(FieldId id) const;
};

// Shared system for all coordinate solves on one design pair: stiffness and
// mass matrices plus the factorized free block with all boundary dofs fixed.
class GbcProblem {
public:
  GbcProblem(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
             SolverOptions solver = {}, int workers = 1);

  const DesignPair& pair() const { return *pair_; }
  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const DesignPair>& pair_ptr() const { return pair_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const SparseMatrix& mass() const { return mass_; }
  const SolverOptions& solver_options() const { return solver_; }

  // Discrete harmonic extension of the hat trace of coarse boundary vertex i.
  FeField solve_boundary(int vertex) const;
  // Zero-trace solution of <grad R, grad v> = -<h_j, v> for coarse interior vertex j.
  FeField solve_interior(int vertex) const;
  // The same problems restricted to the fine triangles covering coarse
  // star^k(center), with zero data on the artificial boundary. The field is
  // zero outside the region.
  FeField solve_local(int center, int ring) const;

  // Dirichlet solve with boundary data `trace` (full-length; only boundary
  // entries are used) and load vector `load`.
  std::vector<double> solve_with(std::span<const double> load, std::span<const double> trace) const;

  // All coordinate functions; per-field solves run on `workers` threads and
  // the result does not depend on the worker count.
  GbcSet compute_all(int workers = 1) const;

  // Load vector M * hat for a coarse vertex.
  std::vector<double> hat_load(int vertex) const;

private:
  std::shared_ptr<const DesignPair> pair_;
  std::shared_ptr<const FeSpace> space_;
  SolverOptions solver_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
  DirichletSolver global_;
};

FeField solve_boundary_gbc(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                           int vertex);
FeField solve_interior_gbc(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                           int vertex);
FeField solve_local_gbc(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                        int center, int ring);

struct IdentityReport {
  std::size_t samples = 0;
  double partition_of_unity = 0.0;  // max |sum S_i - 1|
  double linear_precision = 0.0;    // max |sum S_i v_i - x|
  double min_value = 0.0;           // min_i S_i over the samples
  // max over free dofs of |K sum r_j + M sum h_j|, absolute and relative to
  // max |M sum h_j|.
  double interior_residual = 0.0;
  double interior_residual_relative = 0.0;
};

IdentityReport verify_gbc_identities(const GbcSet& set, std::span<const Point> samples);

// Points of an n x n grid over the bounding box that lie in the domain.
std::vector<Point> grid_points_in_domain(const Triangulation& mesh, int n);

}  // namespace hgbc
