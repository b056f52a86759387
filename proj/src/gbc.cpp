#include "hgbc/gbc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hgbc/kernels.hpp"
#include "hgbc/parallel.hpp"

namespace hgbc {

// -------------------------------------------------------------- DesignPair

DesignPair::DesignPair(std::shared_ptr<const Triangulation> coarse, int levels)
    : coarse_(std::move(coarse)), levels_(levels), children_(1) {
  if (levels < 0) throw std::invalid_argument("refinement level count must be non-negative");
  corner_bary_.assign(coarse_->triangle_count(), {Bary{1, 0, 0}, Bary{0, 1, 0}, Bary{0, 0, 1}});
  std::shared_ptr<const Triangulation> current = coarse_;
  auto mid = [](const Bary& a, const Bary& b) {
    return Bary{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
  };
  for (int level = 0; level < levels; ++level) {
    Refinement r = refine_with_parents(*current);
    std::vector<std::array<Bary, 3>> next;
    next.reserve(r.parent.size());
    for (const auto& [a, b, c] : corner_bary_) {
      const Bary ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    corner_bary_ = std::move(next);
    current = std::make_shared<const Triangulation>(std::move(r.mesh));
    children_ *= 4;
  }
  fine_ = current;
}

int DesignPair::ancestor(int fine_triangle, int level) const {
  int divisor = 1;
  for (int l = level; l < levels_; ++l) divisor *= 4;
  return fine_triangle / divisor;
}

Location DesignPair::vertex_parent(int fine_vertex) const {
  const int t = fine_->triangles_of_vertex(fine_vertex).front();
  const auto& tri = fine_->triangle(t);
  const int corner = tri[0] == fine_vertex ? 0 : (tri[1] == fine_vertex ? 1 : 2);
  return {coarse_parent(t), corner_bary_[t][corner]};
}

// ------------------------------------------------------------ hat functions

std::vector<double> coarse_hat_coefficients(const DesignPair& pair, const FeSpace& space, int vertex) {
  if (space.mesh_ptr() != pair.fine_ptr()) {
    throw std::invalid_argument("space must be built on the fine mesh of the design pair");
  }
  const Triangulation& coarse = pair.coarse();
  std::vector<double> out(space.dof_count(), 0.0);
  const BernsteinBasis& basis = space.basis();
  for (int parent : coarse.triangles_of_vertex(vertex)) {
    const auto& ptri = coarse.triangle(parent);
    const int j = ptri[0] == vertex ? 0 : (ptri[1] == vertex ? 1 : 2);
    const int first = parent * pair.children_per_triangle();
    for (int t = first; t < first + pair.children_per_triangle(); ++t) {
      const auto& corners = pair.corner_bary(t);
      const auto dofs = space.local_dofs(t);
      for (int k = 0; k < basis.size(); ++k) {
        const Bary dp = basis.domain_point(k);
        out[dofs[k]] = dp[0] * corners[0][j] + dp[1] * corners[1][j] + dp[2] * corners[2][j];
      }
    }
  }
  return out;
}

std::vector<std::pair<int, double>> boundary_trace_hat(const DesignPair& pair, const FeSpace& space,
                                                       int vertex) {
  if (vertex < 0 || vertex >= static_cast<int>(pair.coarse().vertex_count()) ||
      !pair.coarse().is_boundary_vertex(vertex)) {
    throw std::invalid_argument("vertex " + std::to_string(vertex) + " is not a coarse boundary vertex");
  }
  const std::vector<double> hat = coarse_hat_coefficients(pair, space, vertex);
  std::vector<std::pair<int, double>> out;
  for (int d : space.boundary_dofs()) out.emplace_back(d, hat[d]);
  return out;
}

// ------------------------------------------------------------------ GbcSet

namespace {

const FeField& find_field(const std::vector<int>& vertices, const std::vector<FeField>& fields, int v,
                          const char* what) {
  const auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) {
    throw std::out_of_range(std::string("no ") + what + " field for vertex " + std::to_string(v));
  }
  return fields[static_cast<std::size_t>(it - vertices.begin())];
}

std::vector<char> interior_mask(const FeSpace& space) {
  std::vector<char> free(space.dof_count());
  for (int d = 0; d < space.dof_count(); ++d) free[d] = !space.is_boundary_dof(d);
  return free;
}

}  // namespace

const FeField& GbcSet::boundary_field(int vertex) const {
  return find_field(boundary_vertices, boundary_fields, vertex, "boundary");
}

const FeField& GbcSet::interior_field(int vertex) const {
  return find_field(interior_vertices, interior_fields, vertex, "interior");
}

const FeField& GbcSet::field(FieldId id) const {
  return id.kind == FieldKind::Boundary ? boundary_field(id.vertex) : interior_field(id.vertex);
}

// -------------------------------------------------------------- GbcProblem

GbcProblem::GbcProblem(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                       SolverOptions solver, int workers)
    : pair_(std::move(pair)),
      space_(std::move(space)),
      solver_(solver),
      stiffness_(assemble_stiffness(*space_, workers)),
      mass_(assemble_mass(*space_, workers)),
      global_(stiffness_, interior_mask(*space_), solver) {
  if (space_->mesh_ptr() != pair_->fine_ptr()) {
    throw std::invalid_argument("space must be built on the fine mesh of the design pair");
  }
}

std::vector<double> GbcProblem::hat_load(int vertex) const {
  const std::vector<double> hat = coarse_hat_coefficients(*pair_, *space_, vertex);
  return mass_.multiply(hat);
}

std::vector<double> GbcProblem::solve_with(std::span<const double> load, std::span<const double> trace) const {
  std::vector<double> prescribed(space_->dof_count(), 0.0);
  for (int d = 0; d < space_->dof_count(); ++d)
    if (space_->is_boundary_dof(d)) prescribed[d] = trace[d];
  return global_.solve(load, prescribed);
}

FeField GbcProblem::solve_boundary(int vertex) const {
  const Triangulation& coarse = pair_->coarse();
  if (vertex < 0 || vertex >= static_cast<int>(coarse.vertex_count()) || !coarse.is_boundary_vertex(vertex)) {
    throw std::invalid_argument("vertex " + std::to_string(vertex) + " is not a coarse boundary vertex");
  }
  const std::vector<double> trace = coarse_hat_coefficients(*pair_, *space_, vertex);
  const std::vector<double> zero(space_->dof_count(), 0.0);
  return FeField(space_, solve_with(zero, trace));
}

FeField GbcProblem::solve_interior(int vertex) const {
  const Triangulation& coarse = pair_->coarse();
  if (vertex < 0 || vertex >= static_cast<int>(coarse.vertex_count()) || coarse.is_boundary_vertex(vertex)) {
    throw std::invalid_argument("vertex " + std::to_string(vertex) + " is not a coarse interior vertex");
  }
  std::vector<double> load = hat_load(vertex);
  for (double& v : load) v = -v;
  const std::vector<double> zero(space_->dof_count(), 0.0);
  return FeField(space_, solve_with(load, zero));
}

FeField GbcProblem::solve_local(int center, int ring) const {
  const Triangulation& coarse = pair_->coarse();
  if (center < 0 || center >= static_cast<int>(coarse.vertex_count())) {
    throw std::invalid_argument("local center vertex " + std::to_string(center) + " does not exist");
  }
  if (ring < 1) throw std::invalid_argument("ring must be at least 1");
  const bool boundary = coarse.is_boundary_vertex(center);
  const std::vector<int> rings = triangle_rings_from_vertex(coarse, center);

  const FeSpace& space = *space_;
  const int nt = static_cast<int>(space.mesh().triangle_count());
  std::vector<char> touched(space.dof_count(), 0), blocked(space.dof_count(), 0);
  for (int t = 0; t < nt; ++t) {
    const bool inside = rings[pair_->coarse_parent(t)] <= ring;
    for (int d : space.local_dofs(t)) (inside ? touched : blocked)[d] = 1;
  }
  std::vector<char> free(space.dof_count(), 0);
  bool whole = true;
  for (int d = 0; d < space.dof_count(); ++d) {
    free[d] = touched[d] && !blocked[d] && !space.is_boundary_dof(d);
    whole = whole && !blocked[d];
  }

  std::vector<double> load(space.dof_count(), 0.0);
  std::vector<double> prescribed(space.dof_count(), 0.0);
  if (boundary) {
    const std::vector<double> hat = coarse_hat_coefficients(*pair_, space, center);
    for (int d = 0; d < space.dof_count(); ++d)
      if (space.is_boundary_dof(d) && touched[d]) prescribed[d] = hat[d];
  } else {
    load = hat_load(center);
    for (double& v : load) v = -v;
  }

  std::vector<double> u;
  if (whole) {
    u = global_.solve(load, prescribed);
  } else {
    DirichletSolver local(stiffness_, free, solver_);
    u = local.solve(load, prescribed);
  }
  for (int d = 0; d < space.dof_count(); ++d)
    if (!touched[d]) u[d] = 0.0;
  return FeField(space_, std::move(u));
}

GbcSet GbcProblem::compute_all(int workers) const {
  GbcSet set;
  set.pair = pair_;
  set.space = space_;
  set.solver = solver_;
  set.boundary_vertices = pair_->coarse().boundary_vertices();
  set.interior_vertices = pair_->coarse().interior_vertices();
  const int nb = static_cast<int>(set.boundary_vertices.size());
  const int ni = static_cast<int>(set.interior_vertices.size());
  std::vector<std::optional<FeField>> results(nb + ni);
  parallel_for(nb + ni, workers, [&](int i) {
    results[i] = i < nb ? solve_boundary(set.boundary_vertices[i]) : solve_interior(set.interior_vertices[i - nb]);
  });
  for (int i = 0; i < nb; ++i) set.boundary_fields.push_back(std::move(*results[i]));
  for (int i = 0; i < ni; ++i) set.interior_fields.push_back(std::move(*results[nb + i]));
  return set;
}

FeField solve_boundary_gbc(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                           int vertex) {
  return GbcProblem(std::move(pair), std::move(space)).solve_boundary(vertex);
}

FeField solve_interior_gbc(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                           int vertex) {
  return GbcProblem(std::move(pair), std::move(space)).solve_interior(vertex);
}

FeField solve_local_gbc(std::shared_ptr<const DesignPair> pair, std::shared_ptr<const FeSpace> space,
                        int center, int ring) {
  return GbcProblem(std::move(pair), std::move(space)).solve_local(center, ring);
}

// ------------------------------------------------------------ verification

IdentityReport verify_gbc_identities(const GbcSet& set, std::span<const Point> samples) {
  IdentityReport report;
  report.samples = samples.size();
  report.min_value = std::numeric_limits<double>::infinity();
  const Triangulation& coarse = set.pair->coarse();
  const Triangulation& fine = set.pair->fine();
  for (const Point& p : samples) {
    const auto loc = fine.locate(p);
    if (!loc) continue;
    double sum = 0.0;
    Point weighted{};
    for (std::size_t i = 0; i < set.boundary_fields.size(); ++i) {
      const double s = set.boundary_fields[i].eval_at(*loc);
      sum += s;
      weighted = weighted + s * coarse.vertex(set.boundary_vertices[i]);
      report.min_value = std::min(report.min_value, s);
    }
    report.partition_of_unity = std::max(report.partition_of_unity, std::abs(sum - 1.0));
    report.linear_precision = std::max(report.linear_precision, norm(weighted - p));
  }

  if (!set.interior_fields.empty()) {
    const FeSpace& space = *set.space;
    const int n = space.dof_count();
    std::vector<double> r_sum(n, 0.0), h_sum(n, 0.0);
    for (const FeField& r : set.interior_fields) kernels::axpy(1.0, r.coefficients(), r_sum);
    for (int v : set.interior_vertices) {
      kernels::axpy(1.0, coarse_hat_coefficients(*set.pair, space, v), h_sum);
    }
    const SparseMatrix k = assemble_stiffness(space);
    const SparseMatrix m = assemble_mass(space);
    const std::vector<double> kr = k.multiply(r_sum);
    const std::vector<double> mh = m.multiply(h_sum);
    double scale = 0.0;
    for (int d = 0; d < n; ++d) {
      if (space.is_boundary_dof(d)) continue;
      report.interior_residual = std::max(report.interior_residual, std::abs(kr[d] + mh[d]));
      scale = std::max(scale, std::abs(mh[d]));
    }
    report.interior_residual_relative = scale > 0.0 ? report.interior_residual / scale : 0.0;
  }
  return report;
}

std::vector<Point> grid_points_in_domain(const Triangulation& mesh, int n) {
  std::vector<Point> out;
  const Point lo = mesh.bbox_min(), hi = mesh.bbox_max();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double sx = n > 1 ? double(i) / (n - 1) : 0.5;
      const double sy = n > 1 ? double(j) / (n - 1) : 0.5;
      const Point p{lo.x + sx * (hi.x - lo.x), lo.y + sy * (hi.y - lo.y)};
      if (mesh.locate(p)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace hgbc
