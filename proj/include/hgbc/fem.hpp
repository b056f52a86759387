#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hgbc/geometry.hpp"
#include "hgbc/mesh.hpp"
#include "hgbc/sparse.hpp"

namespace hgbc {

// Bernstein polynomials of degree n on a triangle, indexed by (i0, i1, i2)
// with i0 + i1 + i2 = n, ordered by descending i0 then descending i1.
class BernsteinBasis {
public:
  explicit BernsteinBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<std::array<int, 3>>& indices() const { return indices_; }
  int index_of(int i0, int i1, int i2) const;

  // Barycentric coordinates of the domain point of each local index.
  Bary domain_point(int local) const;

  void values(const Bary& b, std::span<double> out) const;
  // Partial derivatives with respect to the three barycentric coordinates.
  void barycentric_derivatives(const Bary& b, std::span<std::array<double, 3>> out) const;

private:
  int degree_;
  std::vector<std::array<int, 3>> indices_;
  std::vector<double> multinomial_;
};

// de Casteljau evaluation of a Bernstein polynomial with local coefficients.
double de_casteljau(const BernsteinBasis& basis, std::span<const double> coefficients, const Bary& b);
// Value and barycentric directional derivatives (d/db0, d/db1, d/db2).
double de_casteljau(const BernsteinBasis& basis, std::span<const double> coefficients, const Bary& b,
                    std::array<double, 3>& derivatives);

// Gradients of the barycentric coordinates of triangle t in x/y.
std::array<Point, 3> barycentric_gradients(const Triangulation& mesh, int t);

// Continuous piecewise Bernstein space of degree 1..3. Domain points shared
// by neighbouring triangles are merged into one global degree of freedom;
// numbering follows first appearance in (triangle, local index) order.
class FeSpace {
public:
  FeSpace(std::shared_ptr<const Triangulation> mesh, int degree);

  const Triangulation& mesh() const { return *mesh_; }
  const std::shared_ptr<const Triangulation>& mesh_ptr() const { return mesh_; }
  int degree() const { return basis_.degree(); }
  int dof_count() const { return dof_count_; }
  int local_size() const { return basis_.size(); }
  const BernsteinBasis& basis() const { return basis_; }

  std::span<const int> local_dofs(int triangle) const {
    return {dof_map_.data() + static_cast<std::size_t>(triangle) * local_size(),
            static_cast<std::size_t>(local_size())};
  }
  bool is_boundary_dof(int dof) const { return boundary_[dof] != 0; }
  const std::vector<char>& boundary_mask() const { return boundary_; }
  std::vector<int> boundary_dofs() const;
  Point dof_point(int dof) const { return dof_points_[dof]; }
  int vertex_dof(int vertex) const { return vertex_dof_[vertex]; }

private:
  std::shared_ptr<const Triangulation> mesh_;
  BernsteinBasis basis_;
  int dof_count_ = 0;
  std::vector<int> dof_map_;
  std::vector<char> boundary_;
  std::vector<Point> dof_points_;
  std::vector<int> vertex_dof_;
};

struct ValueAndGradient {
  double value = 0.0;
  Point gradient{};
};

// One spline function: Bernstein coefficients over an FeSpace.
class FeField {
public:
  FeField(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  std::optional<double> eval(Point p) const;
  std::optional<ValueAndGradient> eval_with_gradient(Point p) const;
  double eval_at(const Location& loc) const;
  ValueAndGradient eval_with_gradient_at(const Location& loc) const;

private:
  std::shared_ptr<const FeSpace> space_;
  std::vector<double> coefficients_;
};

// Element matrices, row-major local_size x local_size.
std::vector<double> element_stiffness(const FeSpace& space, int triangle);
std::vector<double> element_mass(const FeSpace& space, int triangle);

// K_ab = int grad B_a . grad B_b and M_ab = int B_a B_b. Element matrices
// may be computed on several workers; the merge is serial in triangle order.
SparseMatrix assemble_stiffness(const FeSpace& space, int workers = 1);
SparseMatrix assemble_mass(const FeSpace& space, int workers = 1);

// Names of the quadrature rules used by assembly, for run metadata.
std::string stiffness_rule_name(int degree);
std::string mass_rule_name(int degree);

// Coefficients of the element-wise polynomial interpolant of fn at the
// domain points.
std::vector<double> interpolate(const FeSpace& space, const std::function<double(Point)>& fn);

// Energy norm of the difference between a field and an exact gradient,
// sqrt(int |grad u_h - grad u|^2), by degree-6 quadrature.
double energy_error(const FeField& field, const std::function<Point(Point)>& exact_gradient);
double l2_norm_squared_on_triangle(const FeSpace& space, int triangle, std::span<const double> local_coefficients);

}  // namespace hgbc
