#include "hgbc/fem.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "hgbc/error.hpp"
#include "hgbc/parallel.hpp"
#include "hgbc/quadrature.hpp"

namespace hgbc {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

int stiffness_degree(int n) { return std::max(1, 2 * n - 2); }
int mass_degree(int n) { return 2 * n; }

}  // namespace

// --------------------------------------------------------- BernsteinBasis

BernsteinBasis::BernsteinBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) {
    throw std::invalid_argument("unsupported element degree " + std::to_string(degree) +
                                " (supported: 1, 2, 3)");
  }
  for (int i0 = degree; i0 >= 0; --i0) {
    for (int i1 = degree - i0; i1 >= 0; --i1) {
      const int i2 = degree - i0 - i1;
      indices_.push_back({i0, i1, i2});
      multinomial_.push_back(factorial(degree) / (factorial(i0) * factorial(i1) * factorial(i2)));
    }
  }
}

int BernsteinBasis::index_of(int i0, int i1, int i2) const {
  for (int k = 0; k < size(); ++k) {
    if (indices_[k] == std::array<int, 3>{i0, i1, i2}) return k;
  }
  return -1;
}

Bary BernsteinBasis::domain_point(int local) const {
  const auto& a = indices_[local];
  return {double(a[0]) / degree_, double(a[1]) / degree_, double(a[2]) / degree_};
}

void BernsteinBasis::values(const Bary& b, std::span<double> out) const {
  for (int k = 0; k < size(); ++k) {
    const auto& a = indices_[k];
    out[k] = multinomial_[k] * ipow(b[0], a[0]) * ipow(b[1], a[1]) * ipow(b[2], a[2]);
  }
}

void BernsteinBasis::barycentric_derivatives(const Bary& b, std::span<std::array<double, 3>> out) const {
  for (int k = 0; k < size(); ++k) {
    const auto& a = indices_[k];
    for (int j = 0; j < 3; ++j) {
      if (a[j] == 0) {
        out[k][j] = 0.0;
        continue;
      }
      double term = multinomial_[k] * a[j];
      for (int m = 0; m < 3; ++m) term *= ipow(b[m], m == j ? a[m] - 1 : a[m]);
      out[k][j] = term;
    }
  }
}

double de_casteljau(const BernsteinBasis& basis, std::span<const double> coefficients, const Bary& b,
                    std::array<double, 3>& derivatives) {
  const int n = basis.degree();
  // table[i0][i1] holds the coefficient with index (i0, i1, m - i0 - i1).
  double table[4][4] = {};
  for (int k = 0; k < basis.size(); ++k) {
    const auto& a = basis.indices()[k];
    table[a[0]][a[1]] = coefficients[k];
  }
  for (int m = n; m > 1; --m) {
    for (int i0 = 0; i0 <= m - 1; ++i0) {
      for (int i1 = 0; i0 + i1 <= m - 1; ++i1) {
        table[i0][i1] = b[0] * table[i0 + 1][i1] + b[1] * table[i0][i1 + 1] + b[2] * table[i0][i1];
      }
    }
  }
  const double c0 = table[1][0], c1 = table[0][1], c2 = table[0][0];
  derivatives = {n * c0, n * c1, n * c2};
  return b[0] * c0 + b[1] * c1 + b[2] * c2;
}

double de_casteljau(const BernsteinBasis& basis, std::span<const double> coefficients, const Bary& b) {
  std::array<double, 3> unused{};
  return de_casteljau(basis, coefficients, b, unused);
}

std::array<Point, 3> barycentric_gradients(const Triangulation& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  const Point p0 = mesh.vertex(tri[0]), p1 = mesh.vertex(tri[1]), p2 = mesh.vertex(tri[2]);
  const double det = orient(p0, p1, p2);
  return {Point{(p1.y - p2.y) / det, (p2.x - p1.x) / det},
          Point{(p2.y - p0.y) / det, (p0.x - p2.x) / det},
          Point{(p0.y - p1.y) / det, (p1.x - p0.x) / det}};
}

// ----------------------------------------------------------------- FeSpace

FeSpace::FeSpace(std::shared_ptr<const Triangulation> mesh, int degree)
    : mesh_(std::move(mesh)), basis_(degree) {
  const Triangulation& m = *mesh_;
  const int nloc = basis_.size();
  const int nt = static_cast<int>(m.triangle_count());
  dof_map_.resize(static_cast<std::size_t>(nt) * nloc);
  vertex_dof_.assign(m.vertex_count(), -1);

  // key: (kind, a, b, c); kind 0 vertex, 1 edge, 2 triangle interior
  std::map<std::tuple<int, int, int, int>, int> ids;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangle(t);
    for (int k = 0; k < nloc; ++k) {
      const auto& a = basis_.indices()[k];
      const int nonzero = (a[0] > 0) + (a[1] > 0) + (a[2] > 0);
      std::tuple<int, int, int, int> key;
      bool boundary = false;
      if (nonzero == 1) {
        const int j = a[0] > 0 ? 0 : (a[1] > 0 ? 1 : 2);
        key = {0, tri[j], 0, 0};
        boundary = m.is_boundary_vertex(tri[j]);
      } else if (nonzero == 2) {
        const int j0 = a[0] == 0 ? 1 : 0;
        const int j1 = a[2] == 0 ? 1 : 2;
        const int va = tri[j0], vb = tri[j1];
        const int lo = std::min(va, vb), hi = std::max(va, vb);
        const int mult_lo = va == lo ? a[j0] : a[j1];
        key = {1, lo, hi, mult_lo};
        boundary = m.is_boundary_edge(va, vb);
      } else {
        key = {2, t, k, 0};
      }
      auto [it, inserted] = ids.emplace(key, dof_count_);
      if (inserted) {
        const Bary dp = basis_.domain_point(k);
        dof_points_.push_back(dp[0] * m.vertex(tri[0]) + dp[1] * m.vertex(tri[1]) +
                              dp[2] * m.vertex(tri[2]));
        boundary_.push_back(boundary ? 1 : 0);
        if (nonzero == 1) vertex_dof_[std::get<1>(key)] = dof_count_;
        ++dof_count_;
      }
      dof_map_[static_cast<std::size_t>(t) * nloc + k] = it->second;
    }
  }
}

std::vector<int> FeSpace::boundary_dofs() const {
  std::vector<int> out;
  for (int d = 0; d < dof_count_; ++d)
    if (boundary_[d]) out.push_back(d);
  return out;
}

// ----------------------------------------------------------------- FeField

FeField::FeField(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  if (static_cast<int>(coefficients_.size()) != space_->dof_count()) {
    throw std::invalid_argument("coefficient vector length does not match the space");
  }
}

double FeField::eval_at(const Location& loc) const {
  const auto dofs = space_->local_dofs(loc.triangle);
  double local[10];
  for (std::size_t k = 0; k < dofs.size(); ++k) local[k] = coefficients_[dofs[k]];
  return de_casteljau(space_->basis(), std::span<const double>(local, dofs.size()), loc.bary);
}

ValueAndGradient FeField::eval_with_gradient_at(const Location& loc) const {
  const auto dofs = space_->local_dofs(loc.triangle);
  double local[10];
  for (std::size_t k = 0; k < dofs.size(); ++k) local[k] = coefficients_[dofs[k]];
  std::array<double, 3> d{};
  ValueAndGradient out;
  out.value = de_casteljau(space_->basis(), std::span<const double>(local, dofs.size()), loc.bary, d);
  const auto g = barycentric_gradients(space_->mesh(), loc.triangle);
  out.gradient = d[0] * g[0] + d[1] * g[1] + d[2] * g[2];
  return out;
}

std::optional<double> FeField::eval(Point p) const {
  const auto loc = space_->mesh().locate(p);
  if (!loc) return std::nullopt;
  return eval_at(*loc);
}

std::optional<ValueAndGradient> FeField::eval_with_gradient(Point p) const {
  const auto loc = space_->mesh().locate(p);
  if (!loc) return std::nullopt;
  return eval_with_gradient_at(*loc);
}

// ---------------------------------------------------------------- assembly

std::vector<double> element_stiffness(const FeSpace& space, int t) {
  const BernsteinBasis& basis = space.basis();
  const int nloc = basis.size();
  const QuadratureRule& rule = quadrature_rule(stiffness_degree(basis.degree()));
  const auto g = barycentric_gradients(space.mesh(), t);
  const double area = space.mesh().triangle_area(t);
  std::vector<double> out(static_cast<std::size_t>(nloc) * nloc, 0.0);
  std::vector<std::array<double, 3>> d(nloc);
  std::vector<Point> grad(nloc);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    basis.barycentric_derivatives(rule.points[q], d);
    for (int a = 0; a < nloc; ++a) grad[a] = d[a][0] * g[0] + d[a][1] * g[1] + d[a][2] * g[2];
    const double w = rule.weights[q] * area;
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) out[a * nloc + b] += w * dot(grad[a], grad[b]);
  }
  // Exact symmetry regardless of summation order.
  for (int a = 0; a < nloc; ++a)
    for (int b = a + 1; b < nloc; ++b) out[b * nloc + a] = out[a * nloc + b];
  return out;
}

std::vector<double> element_mass(const FeSpace& space, int t) {
  const BernsteinBasis& basis = space.basis();
  const int nloc = basis.size();
  const QuadratureRule& rule = quadrature_rule(mass_degree(basis.degree()));
  const double area = space.mesh().triangle_area(t);
  std::vector<double> out(static_cast<std::size_t>(nloc) * nloc, 0.0);
  std::vector<double> v(nloc);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    basis.values(rule.points[q], v);
    const double w = rule.weights[q] * area;
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) out[a * nloc + b] += w * v[a] * v[b];
  }
  for (int a = 0; a < nloc; ++a)
    for (int b = a + 1; b < nloc; ++b) out[b * nloc + a] = out[a * nloc + b];
  return out;
}

namespace {

template <class ElementFn>
SparseMatrix assemble(const FeSpace& space, int workers, ElementFn element) {
  const int nt = static_cast<int>(space.mesh().triangle_count());
  const int nloc = space.local_size();
  std::vector<std::vector<double>> blocks(nt);
  parallel_for(nt, workers, [&](int t) { blocks[t] = element(space, t); });
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nt) * nloc * nloc);
  for (int t = 0; t < nt; ++t) {
    const auto dofs = space.local_dofs(t);
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) triplets.push_back({dofs[a], dofs[b], blocks[t][a * nloc + b]});
  }
  return SparseMatrix::from_triplets(space.dof_count(), std::move(triplets));
}

}  // namespace

SparseMatrix assemble_stiffness(const FeSpace& space, int workers) {
  return assemble(space, workers, element_stiffness);
}

SparseMatrix assemble_mass(const FeSpace& space, int workers) {
  return assemble(space, workers, element_mass);
}

std::string stiffness_rule_name(int degree) { return quadrature_rule(stiffness_degree(degree)).name; }
std::string mass_rule_name(int degree) { return quadrature_rule(mass_degree(degree)).name; }

std::vector<double> interpolate(const FeSpace& space, const std::function<double(Point)>& fn) {
  const BernsteinBasis& basis = space.basis();
  const int nloc = basis.size();
  Eigen::MatrixXd vandermonde(nloc, nloc);
  std::vector<double> row(nloc);
  for (int p = 0; p < nloc; ++p) {
    basis.values(basis.domain_point(p), row);
    for (int a = 0; a < nloc; ++a) vandermonde(p, a) = row[a];
  }
  const Eigen::MatrixXd inverse = vandermonde.inverse();

  std::vector<double> out(space.dof_count(), 0.0);
  std::vector<char> written(space.dof_count(), 0);
  const Triangulation& mesh = space.mesh();
  Eigen::VectorXd samples(nloc);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto dofs = space.local_dofs(t);
    bool needed = false;
    for (int d : dofs) needed = needed || !written[d];
    if (!needed) continue;
    for (int p = 0; p < nloc; ++p) samples[p] = fn(space.dof_point(dofs[p]));
    const Eigen::VectorXd c = inverse * samples;
    for (int a = 0; a < nloc; ++a) {
      if (!written[dofs[a]]) {
        out[dofs[a]] = c[a];
        written[dofs[a]] = 1;
      }
    }
  }
  return out;
}

double energy_error(const FeField& field, const std::function<Point(Point)>& exact_gradient) {
  const FeSpace& space = field.space();
  const Triangulation& mesh = space.mesh();
  const QuadratureRule& rule = quadrature_rule(6);
  double total = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto& tri = mesh.triangle(t);
    const double area = mesh.triangle_area(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Bary& b = rule.points[q];
      const Point x = b[0] * mesh.vertex(tri[0]) + b[1] * mesh.vertex(tri[1]) + b[2] * mesh.vertex(tri[2]);
      const ValueAndGradient vg = field.eval_with_gradient_at(Location{t, b});
      const Point diff = vg.gradient - exact_gradient(x);
      total += rule.weights[q] * area * dot(diff, diff);
    }
  }
  return std::sqrt(total);
}

double l2_norm_squared_on_triangle(const FeSpace& space, int t, std::span<const double> local) {
  const QuadratureRule& rule = quadrature_rule(mass_degree(space.degree()));
  const double area = space.mesh().triangle_area(t);
  double total = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double v = de_casteljau(space.basis(), local, rule.points[q]);
    total += rule.weights[q] * area * v * v;
  }
  return total;
}

}  // namespace hgbc
