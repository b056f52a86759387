#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hgbc/kernels.hpp"

namespace hgbc {

struct Triplet {
  int row;
  int col;
  double value;
};

// Square matrix in compressed row storage with sorted column indices.
class SparseMatrix {
public:
  SparseMatrix() = default;

  // Duplicate entries are summed in input order, so the result does not
  // depend on how the triplets were produced as long as their order is fixed.
  static SparseMatrix from_triplets(int n, std::vector<Triplet> triplets);

  int rows() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }
  double at(int row, int col) const;

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> cols() const { return cols_; }
  std::span<const double> values() const { return values_; }
  kernels::CsrView view() const { return {n_, row_ptr_, cols_, values_}; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  // Rows and columns restricted to `keep` (ascending global indices).
  SparseMatrix submatrix(std::span<const int> keep) const;

  double max_asymmetry() const;

  // Debug export: one "row col value" line per stored entry, row-major.
  void write_coordinate(std::ostream& os) const;

private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

enum class SolverKind { Direct, ConjugateGradient };

struct SolverOptions {
  SolverKind kind = SolverKind::Direct;
  double tolerance = 1e-10;  // relative residual for conjugate gradients
};

// Number of linear solves performed by this process (all solvers).
std::uint64_t solve_count();

// Condensed Dirichlet solve K_ff u_f = rhs_f - K_fc u_c for a fixed set of
// free unknowns. The factorization (or preconditioner) is built once; solve()
// may be called concurrently.
class DirichletSolver {
public:
  DirichletSolver(const SparseMatrix& k, std::vector<char> is_free, SolverOptions options = {});
  ~DirichletSolver();
  DirichletSolver(DirichletSolver&&) noexcept;
  DirichletSolver& operator=(DirichletSolver&&) noexcept;

  // `prescribed` holds the values of every non-free entry (free entries are
  // ignored); the result equals it there exactly. Throws SolverError when the
  // iteration cap (10 x free unknowns) is hit.
  std::vector<double> solve(std::span<const double> rhs, std::span<const double> prescribed) const;

  std::span<const int> free_indices() const;
  int dimension() const;
  const SolverOptions& options() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around DirichletSolver.
std::vector<double> solve_dirichlet(const SparseMatrix& k, std::span<const double> rhs,
                                    const std::map<int, double>& fixed, SolverOptions options = {});

// Jacobi-preconditioned conjugate gradients on an SPD matrix. Returns the
// final relative residual; throws SolverError past max_iterations.
double conjugate_gradient(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                          double tolerance, int max_iterations);

}  // namespace hgbc
