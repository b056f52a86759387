#include "hgbc/sparse.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hgbc/error.hpp"

namespace hgbc {

namespace {
std::atomic<std::uint64_t> g_solves{0};
}

std::uint64_t solve_count() { return g_solves.load(); }

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) {
      sum += triplets[j].value;
    }
    m.cols_.push_back(t.col);
    m.values_.push_back(sum);
    ++m.row_ptr_[t.row + 1];
    i = j;
  }
  for (int r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

double SparseMatrix::at(int row, int col) const {
  const auto begin = cols_.begin() + row_ptr_[row];
  const auto end = cols_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  kernels::spmv(view(), x, y);
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::submatrix(std::span<const int> keep) const {
  std::vector<int> local(n_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<int>(i);
  SparseMatrix m;
  m.n_ = static_cast<int>(keep.size());
  m.row_ptr_.assign(keep.size() + 1, 0);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int r = keep[i];
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = local[cols_[k]];
      if (c < 0) continue;
      m.cols_.push_back(c);
      m.values_.push_back(values_[k]);
    }
    m.row_ptr_[i + 1] = static_cast<int>(m.cols_.size());
  }
  return m;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < n_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(cols_[k], r)));
    }
  }
  return worst;
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
  const auto precision = os.precision(17);
  for (int r = 0; r < n_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      os << r << ' ' << cols_[k] << ' ' << values_[k] << '\n';
    }
  }
  os.precision(precision);
}

double conjugate_gradient(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                          double tolerance, int max_iterations) {
  ++g_solves;
  const int n = a.rows();
  std::vector<double> inv_diag(n), r(n), z(n), p(n), ap(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.at(i, i);
    inv_diag[i] = d != 0.0 ? 1.0 / d : 1.0;
  }
  const double bnorm = std::sqrt(kernels::dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0.0;
  }
  a.multiply(x, ap);
  for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  kernels::hadamard(inv_diag, r, z);
  p = z;
  double rz = kernels::dot(r, z);
  double rel = std::sqrt(kernels::dot(r, r)) / bnorm;
  for (int it = 0; it < max_iterations && rel > tolerance; ++it) {
    a.multiply(p, ap);
    const double alpha = rz / kernels::dot(p, ap);
    kernels::axpy(alpha, p, x);
    kernels::axpy(-alpha, ap, r);
    rel = std::sqrt(kernels::dot(r, r)) / bnorm;
    if (rel <= tolerance) break;
    kernels::hadamard(inv_diag, r, z);
    const double rz_next = kernels::dot(r, z);
    kernels::xpby(z, rz_next / rz, p);
    rz = rz_next;
  }
  if (rel > tolerance) {
    std::ostringstream os;
    os << "conjugate gradient did not converge in " << max_iterations
       << " iterations; relative residual " << std::scientific << rel;
    throw SolverError(os.str(), rel);
  }
  return rel;
}

// ------------------------------------------------------------ Dirichlet

struct DirichletSolver::Impl {
  SparseMatrix k;
  std::vector<int> free;
  std::vector<int> local;  // global -> free position or -1
  SolverOptions options;
  SparseMatrix kff;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

DirichletSolver::DirichletSolver(const SparseMatrix& k, std::vector<char> is_free, SolverOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->k = k;
  impl_->options = options;
  impl_->local.assign(k.rows(), -1);
  for (int i = 0; i < k.rows(); ++i) {
    if (is_free[i]) {
      impl_->local[i] = static_cast<int>(impl_->free.size());
      impl_->free.push_back(i);
    }
  }
  impl_->kff = k.submatrix(impl_->free);
  if (options.kind == SolverKind::Direct && !impl_->free.empty()) {
    const SparseMatrix& kff = impl_->kff;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(kff.nonzeros());
    for (int r = 0; r < kff.rows(); ++r) {
      for (int p = kff.row_ptr()[r]; p < kff.row_ptr()[r + 1]; ++p) {
        entries.emplace_back(r, kff.cols()[p], kff.values()[p]);
      }
    }
    Eigen::SparseMatrix<double> a(kff.rows(), kff.rows());
    a.setFromTriplets(entries.begin(), entries.end());
    impl_->ldlt.compute(a);
    if (impl_->ldlt.info() != Eigen::Success) {
      throw SolverError("sparse LDL^T factorization failed (matrix not positive definite?)", NAN);
    }
  }
}

DirichletSolver::~DirichletSolver() = default;
DirichletSolver::DirichletSolver(DirichletSolver&&) noexcept = default;
DirichletSolver& DirichletSolver::operator=(DirichletSolver&&) noexcept = default;

std::span<const int> DirichletSolver::free_indices() const { return impl_->free; }
int DirichletSolver::dimension() const { return static_cast<int>(impl_->free.size()); }
const SolverOptions& DirichletSolver::options() const { return impl_->options; }

std::vector<double> DirichletSolver::solve(std::span<const double> rhs,
                                           std::span<const double> prescribed) const {
  const Impl& s = *impl_;
  const SparseMatrix& k = s.k;
  const int nf = static_cast<int>(s.free.size());
  std::vector<double> u(prescribed.begin(), prescribed.end());
  for (int i : s.free) u[i] = 0.0;

  // b_f = rhs_f - K_fc u_c
  std::vector<double> b(nf);
  for (int i = 0; i < nf; ++i) {
    const int r = s.free[i];
    double acc = rhs[r];
    for (int p = k.row_ptr()[r]; p < k.row_ptr()[r + 1]; ++p) {
      const int c = k.cols()[p];
      if (s.local[c] < 0) acc -= k.values()[p] * u[c];
    }
    b[i] = acc;
  }
  if (nf == 0) {
    ++g_solves;
    return u;
  }

  std::vector<double> x(nf, 0.0);
  if (s.options.kind == SolverKind::Direct) {
    ++g_solves;
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), nf);
    Eigen::VectorXd sol = s.ldlt.solve(bv);
    for (int i = 0; i < nf; ++i) x[i] = sol[i];
  } else {
    conjugate_gradient(s.kff, b, x, s.options.tolerance, 10 * nf);
  }
  for (int i = 0; i < nf; ++i) u[s.free[i]] = x[i];
  return u;
}

std::vector<double> solve_dirichlet(const SparseMatrix& k, std::span<const double> rhs,
                                    const std::map<int, double>& fixed, SolverOptions options) {
  std::vector<char> is_free(k.rows(), 1);
  std::vector<double> prescribed(k.rows(), 0.0);
  for (const auto& [dof, value] : fixed) {
    is_free[dof] = 0;
    prescribed[dof] = value;
  }
  DirichletSolver solver(k, std::move(is_free), options);
  return solver.solve(rhs, prescribed);
}

}  // namespace hgbc
