#pragma once

// Data-parallel inner loops used by the solvers and by field superposition.
// Each kernel has a portable scalar reference and an AVX2/FMA variant; the
// variant is picked once at startup from CPUID and can be overridden with
// HGBC_KERNELS=scalar|avx2 or set_backend().

#include <span>
#include <string_view>

namespace hgbc::kernels {

enum class Backend { Scalar, Avx2 };

bool avx2_supported();
Backend active_backend();
// Throws std::invalid_argument when the backend is not supported here.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);

// Compressed sparse row view; row_ptr has rows + 1 entries.
struct CsrView {
  int rows = 0;
  std::span<const int> row_ptr;
  std::span<const int> cols;
  std::span<const double> values;
};

double dot(std::span<const double> x, std::span<const double> y);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
// z = x .* y
void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z);
// y = A x
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
// out = sum_k weights[k] * columns[k]; all columns have out.size() entries.
void combine(std::span<const double> weights, std::span<const double* const> columns,
             std::span<double> out);

// Direct access to one backend, for equivalence testing.
namespace scalar {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
void combine(std::span<const double> weights, std::span<const double* const> columns,
             std::span<double> out);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
void combine(std::span<const double> weights, std::span<const double* const> columns,
             std::span<double> out);
}  // namespace avx2

}  // namespace hgbc::kernels
