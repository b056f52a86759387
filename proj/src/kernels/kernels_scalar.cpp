#include "hgbc/kernels.hpp"

namespace hgbc::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] * y[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[a.cols[k]];
    y[r] = s;
  }
}

void combine(std::span<const double> weights, std::span<const double* const> columns,
             std::span<double> out) {
  for (double& v : out) v = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    const double* col = columns[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * col[i];
  }
}

}  // namespace hgbc::kernels::scalar
