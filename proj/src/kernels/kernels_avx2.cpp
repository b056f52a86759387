#include "hgbc/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace hgbc::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(a, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d b = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(b, _mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&x[i])));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(&z[i], _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const double* xp = x.data();
  for (int r = 0; r < a.rows; ++r) {
    const int begin = a.row_ptr[r], end = a.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    int k = begin;
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&a.cols[k]));
      const __m256d xv = _mm256_i32gather_pd(xp, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(&a.values[k]), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += a.values[k] * xp[a.cols[k]];
    y[r] = s;
  }
}

void combine(std::span<const double> weights, std::span<const double* const> columns,
             std::span<double> out) {
  const std::size_t n = out.size();
  for (double& v : out) v = 0.0;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const double w = weights[c];
    if (w == 0.0) continue;
    const double* col = columns[c];
    const __m256d wv = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(&out[i],
                       _mm256_fmadd_pd(wv, _mm256_loadu_pd(col + i), _mm256_loadu_pd(&out[i])));
    }
    for (; i < n; ++i) out[i] += w * col[i];
  }
}

}  // namespace hgbc::kernels::avx2

#else

// Non-x86 builds: the AVX2 entry points forward to the scalar reference and
// avx2_supported() reports false, so they are never selected.
namespace hgbc::kernels::avx2 {
double dot(std::span<const double> x, std::span<const double> y) { return scalar::dot(x, y); }
void axpy(double a, std::span<const double> x, std::span<double> y) { scalar::axpy(a, x, y); }
void xpby(std::span<const double> x, double b, std::span<double> y) { scalar::xpby(x, b, y); }
void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  scalar::hadamard(x, y, z);
}
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) { scalar::spmv(a, x, y); }
void combine(std::span<const double> w, std::span<const double* const> c, std::span<double> out) {
  scalar::combine(w, c, out);
}
}  // namespace hgbc::kernels::avx2

#endif
