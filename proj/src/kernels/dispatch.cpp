#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hgbc/kernels.hpp"

namespace hgbc::kernels {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) && defined(HGBC_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  const bool have = detect_avx2();
  if (const char* env = std::getenv("HGBC_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && have) return Backend::Avx2;
  }
  return have ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

bool avx2_supported() {
  static const bool have = detect_avx2();
  return have;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (backend == Backend::Avx2 && !avx2_supported()) {
    throw std::invalid_argument("AVX2/FMA kernels are not supported on this machine");
  }
  current().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

#define HGBC_DISPATCH(call) \
  (active_backend() == Backend::Avx2 ? avx2::call : scalar::call)

double dot(std::span<const double> x, std::span<const double> y) { return HGBC_DISPATCH(dot(x, y)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  HGBC_DISPATCH(axpy(alpha, x, y));
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  HGBC_DISPATCH(xpby(x, beta, y));
}

void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  HGBC_DISPATCH(hadamard(x, y, z));
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  HGBC_DISPATCH(spmv(a, x, y));
}

void combine(std::span<const double> weights, std::span<const double* const> columns,
             std::span<double> out) {
  HGBC_DISPATCH(combine(weights, columns, out));
}

#undef HGBC_DISPATCH

}  // namespace hgbc::kernels
