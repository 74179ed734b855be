#include "psa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "psa/types.hpp"

namespace psa::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double max_scalar(const double* a, std::size_t n) {
  double m = a[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, a[i]);
  return m;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

const KernelTable kScalarTable{dot_scalar, sum_scalar, max_scalar,
                               axpy_scalar, scale_scalar, multiply_scalar};

const KernelTable* g_active = &kScalarTable;
Backend g_backend = Backend::scalar;

struct Init {
  Init() {
    Backend want = detail::cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("PSA_KERNELS")) {
      std::string s(env);
      if (s == "scalar") want = Backend::scalar;
      else if (s == "avx2" && detail::cpu_has_avx2()) want = Backend::avx2;
    }
    if (want == Backend::avx2) {
      g_active = &detail::avx2_table();
      g_backend = Backend::avx2;
    }
  }
};
const Init g_init;

}  // namespace

namespace detail {
const KernelTable& scalar_table() { return kScalarTable; }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}
}  // namespace detail

Backend active() { return g_backend; }

Backend best_available() {
  return detail::cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

bool available(Backend b) {
  return b == Backend::scalar || detail::cpu_has_avx2();
}

void select(Backend b) {
  if (!available(b))
    throw NumericalError("kernels: backend " + backend_name(b) +
                         " not available on this host");
  g_backend = b;
  g_active = (b == Backend::avx2) ? &detail::avx2_table() : &kScalarTable;
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
  return g_active->dot(a, b, n);
}
double sum(const double* a, std::size_t n) { return g_active->sum(a, n); }
double max_value(const double* a, std::size_t n) { return g_active->max_value(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  g_active->axpy(alpha, x, y, n);
}
void scale(double* x, double alpha, std::size_t n) { g_active->scale(x, alpha, n); }
void multiply(const double* a, const double* b, double* out, std::size_t n) {
  g_active->multiply(a, b, out, n);
}

void softmax_row(const double* z, double* out, std::size_t n) {
  const double m = max_value(z, n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(z[i] - m);
  const double s = sum(out, n);
  scale(out, 1.0 / s, n);
}

double reweight_row(const double* row, const double* w, double* out, std::size_t n) {
  multiply(row, w, out, n);
  const double mass = sum(out, n);
  if (mass > 0.0) {
    scale(out, 1.0 / mass, n);
  } else {
    std::copy(row, row + n, out);
  }
  return mass;
}

}  // namespace psa::kernels
