#pragma once

// Data-parallel inner-loop kernels: reductions and row transforms used by
// the estimators, calibration and adaptation. Scalar reference versions
// always exist; an AVX2 variant is selected at runtime on capable x86-64
// hosts. The backends agree to ~1e-12 relative tolerance (summation order
// differs), which the equivalence tests pin down.
//
// The PSA_KERNELS environment variable ("scalar" or "avx2") overrides the
// automatic choice at startup.

#include <cstddef>
#include <string>

namespace psa::kernels {

enum class Backend { scalar, avx2 };

Backend active();
Backend best_available();
bool available(Backend b);
void select(Backend b);  // throws if b is not available on this host
std::string backend_name(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double max_value(const double* a, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x[i] *= alpha
void scale(double* x, double alpha, std::size_t n);
// out[i] = a[i] * b[i]
void multiply(const double* a, const double* b, double* out, std::size_t n);

// out = softmax(z). Max-shifted; exp stays scalar in both backends so the
// results differ only in reduction order.
void softmax_row(const double* z, double* out, std::size_t n);

// out[i] = row[i] * w[i] / sum_j(row[j] * w[j]); returns the pre-normalization
// mass. If the mass is zero, out is left equal to row.
double reweight_row(const double* row, const double* w, double* out, std::size_t n);

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*max_value)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, double, std::size_t);
  void (*multiply)(const double*, const double*, double*, std::size_t);
};

namespace detail {
const KernelTable& scalar_table();
const KernelTable& avx2_table();  // only valid if available(Backend::avx2)
bool cpu_has_avx2();
}  // namespace detail

}  // namespace psa::kernels
