#include <cmath>
#include <limits>

#include "oppmdp/kernels/kernels.hpp"

namespace oppmdp::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double max_scalar(const double* a, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = a[i] > m ? a[i] : m;
  return m;
}

void matvec_scalar(const double* m, std::size_t rows, std::size_t cols, const double* x,
                   double* out) {
  for (std::size_t r = 0; r < rows; ++r) out[r] = dot_scalar(m + r * cols, x, cols);
}

void vecmat_scalar(const double* x, const double* m, std::size_t rows, std::size_t cols,
                   double* out) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double xr = x[r];
    const double* row = m + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += xr * row[c];
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void ema_scalar(double g, const double* x, double* y, std::size_t n) {
  const double keep = 1.0 - g;
  for (std::size_t i = 0; i < n; ++i) y[i] = keep * y[i] + g * x[i];
}

double l1_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
  return s;
}

constexpr KernelTable kScalar{Backend::scalar, "scalar",     dot_scalar,    sum_scalar,
                              max_scalar,      matvec_scalar, vecmat_scalar, axpy_scalar,
                              ema_scalar,      l1_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace oppmdp::kernels
