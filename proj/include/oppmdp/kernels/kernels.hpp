#pragma once

// Dense arithmetic kernels used on the learner's per-slot path.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is chosen once at startup from CPUID and can
// be pinned with the OPPMDP_KERNELS environment variable ("scalar", "avx2")
// or select_backend(). Variants agree with the reference to rounding; they
// are not bit-identical because the summation order differs.

#include <cstddef>
#include <span>
#include <string_view>

namespace oppmdp::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*max)(const double* a, std::size_t n);
  // out[r] = sum_c m[r*cols + c] * x[c]
  void (*matvec)(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* out);
  // out[c] = sum_r x[r] * m[r*cols + c]
  void (*vecmat)(const double* x, const double* m, std::size_t rows,
                 std::size_t cols, double* out);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = (1 - g) * y + g * x
  void (*ema)(double g, const double* x, double* y, std::size_t n);
  // sum |a - b|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table() noexcept;
bool cpu_supports_avx2() noexcept;

/// The table in use by the free functions below.
const KernelTable& active() noexcept;

/// Pins the backend. Throws std::invalid_argument if it is unavailable here.
void select_backend(Backend b);
Backend parse_backend(std::string_view name);
std::string_view backend_name(Backend b) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }
inline double max(std::span<const double> a) { return active().max(a.data(), a.size()); }
inline void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> out) {
  active().matvec(m.data(), rows, cols, x.data(), out.data());
}
inline void vecmat(std::span<const double> x, std::span<const double> m, std::size_t rows,
                   std::size_t cols, std::span<double> out) {
  active().vecmat(x.data(), m.data(), rows, cols, out.data());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void ema(double g, std::span<const double> x, std::span<double> y) {
  active().ema(g, x.data(), y.data(), x.size());
}
inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  return active().l1_distance(a.data(), b.data(), a.size());
}

}  // namespace oppmdp::kernels
