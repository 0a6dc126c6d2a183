#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "oppmdp/kernels/kernels.hpp"

namespace oppmdp::kernels {

#if !OPPMDP_HAVE_AVX2
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

bool cpu_supports_avx2() noexcept {
#if OPPMDP_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &scalar_table();
    case Backend::avx2:
      return cpu_supports_avx2() ? avx2_table() : nullptr;
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("OPPMDP_KERNELS"); env != nullptr && *env != '\0') {
    try {
      if (const KernelTable* t = table_for(parse_backend(env))) return t;
    } catch (const std::invalid_argument&) {
      // unknown name: fall through to auto-detection
    }
  }
  if (const KernelTable* t = table_for(Backend::avx2)) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

void select_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (t == nullptr)
    throw std::invalid_argument("kernel backend '" + std::string(backend_name(b)) +
                                "' is not available on this machine");
  current().store(t, std::memory_order_relaxed);
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  throw std::invalid_argument("unknown kernel backend '" + std::string(name) + "'");
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace oppmdp::kernels
