#pragma once

#include <cstdint>
#include <random>

namespace oppmdp {

/// SplitMix64 finalizer. Used to derive independent sub-seeds and to hash
/// sweep coordinates into seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// One pseudo-random stream. The engine is std::mt19937_64; doubles are built
/// from the top 53 bits so the sequence is identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// The three mutually independent streams of one run: nature's side
/// information (W), controller randomization (U) and nature's transitions (V).
struct RngStreams {
  explicit RngStreams(std::uint64_t master_seed)
      : w(splitmix64(master_seed ^ 0x57ULL)),
        u(splitmix64(splitmix64(master_seed) ^ 0x55ULL)),
        v(splitmix64(splitmix64(splitmix64(master_seed)) ^ 0x56ULL)) {}

  RandomStream w;
  RandomStream u;
  RandomStream v;
};

}  // namespace oppmdp
