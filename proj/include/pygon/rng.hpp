#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace pygon {

// 64-bit seed. Identical seed and parameters give bit-identical output.
struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(Seed, Seed) = default;
};

// SplitMix64 finalizer; used to derive independent child streams.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` of `master`. Does not depend on call order,
// so parallel tasks that each derive their own seed stay reproducible.
constexpr Seed derive_seed(Seed master, std::uint64_t index) {
  return Seed{mix64(mix64(master.value) ^ mix64(index + 0x632BE59BD9B4E019ULL))};
}

constexpr Seed derive_seed(Seed master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

// Thin wrapper over mt19937_64. The engine is fully specified by the
// standard; the conversions below are written out so results do not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // p = 0 never fires, p = 1 always fires.
  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound), rejection sampled (no modulo bias).
  std::size_t below(std::size_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % b);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pygon
