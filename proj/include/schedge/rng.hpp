#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace schedge {

// splitmix64 step, used to derive independent stream seeds from a master seed.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for a named sub-stream (datagen, window, churn, per-agent, ...).
// Different tags give statistically independent generators, and the result
// depends only on (master_seed, tag), so every stream is reproducible in
// isolation.
inline uint64_t derive_seed(uint64_t master_seed, uint64_t stream_tag) {
  uint64_t s = master_seed ^ (0x6a09e667f3bcc909ULL + stream_tag * 0x9e3779b97f4a7c15ULL);
  splitmix64(s);
  return splitmix64(s);
}

// Deterministic RNG wrapper. All sampling helpers are implemented here rather
// than with std::uniform_*_distribution so that sequences are identical across
// standard library implementations.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  uint64_t uniform_u64(uint64_t lo, uint64_t hi) {
    if (lo >= hi) return lo;
    uint64_t range = hi - lo + 1; // never 0: lo < hi
    uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }

  uint32_t uniform_u32(uint32_t lo, uint32_t hi) {
    return static_cast<uint32_t>(uniform_u64(lo, hi));
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index into a container of size n; n must be > 0.
  size_t index(size_t n) { return static_cast<size_t>(uniform_u64(0, n - 1)); }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[index(items.size())];
  }

  // Fisher-Yates, deterministic for a fixed seed.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

// Stream tags for derive_seed.
namespace rng_stream {
constexpr uint64_t datagen = 1;
constexpr uint64_t window = 2;
constexpr uint64_t churn = 3;
constexpr uint64_t agent_base = 0x100;
} // namespace rng_stream

} // namespace schedge
