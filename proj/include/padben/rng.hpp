#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace padben {

// Pinned, portable randomness. Every dataset-affecting draw in the project
// goes through this generator so that a (seed, stream) pair reproduces
// byte-identical artifacts on any platform or in any reimplementation.
//
// Output i of a stream with key k is splitmix64_mix(k + (i+1)*GOLDEN), the
// SplitMix64 sequence started at state k. Bounded draws reduce with modulo;
// doubles take the top 53 bits. These choices are part of the pinned
// algorithm, not implementation details.

inline constexpr std::uint64_t kSplitMixGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class Rng {
 public:
  explicit Rng(std::uint64_t stream_key) : key_(stream_key) {}

  std::uint64_t next_u64() { return splitmix64_mix(key_ + (++counter_) * kSplitMixGolden); }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Fisher-Yates, descending index order.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Derives an independent stream key from a seed and a path of identifiers,
// e.g. derive_stream(seed, {kStreamTasks, setting_id, task_id, group_id}).
inline std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = splitmix64_mix(seed ^ 0xA0761D6478BD642FULL);
  for (std::uint64_t part : path) {
    k = splitmix64_mix(k ^ splitmix64_mix(part + kSplitMixGolden));
  }
  return k;
}

// Fixed purpose tags for stream splitting (stable across versions).
enum StreamPurpose : std::uint64_t {
  kStreamTasks = 1,
  kStreamGeneration = 2,
  kStreamDetectors = 3,
  kStreamAnalysis = 4,
};

}  // namespace padben
