#pragma once

#include <cstdint>
#include <limits>

namespace lpr::random {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key of the sub-stream `index` of `seed`. Distinct (seed, index) pairs
/// give statistically independent streams.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index * kGolden + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: the i-th output is mix64(key + i * golden), so
/// any position of any stream is computable without replaying the others.
/// Satisfies UniformRandomBitGenerator.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit CounterEngine(std::uint64_t key = 0) : key_(key) {}

  /// Engine for sub-stream `index` of `seed`.
  static CounterEngine stream(std::uint64_t seed, std::uint64_t index) {
    return CounterEngine(derive(seed, index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return at(++counter_); }
  result_type at(std::uint64_t i) const { return mix64(key_ + i * kGolden); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lpr::random
