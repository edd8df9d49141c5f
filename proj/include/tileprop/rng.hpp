#pragma once

#include <cstdint>
#include <utility>

namespace tileprop {

/// splitmix64 output finalizer (two xor-shift-multiply rounds).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// One splitmix64 step: returns (output, next state).
constexpr std::pair<std::uint64_t, std::uint64_t> prng_next(std::uint64_t state) {
  state += kGoldenGamma;
  return {mix64(state), state};
}

/// Folds `value` into a running key; used to derive independent streams.
constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t value) {
  return mix64(key ^ mix64(value + kGoldenGamma));
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    auto [value, state] = prng_next(state_);
    state_ = state;
    return value;
  }
  std::uint64_t operator()() { return next(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<unsigned __int128>(static_cast<std::uint64_t>(hi - lo) + 1);
    return lo + static_cast<std::int64_t>((span * next()) >> 64);
  }

  std::uint64_t state() const { return state_; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

}  // namespace tileprop
