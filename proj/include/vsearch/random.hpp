#ifndef VSEARCH_RANDOM_HPP
#define VSEARCH_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace vsearch {

using Rng = std::mt19937_64;

/// Purposes that get independent random streams within a trial.
enum class StreamPurpose : std::uint64_t {
  observation = 1,
  mc_estimate = 2,
  noise_prior = 3,
  borji_negatives = 4,
  synthetic = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t hash_key(std::string_view key) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Seed for the stream (global seed, trial, purpose, step). Each component is
/// mixed in turn, so adding trials or steps never perturbs existing streams.
inline std::uint64_t derive_seed(std::uint64_t global, std::string_view trial_key, StreamPurpose purpose,
                                 std::uint64_t step = 0) noexcept {
  std::uint64_t s = splitmix64(global);
  s = splitmix64(s ^ hash_key(trial_key));
  s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(s ^ step);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

} // namespace vsearch

#endif // VSEARCH_RANDOM_HPP
