#pragma once

// Keyed random streams. Every replicate or bootstrap draw gets its own engine
// seeded from (parent seed, stream id), so results never depend on the order
// or the thread in which streams are consumed.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace snts {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `id` under `parent`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t id) noexcept {
  return mix64(mix64(parent) ^ (id * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

/// FNV-1a, for folding string labels ("boot", cell names) into seeds.
[[nodiscard]] constexpr std::uint64_t hash_label(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) noexcept {
  return derive_seed(parent, hash_label(label));
}

[[nodiscard]] inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Fills `out` with i.i.d. N(0,1) draws.
inline void fill_standard_normal(Engine& eng, std::span<double> out) {
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : out) v = dist(eng);
}

/// Fills `out` with i.i.d. +-1 signs, one engine word per 64 draws.
inline void fill_rademacher(Engine& eng, std::span<double> out) {
  std::uint64_t bits = 0;
  int left = 0;
  for (double& v : out) {
    if (left == 0) {
      bits = eng();
      left = 64;
    }
    v = (bits & 1U) ? 1.0 : -1.0;
    bits >>= 1;
    --left;
  }
}

}  // namespace snts
