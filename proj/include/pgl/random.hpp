#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pgl {

// One generator per trial; never share across threads.
using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Child seed for (base seed, experiment name, index...). Stable across
/// platforms and thread counts.
template <typename... Ints>
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view name,
                                    Ints... indices) noexcept {
  std::uint64_t h = mix64(base ^ mix64(fnv1a(name)));
  ((h = mix64(h ^ static_cast<std::uint64_t>(indices))), ...);
  return h;
}

}  // namespace pgl
