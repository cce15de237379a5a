#pragma once

#include <cstdint>

namespace ocal {

// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent child seed for stream `stream` of a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return mix64(mix64(parent) ^ (stream * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull));
}

}  // namespace ocal
