#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oneclass {

// Every stochastic stage draws from its own stream derived from the single
// user-facing seed, so a stage can be replayed without running the others.
enum class SeedPurpose : std::uint8_t {
  kSplit,
  kResample,
  kIcaInit,
  kFolds,
  kSynthetic,
};

std::string_view purpose_name(SeedPurpose purpose);

// splitmix64(seed ^ fnv1a64(purpose_name(purpose))).
std::uint64_t derive_seed(std::uint64_t seed, SeedPurpose purpose);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, SeedPurpose purpose) {
  return Rng(derive_seed(seed, purpose));
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace oneclass
