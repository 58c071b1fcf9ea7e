#include "oneclass/seed.hpp"

namespace oneclass {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view purpose_name(SeedPurpose purpose) {
  switch (purpose) {
    case SeedPurpose::kSplit:
      return "split";
    case SeedPurpose::kResample:
      return "resample";
    case SeedPurpose::kIcaInit:
      return "ica-init";
    case SeedPurpose::kFolds:
      return "folds";
    case SeedPurpose::kSynthetic:
      return "synthetic";
  }
  return "unknown";
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, SeedPurpose purpose) {
  return splitmix64(seed ^ fnv1a64(purpose_name(purpose)));
}

}  // namespace oneclass
