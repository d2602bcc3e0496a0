#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rdmc {

// All randomness in this library flows through explicitly seeded generators.
// Functions take a uint64 seed and construct their own engine; repeated
// procedures (holdout replications, experiment replications) use seed + r for
// replication r, so a one-replication run equals a single call with the base
// seed.
using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stage seeds from a
// replication seed without overlapping the seed+r arithmetic done elsewhere.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Draw k distinct values from {0, ..., n-1} via partial Fisher-Yates.
// Returned in draw order (not sorted); deterministic given the engine state.
inline std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n,
                                                             std::uint64_t k,
                                                             Rng& rng) {
  std::vector<std::uint64_t> pool(n);
  for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k && i < n; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace rdmc
