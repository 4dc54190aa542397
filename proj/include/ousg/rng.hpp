#pragma once

#include <cstdint>
#include <random>

namespace ousg {

using Rng = std::mt19937_64;

// Stream tags keep the seed spaces of unrelated random consumers disjoint.
enum SeedTag : std::uint64_t {
  kSeedInit = 1,   // network initialization, one stream per level
  kSeedTrain = 2,  // training episodes, one stream per (level, episode)
  kSeedTest = 3,   // test episodes, one stream per episode
  kSeedEval = 4,   // post-freeze loss evaluation episodes
  kSeedDemo = 5,   // demo episode
};

// SplitMix64 finalizer; used to mix seed components into one 64-bit state.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ tag);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return s;
}

// Independent generator for stream (master, tag, a, b).
inline Rng seeded_rng(std::uint64_t master, std::uint64_t tag,
                      std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(derive_seed(master, tag, a, b));
}

}  // namespace ousg
