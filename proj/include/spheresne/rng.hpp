#pragma once

#include <cstdint>
#include <random>

namespace spheresne {

// Named sub-streams of a master seed. Every sampling operation derives its
// own generator from (seed, stream) so that adding a consumer never shifts
// the draws seen by another.
enum class RngStream : std::uint64_t {
  kUniformSphere = 1,
  kVmfSampler = 2,
  kCenters = 3,
  kClusterBase = 100,   // cluster c uses kClusterBase + c
  kEmbedInit = 200,
  kStepPerturb = 300,   // iteration t uses kStepPerturb + t
  kBenchCellBase = 1000,  // bench cell index offsets from here
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic generator for (seed, stream). Streams with distinct ids are
// decorrelated by hashing before seeding.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{splitmix64(seed ^ splitmix64(stream)),
                    splitmix64(stream ^ 0xda3e39cb94b95bdbULL), seed, stream};
  return std::mt19937_64(seq);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream,
                                std::uint64_t offset = 0) {
  return make_rng(seed, static_cast<std::uint64_t>(stream) + offset);
}

}  // namespace spheresne
