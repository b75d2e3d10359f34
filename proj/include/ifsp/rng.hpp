#pragma once

#include <cstdint>

#include <random>

namespace ifsp {

// Deterministic random source identified by (seed, stream_index).
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// fixed by the C++ standard, so recorded seeds replay identically on every
// conforming platform, forever. Do not swap the engine or the seeding
// formula: serialized run headers promise replayability.
//
// Stream separation: the engine seed is
//   splitmix64(seed ^ (0x9E3779B97F4A7C15 * (stream_index + 1)))
// which spreads any (seed, stream) lattice over the full 64-bit space.
// Distinct stream indices give streams with no shared prefix in practice;
// batch code hands stream j to sample j so each sample has a stable identity
// independent of scheduling.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  // One 64-bit word from the engine.
  std::uint64_t next_u64() { return engine_(); }

  // Uniform draw in [0,1) with 53 random bits (the top bits of one word).
  double uniform();

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace ifsp
