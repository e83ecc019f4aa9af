#pragma once

#include <cstdint>
#include <random>

namespace wva {

using Rng = std::mt19937_64;

/// Stream families. Each simulation stage draws from its own family so that
/// adding frames to one stage never perturbs another.
enum class StreamBlock : std::uint64_t {
  kCalibration = 1,
  kMeasurement = 2,
  kNoise = 3,
  kTrial = 4,
};

/// SplitMix64 finaliser; good avalanche, used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for substream (master, block, index). Deterministic and independent
/// of call order or thread schedule.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t block, std::uint64_t index) noexcept;

inline std::uint64_t stream_seed(std::uint64_t master, StreamBlock block, std::uint64_t index) noexcept {
  return stream_seed(master, static_cast<std::uint64_t>(block), index);
}

inline Rng make_stream(std::uint64_t master, StreamBlock block, std::uint64_t index) {
  return Rng(stream_seed(master, block, index));
}

}  // namespace wva
