#pragma once

#include <cstdint>
#include <filesystem>

#include "wva/ccd.hpp"
#include "wva/csv.hpp"
#include "wva/grid.hpp"

namespace wva {

/// 16-bit binary PGM (P5, big-endian samples, maxval 65535).
void write_pgm(const std::filesystem::path& path, const Frame& frame);
/// Reads a P5 PGM (8- or 16-bit) into a frame with the given spec template;
/// rows/cols are taken from the file.
Frame read_pgm(const std::filesystem::path& path, CcdSpec spec = {});

/// Flat binary: 32-byte little-endian header
///   magic "WVAFRM01" | rows u32 | cols u32 | bit_depth u32 | reserved u32 | seed u64
/// followed by rows*cols u16 counts.
void write_frame_binary(const std::filesystem::path& path, const Frame& frame, std::uint64_t seed);
Frame read_frame_binary(const std::filesystem::path& path, std::uint64_t* seed = nullptr);

/// row, counts
void write_marginal_csv(const std::filesystem::path& path, const Frame& frame, const OutputHeader& header);

/// Full matrix, one grid row per line.
void write_intensity_csv(const std::filesystem::path& path, const IntensityMap& map, const OutputHeader& header);
/// Scaled so the maximum maps to 65535.
void write_intensity_pgm(const std::filesystem::path& path, const IntensityMap& map);

}  // namespace wva
