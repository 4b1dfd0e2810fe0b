#pragma once

#include <filesystem>

#include "podc/grid.hpp"

namespace podc {

/// Writes a 16-bit single-channel PNG with raw = round(depth * 256); raw 0
/// marks an invalid pixel (KITTI devkit convention). Depths above
/// 65535/256 m saturate.
void write_depth_png16(const std::filesystem::path& path, const DepthMap& depth);

/// Reads a 16-bit grayscale PNG written by write_depth_png16 (or any
/// non-interlaced baseline equivalent); depth = raw / 256, raw 0 -> invalid.
/// Throws std::runtime_error naming the byte offset of the first malformed
/// structure.
DepthMap read_depth_png16(const std::filesystem::path& path);

/// 16-bit PNG of a unit-interval map (e.g. confidence): raw = round(65535*x).
void write_unit_png16(const std::filesystem::path& path, const Grid<double>& map);

/// Lossless float dump: magic "PODF", little-endian u32 width and height,
/// then row-major little-endian IEEE-754 binary32 samples.
void write_float_map(const std::filesystem::path& path, const Grid<double>& map);

Grid<double> read_float_map(const std::filesystem::path& path);

}  // namespace podc
