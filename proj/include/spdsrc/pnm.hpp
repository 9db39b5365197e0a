#pragma once

#include <filesystem>

#include "spdsrc/features.hpp"

namespace spdsrc {

/// Read a binary PGM (P5) or PPM (P6) file with 8-bit samples; the max-value
/// field must be 255. P5 yields a 1-channel image, P6 a 3-channel one.
RasterImage read_pnm(const std::filesystem::path& path);

/// Write a binary PGM/PPM file (P5 for 1 channel, P6 for 3); pixel values
/// are rounded and clamped to [0, 255].
void write_pnm(const std::filesystem::path& path, const RasterImage& img);

}  // namespace spdsrc
