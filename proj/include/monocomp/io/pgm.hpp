#pragma once

#include <filesystem>

#include "monocomp/gallery/imaging.hpp"

namespace monocomp::io {

/// Portable graymap output, values rescaled linearly to 0..255 over
/// [min, max] of the image (constant images map to 0).
void write_pgm(const std::filesystem::path& path, const gallery::Image& img, bool binary = false);

/// Reads P2 (ascii) or P5 (8/16-bit binary), rescaled to [0,1].
gallery::Image read_pgm(const std::filesystem::path& path);

}  // namespace monocomp::io
