#pragma once

#include <string>

#include "mri/types.hpp"

namespace mri::io {

// 8-bit grayscale PNG, magnitude normalized to the image's own maximum.
void write_png_gray(const std::string& path, const RealImage& img);

struct PngInfo {
  uint32_t width = 0, height = 0;
  uint8_t bit_depth = 0, color_type = 0;
};

/// Parses the IHDR chunk only (enough for the dimension checks in tests).
PngInfo read_png_info(const std::string& path);

}  // namespace mri::io
