#pragma once

#include <string>

#include "lanekit/image.hpp"

namespace lanekit {

/// 8-bit grayscale PNG. Float values are clamped to [0, 1] and quantized on
/// write; reads reject anything but gray-8 (the only flavor this project
/// produces).
void write_png_gray(const std::string& path, const Image& image);
Image read_png_gray(const std::string& path);

void write_png_mask(const std::string& path, const Mask& mask);

}  // namespace lanekit
