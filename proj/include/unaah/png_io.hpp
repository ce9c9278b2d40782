#pragma once

#include <string>

#include "unaah/types.hpp"

namespace unaah {

// Reads an 8- or 16-bit PNG as a 1- or 3-channel raster with values in [0,1]
// (integer samples divided by their max representable value). Palette images
// expand to RGB, alpha is stripped. Throws DataError on anything unreadable.
Raster read_image_png(const std::string& path);

// Reads a single-channel PNG as a binary mask: 0 stays background, any
// nonzero sample becomes foreground. Multi-channel files are rejected.
Mask read_mask_png(const std::string& path);

// Writes an 8-bit PNG (grayscale or RGB depending on channels); values are
// clamped to [0,1] before quantization.
void write_image_png(const std::string& path, const Raster& img);

// Writes a mask as 8-bit grayscale, foreground as 255.
void write_mask_png(const std::string& path, const Mask& mask);

}  // namespace unaah
