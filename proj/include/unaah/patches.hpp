#pragma once

#include <vector>

#include "unaah/config.hpp"
#include "unaah/types.hpp"

namespace unaah {

// Anchor offsets along one axis: stride steps from 0, plus a final patch
// snapped to the far edge when the stride does not land there exactly.
std::vector<int> patch_anchors(int dim, int patch, int stride);

// Fraction of pixels that look like content rather than background. RGB
// rasters use the slide heuristic (not near-white: luminance below the
// white cutoff and saturation above the minimum); single-channel rasters
// count pixels brighter than the intensity threshold.
double content_fraction(const Raster& patch, const PatchSpec& spec);

Raster crop_raster(const Raster& image, int top, int left, int size);
Mask crop_mask(const Mask& mask, int top, int left, int size);

// Tile an annotated image into patch pairs, dropping patches under the
// content threshold. Masks are cropped with the same windows.
std::vector<AnnotationPair> extract_patches(const Raster& image, const Mask& mask_1,
                                            const Mask& mask_2, const PatchSpec& spec,
                                            const std::string& group_id = "");

}  // namespace unaah
