#pragma once

#include "unaah/config.hpp"
#include "unaah/rng.hpp"
#include "unaah/types.hpp"

namespace unaah {

Raster resize_raster(const Raster& in, int out_h, int out_w);
Mask resize_mask(const Mask& in, int out_h, int out_w);

// Bilinear image, nearest-neighbor masks, square output.
AnnotationPair resize_sample(const AnnotationPair& pair, int size);

// One random geometric transform set (rotation, flips, optional crop+resize)
// applied identically to the image and both masks, then photometric jitter on
// the image alone. The draw order is fixed, so a given rng state always
// produces the same transform.
AnnotationPair augment(const AnnotationPair& pair, const AugmentConfig& cfg, Rng& draw);

}  // namespace unaah
