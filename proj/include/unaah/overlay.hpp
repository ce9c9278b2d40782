#pragma once

#include <string>
#include <vector>

#include "unaah/types.hpp"

namespace unaah {

// Side-by-side panels: input, annotation 1, annotation 2, then the input
// again with one contour per prediction. Always RGB.
Raster render_overlay(const AnnotationPair& pair, const std::vector<Mask>& predictions);

}  // namespace unaah
