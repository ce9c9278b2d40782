#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unaah/config.hpp"
#include "unaah/manifest.hpp"
#include "unaah/tensor.hpp"
#include "unaah/types.hpp"

namespace unaah {

// Reads images and masks for one split ("train"/"val"/"test", empty = all)
// into memory, in manifest order.
std::vector<AnnotationPair> load_pairs(const DatasetManifest& manifest, const std::string& split);

struct Batch {
    Tensor4<float> x;
    Labels a1, a2;
};

struct BatchItem {
    const AnnotationPair* pair;
    uint64_t index;  // dataset-global position, keys the per-item rng stream
};

// Assembles a training batch: optional augmentation, resize to input_size,
// image to NHWC floats, masks to labels. Each item draws from its own
// counter-based stream, so the result does not depend on worker count.
Batch make_batch(const std::vector<BatchItem>& items, int input_size, int in_channels,
                 const AugmentConfig* aug, uint64_t seed, uint64_t epoch);

}  // namespace unaah
