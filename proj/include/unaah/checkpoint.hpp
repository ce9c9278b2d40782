#pragma once

#include <cstdint>
#include <string>

#include "unaah/config.hpp"
#include "unaah/model.hpp"

namespace unaah {

struct CheckpointMeta {
    ModelSpec spec;
    uint64_t seed = 0;
    int epoch = 0;
    int input_size = 0;
    std::string variant;  // unet1 | unet2 | unaah | ""
};

// Versioned binary container: magic, JSON header (format version, ModelSpec
// echo, seed/epoch/variant, tensor directory), then raw float32 blobs in
// directory order.
void save_checkpoint(const std::string& path, UnaahNet<float>& net, const CheckpointMeta& meta);

// Header only; use it to construct a matching net before loading parameters.
CheckpointMeta read_checkpoint_meta(const std::string& path);

// Loads parameters into an existing net. A spec mismatch or a tensor
// name/size mismatch raises DataError naming the first offending key.
CheckpointMeta load_checkpoint(const std::string& path, UnaahNet<float>& net);

}  // namespace unaah
