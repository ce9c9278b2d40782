#pragma once

#include <string>

#include "unaah/config.hpp"
#include "unaah/manifest.hpp"

namespace unaah {

// Writes a two-annotator disk dataset under out_dir:
//   images/   textured renderings of the hidden base masks
//   masks1/   annotator 1 (base boundary offset by bias_1 plus jitter)
//   masks2/   annotator 2
//   base/     the hidden truth masks
//   manifest.jsonl, spec.json
// Per-image rng streams make the output byte-deterministic for a given spec.
DatasetManifest generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir);

}  // namespace unaah
