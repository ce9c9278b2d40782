#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unaah/losses.hpp"

namespace unaah {

enum class UpsampleMode { bilinear, tconv };
enum class AggregateMode { logit_sum, prob_mean };

struct ModelSpec {
    int in_channels = 1;
    int num_classes = 2;
    std::vector<int> stage_channels = {64, 128, 256, 512};
    int num_decoders = 2;
    UpsampleMode upsample = UpsampleMode::bilinear;
    AggregateMode aggregate = AggregateMode::logit_sum;

    int num_stages() const { return int(stage_channels.size()); }
    void validate() const;
};

struct OptimizerConfig {
    std::string name = "adam";  // adam or sgd
    double learning_rate = 1e-3;
    int batch_size = 8;

    void validate() const;
};

struct AugmentConfig {
    bool enabled = true;
    double rotation_min = -180.0;
    double rotation_max = 180.0;
    double flip_prob = 0.5;
    double crop_resize_prob = 0.5;
    double brightness_min = 0.4;  // single-channel (ultrasound-style) images
    double brightness_max = 1.6;
    bool hue_contrast_jitter = true;  // three-channel (stain-style) images
    uint64_t seed = 0;

    void validate() const;
};

struct PatchSpec {
    int patch_size = 512;
    double overlap = 0.5;
    double content_threshold = 0.35;
    // content detector constants: stain mode counts non-white pixels,
    // single-channel mode counts pixels brighter than the background
    double white_luminance = 0.9;
    double min_saturation = 0.05;
    double intensity_threshold = 0.5;

    int stride() const;
    void validate() const;
};

struct SyntheticSpec {
    int image_size = 128;
    int disks_min = 1;
    int disks_max = 1;
    double radius_min = 14.0;
    double radius_max = 24.0;
    double bias_1 = 3.0;   // annotator 1 boundary offset in pixels (+ dilates)
    double bias_2 = -3.0;  // annotator 2
    double jitter_std = 1.0;
    double bg_mean = 0.25;  // image texture distributions
    double bg_std = 0.06;
    double fg_mean = 0.70;
    double fg_std = 0.06;
    int channels = 1;
    int n_images = 250;
    uint64_t seed = 0;

    void validate() const;
};

struct RunConfig {
    uint64_t seed = 0;
    ModelSpec model;
    LossConfig loss;
    OptimizerConfig optimizer;
    int epochs = 30;
    AugmentConfig augmentation;
    int input_size = 224;
    int early_stop_patience = 5;  // epochs without val-dice improvement; 0 = off
    double threshold = 0.5;       // aggregate-probability binarization

    void validate() const;
};

struct ExperimentPlan {
    std::string dataset;  // manifest path
    std::vector<std::string> variants = {"unet1", "unet2", "unaah"};
    std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
    RunConfig run_config;
    std::string output_dir = "experiment_out";
    double train_frac = 0.8;
    double val_frac = 0.0;
    double test_frac = 0.2;
    bool use_manifest_split = false;  // keep the split already in the manifest
    int overlay_count = 8;            // test samples rendered as overlays

    void validate() const;
};

// JSON bindings. Parsers take partial documents (missing keys keep defaults)
// and reject unknown keys; all failures throw ConfigError naming the key.
std::string to_string(UpsampleMode m);
std::string to_string(AggregateMode m);
std::string to_string(LossMode m);
std::string to_string(WeightSchedule s);

RunConfig run_config_from_json_text(const std::string& text);
ExperimentPlan experiment_plan_from_json_text(const std::string& text);
SyntheticSpec synthetic_spec_from_json_text(const std::string& text);
PatchSpec patch_spec_from_json_text(const std::string& text);

RunConfig load_run_config(const std::string& path);
ExperimentPlan load_experiment_plan(const std::string& path);

std::string to_json_text(const RunConfig& cfg);
std::string to_json_text(const ExperimentPlan& plan);
std::string to_json_text(const SyntheticSpec& spec);

}  // namespace unaah
