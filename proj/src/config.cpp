#include "unaah/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "unaah/errors.hpp"

using nlohmann::json;

namespace unaah {

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

void ModelSpec::validate() const {
    if (in_channels != 1 && in_channels != 3)
        throw ConfigError("model.in_channels must be 1 or 3");
    if (num_classes < 2) throw ConfigError("model.num_classes must be >= 2");
    if (stage_channels.empty()) throw ConfigError("model.stage_channels must be nonempty");
    for (size_t i = 0; i < stage_channels.size(); ++i) {
        if (stage_channels[i] <= 0) throw ConfigError("model.stage_channels must be positive");
        if (i > 0 && stage_channels[i] <= stage_channels[i - 1])
            throw ConfigError("model.stage_channels must be strictly increasing");
    }
    if (num_decoders < 1) throw ConfigError("model.num_decoders must be >= 1");
}

void OptimizerConfig::validate() const {
    if (name != "adam" && name != "sgd")
        throw ConfigError("optimizer.name must be adam or sgd");
    if (learning_rate <= 0.0) throw ConfigError("optimizer.learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("optimizer.batch_size must be >= 1");
}

void AugmentConfig::validate() const {
    if (rotation_min > rotation_max)
        throw ConfigError("augmentation.rotation range must satisfy min <= max");
    if (flip_prob < 0.0 || flip_prob > 1.0)
        throw ConfigError("augmentation.flip_prob must be in [0,1]");
    if (crop_resize_prob < 0.0 || crop_resize_prob > 1.0)
        throw ConfigError("augmentation.crop_resize_prob must be in [0,1]");
    if (brightness_min <= 0.0 || brightness_max < brightness_min)
        throw ConfigError("augmentation.brightness range must be positive with min <= max");
}

int PatchSpec::stride() const {
    const int s = int(std::lround(patch_size * (1.0 - overlap)));
    return s < 1 ? 1 : s;
}

void PatchSpec::validate() const {
    if (patch_size < 1) throw ConfigError("patches.patch_size must be >= 1");
    if (overlap < 0.0 || overlap >= 1.0) throw ConfigError("patches.overlap must be in [0,1)");
    if (content_threshold < 0.0 || content_threshold > 1.0)
        throw ConfigError("patches.content_threshold must be in [0,1]");
}

void SyntheticSpec::validate() const {
    if (image_size < 16) throw ConfigError("synthetic.image_size must be >= 16");
    if (disks_min < 1 || disks_max < disks_min)
        throw ConfigError("synthetic.disks range must satisfy 1 <= min <= max");
    if (radius_min <= 0.0 || radius_max < radius_min)
        throw ConfigError("synthetic.radius range must satisfy 0 < min <= max");
    const double worst_bias = std::max(std::abs(bias_1), std::abs(bias_2));
    if (radius_min <= worst_bias + 3.0 * jitter_std)
        throw ConfigError("synthetic.radius_min must exceed |bias| + 3*jitter_std");
    if (jitter_std < 0.0) throw ConfigError("synthetic.jitter_std must be >= 0");
    if (bg_std < 0.0 || fg_std < 0.0) throw ConfigError("synthetic texture stds must be >= 0");
    if (channels != 1 && channels != 3) throw ConfigError("synthetic.channels must be 1 or 3");
    if (n_images < 1) throw ConfigError("synthetic.n_images must be >= 1");
    if (radius_max + worst_bias >= image_size / 2.0)
        throw ConfigError("synthetic.radius_max too large for image_size");
}

void RunConfig::validate() const {
    model.validate();
    loss.validate();
    optimizer.validate();
    augmentation.validate();
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (early_stop_patience < 0) throw ConfigError("early_stop_patience must be >= 0");
    if (threshold <= 0.0 || threshold >= 1.0) throw ConfigError("threshold must be in (0,1)");
    if (input_size < 1) throw ConfigError("input_size must be >= 1");
    const int factor = 1 << model.num_stages();
    if (input_size % factor != 0)
        throw ConfigError("input_size must be divisible by 2^stages (" + std::to_string(factor) +
                          ")");
}

void ExperimentPlan::validate() const {
    run_config.validate();
    if (dataset.empty()) throw ConfigError("experiment.dataset manifest path is required");
    if (variants.empty()) throw ConfigError("experiment.variants must be nonempty");
    for (const auto& v : variants)
        if (v != "unet1" && v != "unet2" && v != "unaah")
            throw ConfigError("unknown variant \"" + v + "\" (expected unet1, unet2, unaah)");
    if (seeds.empty()) throw ConfigError("experiment.seeds must be nonempty");
    if (output_dir.empty()) throw ConfigError("experiment.output_dir is required");
    if (!use_manifest_split) {
        const double sum = train_frac + val_frac + test_frac;
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConfigError("experiment split fractions must sum to 1");
        if (train_frac <= 0.0 || test_frac <= 0.0)
            throw ConfigError("experiment needs nonzero train and test fractions");
    }
    if (overlay_count < 0) throw ConfigError("experiment.overlay_count must be >= 0");
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

namespace {

json parse_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(what + ": invalid JSON: " + e.what());
    }
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(ctx + ": expected a JSON object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& ctx) {
    if (!obj.contains(key)) return;
    try {
        out = obj[key].get<T>();
    } catch (const json::exception&) {
        throw ConfigError(ctx + "." + key + ": wrong type");
    }
}

void read_range(const json& obj, const char* key, double& lo, double& hi,
                const std::string& ctx) {
    if (!obj.contains(key)) return;
    const json& v = obj[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(ctx + "." + key + ": expected [low, high]");
    lo = v[0].get<double>();
    hi = v[1].get<double>();
}

template <typename E>
void read_enum(const json& obj, const char* key, E& out,
               std::initializer_list<std::pair<const char*, E>> names, const std::string& ctx) {
    if (!obj.contains(key)) return;
    if (obj[key].is_string()) {
        const std::string s = obj[key].get<std::string>();
        for (const auto& [name, val] : names)
            if (s == name) {
                out = val;
                return;
            }
    }
    std::string opts;
    for (const auto& [name, val] : names) opts += std::string(opts.empty() ? "" : ", ") + name;
    throw ConfigError(ctx + "." + key + ": expected one of " + opts);
}

ModelSpec model_from_json(const json& obj, const std::string& ctx) {
    ModelSpec m;
    check_keys(obj, ctx,
               {"in_channels", "num_classes", "stage_channels", "num_decoders", "upsample",
                "aggregate"});
    read(obj, "in_channels", m.in_channels, ctx);
    read(obj, "num_classes", m.num_classes, ctx);
    read(obj, "stage_channels", m.stage_channels, ctx);
    read(obj, "num_decoders", m.num_decoders, ctx);
    read_enum(obj, "upsample", m.upsample,
              {{"bilinear", UpsampleMode::bilinear}, {"tconv", UpsampleMode::tconv}}, ctx);
    read_enum(obj, "aggregate", m.aggregate,
              {{"logit_sum", AggregateMode::logit_sum}, {"prob_mean", AggregateMode::prob_mean}},
              ctx);
    return m;
}

LossConfig loss_from_json(const json& obj, const std::string& ctx) {
    LossConfig l;
    check_keys(obj, ctx, {"w", "cw", "gamma", "mode", "schedule", "w_clip", "beta", "kappa"});
    read(obj, "w", l.w, ctx);
    read(obj, "cw", l.cw, ctx);
    read(obj, "gamma", l.gamma, ctx);
    read_enum(obj, "mode", l.mode,
              {{"hybrid_ce", LossMode::hybrid_ce}, {"hybrid_focal", LossMode::hybrid_focal}}, ctx);
    read_enum(obj, "schedule", l.schedule,
              {{"fixed", WeightSchedule::fixed},
               {"agreement_init", WeightSchedule::agreement_init},
               {"adaptive", WeightSchedule::adaptive}},
              ctx);
    read_range(obj, "w_clip", l.w_clip_low, l.w_clip_high, ctx);
    read(obj, "beta", l.beta, ctx);
    read(obj, "kappa", l.kappa, ctx);
    return l;
}

OptimizerConfig optimizer_from_json(const json& obj, const std::string& ctx) {
    OptimizerConfig o;
    check_keys(obj, ctx, {"name", "learning_rate", "batch_size"});
    read(obj, "name", o.name, ctx);
    read(obj, "learning_rate", o.learning_rate, ctx);
    read(obj, "batch_size", o.batch_size, ctx);
    return o;
}

AugmentConfig augment_from_json(const json& obj, const std::string& ctx) {
    AugmentConfig a;
    check_keys(obj, ctx,
               {"enabled", "rotation_degrees", "flip_prob", "crop_resize_prob",
                "brightness_range", "hue_contrast_jitter", "seed"});
    read(obj, "enabled", a.enabled, ctx);
    read_range(obj, "rotation_degrees", a.rotation_min, a.rotation_max, ctx);
    read(obj, "flip_prob", a.flip_prob, ctx);
    read(obj, "crop_resize_prob", a.crop_resize_prob, ctx);
    read_range(obj, "brightness_range", a.brightness_min, a.brightness_max, ctx);
    read(obj, "hue_contrast_jitter", a.hue_contrast_jitter, ctx);
    read(obj, "seed", a.seed, ctx);
    return a;
}

RunConfig run_from_json(const json& obj, const std::string& ctx) {
    RunConfig r;
    check_keys(obj, ctx,
               {"seed", "model", "loss", "optimizer", "epochs", "augmentation", "input_size",
                "early_stop_patience", "threshold"});
    read(obj, "seed", r.seed, ctx);
    if (obj.contains("model")) r.model = model_from_json(obj["model"], ctx + ".model");
    if (obj.contains("loss")) r.loss = loss_from_json(obj["loss"], ctx + ".loss");
    if (obj.contains("optimizer"))
        r.optimizer = optimizer_from_json(obj["optimizer"], ctx + ".optimizer");
    read(obj, "epochs", r.epochs, ctx);
    if (obj.contains("augmentation"))
        r.augmentation = augment_from_json(obj["augmentation"], ctx + ".augmentation");
    read(obj, "input_size", r.input_size, ctx);
    read(obj, "early_stop_patience", r.early_stop_patience, ctx);
    read(obj, "threshold", r.threshold, ctx);
    return r;
}

SyntheticSpec synthetic_from_json(const json& obj, const std::string& ctx) {
    SyntheticSpec s;
    check_keys(obj, ctx,
               {"image_size", "disks_per_image", "radius", "annotator_bias", "jitter_std",
                "texture", "channels", "n_images", "seed"});
    read(obj, "image_size", s.image_size, ctx);
    if (obj.contains("disks_per_image")) {
        double lo = s.disks_min, hi = s.disks_max;
        read_range(obj, "disks_per_image", lo, hi, ctx);
        s.disks_min = int(lo);
        s.disks_max = int(hi);
    }
    read_range(obj, "radius", s.radius_min, s.radius_max, ctx);
    read_range(obj, "annotator_bias", s.bias_1, s.bias_2, ctx);
    read(obj, "jitter_std", s.jitter_std, ctx);
    if (obj.contains("texture")) {
        const json& t = obj["texture"];
        check_keys(t, ctx + ".texture", {"bg_mean", "bg_std", "fg_mean", "fg_std"});
        read(t, "bg_mean", s.bg_mean, ctx + ".texture");
        read(t, "bg_std", s.bg_std, ctx + ".texture");
        read(t, "fg_mean", s.fg_mean, ctx + ".texture");
        read(t, "fg_std", s.fg_std, ctx + ".texture");
    }
    read(obj, "channels", s.channels, ctx);
    read(obj, "n_images", s.n_images, ctx);
    read(obj, "seed", s.seed, ctx);
    return s;
}

PatchSpec patch_from_json(const json& obj, const std::string& ctx) {
    PatchSpec p;
    check_keys(obj, ctx,
               {"patch_size", "overlap", "content_threshold", "white_luminance", "min_saturation",
                "intensity_threshold"});
    read(obj, "patch_size", p.patch_size, ctx);
    read(obj, "overlap", p.overlap, ctx);
    read(obj, "content_threshold", p.content_threshold, ctx);
    read(obj, "white_luminance", p.white_luminance, ctx);
    read(obj, "min_saturation", p.min_saturation, ctx);
    read(obj, "intensity_threshold", p.intensity_threshold, ctx);
    return p;
}

ExperimentPlan plan_from_json(const json& obj, const std::string& ctx) {
    ExperimentPlan p;
    check_keys(obj, ctx,
               {"dataset", "variants", "seeds", "run_config", "output_dir", "split",
                "use_manifest_split", "overlay_count"});
    read(obj, "dataset", p.dataset, ctx);
    read(obj, "variants", p.variants, ctx);
    read(obj, "seeds", p.seeds, ctx);
    if (obj.contains("run_config")) p.run_config = run_from_json(obj["run_config"], ctx + ".run_config");
    read(obj, "output_dir", p.output_dir, ctx);
    if (obj.contains("split")) {
        const json& sp = obj["split"];
        check_keys(sp, ctx + ".split", {"train", "val", "test"});
        read(sp, "train", p.train_frac, ctx + ".split");
        read(sp, "val", p.val_frac, ctx + ".split");
        read(sp, "test", p.test_frac, ctx + ".split");
    }
    read(obj, "use_manifest_split", p.use_manifest_split, ctx);
    read(obj, "overlay_count", p.overlay_count, ctx);
    return p;
}

json to_json(const ModelSpec& m) {
    return {{"in_channels", m.in_channels},
            {"num_classes", m.num_classes},
            {"stage_channels", m.stage_channels},
            {"num_decoders", m.num_decoders},
            {"upsample", to_string(m.upsample)},
            {"aggregate", to_string(m.aggregate)}};
}

json to_json(const LossConfig& l) {
    return {{"w", l.w},
            {"cw", l.cw},
            {"gamma", l.gamma},
            {"mode", to_string(l.mode)},
            {"schedule", to_string(l.schedule)},
            {"w_clip", {l.w_clip_low, l.w_clip_high}},
            {"beta", l.beta},
            {"kappa", l.kappa}};
}

json to_json(const RunConfig& r) {
    return {{"seed", r.seed},
            {"model", to_json(r.model)},
            {"loss", to_json(r.loss)},
            {"optimizer",
             {{"name", r.optimizer.name},
              {"learning_rate", r.optimizer.learning_rate},
              {"batch_size", r.optimizer.batch_size}}},
            {"epochs", r.epochs},
            {"augmentation",
             {{"enabled", r.augmentation.enabled},
              {"rotation_degrees", {r.augmentation.rotation_min, r.augmentation.rotation_max}},
              {"flip_prob", r.augmentation.flip_prob},
              {"crop_resize_prob", r.augmentation.crop_resize_prob},
              {"brightness_range", {r.augmentation.brightness_min, r.augmentation.brightness_max}},
              {"hue_contrast_jitter", r.augmentation.hue_contrast_jitter},
              {"seed", r.augmentation.seed}}},
            {"input_size", r.input_size},
            {"early_stop_patience", r.early_stop_patience},
            {"threshold", r.threshold}};
}

}  // namespace

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

std::string to_string(UpsampleMode m) {
    return m == UpsampleMode::bilinear ? "bilinear" : "tconv";
}
std::string to_string(AggregateMode m) {
    return m == AggregateMode::logit_sum ? "logit_sum" : "prob_mean";
}
std::string to_string(LossMode m) {
    return m == LossMode::hybrid_ce ? "hybrid_ce" : "hybrid_focal";
}
std::string to_string(WeightSchedule s) {
    switch (s) {
        case WeightSchedule::fixed: return "fixed";
        case WeightSchedule::agreement_init: return "agreement_init";
        default: return "adaptive";
    }
}

RunConfig run_config_from_json_text(const std::string& text) {
    return run_from_json(parse_text(text, "run config"), "config");
}

ExperimentPlan experiment_plan_from_json_text(const std::string& text) {
    return plan_from_json(parse_text(text, "experiment plan"), "experiment");
}

SyntheticSpec synthetic_spec_from_json_text(const std::string& text) {
    return synthetic_from_json(parse_text(text, "synthetic spec"), "synthetic");
}

PatchSpec patch_spec_from_json_text(const std::string& text) {
    return patch_from_json(parse_text(text, "patch spec"), "patches");
}

namespace {

std::string slurp(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string(what) + ": cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json_text(slurp(path, "run config"));
}

ExperimentPlan load_experiment_plan(const std::string& path) {
    return experiment_plan_from_json_text(slurp(path, "experiment plan"));
}

std::string to_json_text(const RunConfig& cfg) { return to_json(cfg).dump(2); }

std::string to_json_text(const ExperimentPlan& plan) {
    json obj = {{"dataset", plan.dataset},
                {"variants", plan.variants},
                {"seeds", plan.seeds},
                {"run_config", to_json(plan.run_config)},
                {"output_dir", plan.output_dir},
                {"split", {{"train", plan.train_frac}, {"val", plan.val_frac},
                           {"test", plan.test_frac}}},
                {"use_manifest_split", plan.use_manifest_split},
                {"overlay_count", plan.overlay_count}};
    return obj.dump(2);
}

std::string to_json_text(const SyntheticSpec& s) {
    json obj = {{"image_size", s.image_size},
                {"disks_per_image", {s.disks_min, s.disks_max}},
                {"radius", {s.radius_min, s.radius_max}},
                {"annotator_bias", {s.bias_1, s.bias_2}},
                {"jitter_std", s.jitter_std},
                {"texture",
                 {{"bg_mean", s.bg_mean},
                  {"bg_std", s.bg_std},
                  {"fg_mean", s.fg_mean},
                  {"fg_std", s.fg_std}}},
                {"channels", s.channels},
                {"n_images", s.n_images},
                {"seed", s.seed}};
    return obj.dump(2);
}

}  // namespace unaah
