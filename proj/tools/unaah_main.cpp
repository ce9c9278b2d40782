#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "unaah/augment.hpp"
#include "unaah/checkpoint.hpp"
#include "unaah/dataset.hpp"
#include "unaah/errors.hpp"
#include "unaah/experiment.hpp"
#include "unaah/overlay.hpp"
#include "unaah/patches.hpp"
#include "unaah/png_io.hpp"
#include "unaah/report_io.hpp"
#include "unaah/synthetic.hpp"
#include "unaah/train.hpp"

namespace fs = std::filesystem;
using namespace unaah;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Options shared by train and experiment for overriding the run config.
struct RunOverrides {
    std::string config_path;
    int epochs = 0, input_size = 0, batch_size = 0;
    double learning_rate = 0, w = 0, cw = 0, gamma = 0, kappa = 0, beta = 0, threshold = 0;
    std::string loss_mode, schedule, upsample, aggregate;
    std::vector<int> stages;
    int num_decoders = 0, patience = 0;
    bool no_augment = false;
    double rotation_min = 0, rotation_max = 0, flip_prob = 0, crop_resize_prob = 0;
    double brightness_min = 0, brightness_max = 0;
    bool hue_contrast_off = false;
};

void add_run_flags(CLI::App* cmd, RunOverrides& o) {
    cmd->add_option("--config", o.config_path, "run config JSON")->check(CLI::ExistingFile);
    cmd->add_option("--epochs", o.epochs, "training epochs");
    cmd->add_option("--input-size", o.input_size, "network input resolution");
    cmd->add_option("--batch-size", o.batch_size, "items per optimizer step");
    cmd->add_option("--learning-rate", o.learning_rate, "optimizer learning rate");
    cmd->add_option("--loss-w", o.w, "annotator weight for fixed schedule");
    cmd->add_option("--loss-cw", o.cw, "focal class weight");
    cmd->add_option("--loss-gamma", o.gamma, "focal exponent");
    cmd->add_option("--loss-kappa", o.kappa, "adaptive schedule gain");
    cmd->add_option("--loss-beta", o.beta, "agreement-init slope");
    cmd->add_option("--loss-mode", o.loss_mode, "hybrid_ce | hybrid_focal");
    cmd->add_option("--schedule", o.schedule, "fixed | agreement_init | adaptive");
    cmd->add_option("--stages", o.stages, "encoder stage channels");
    cmd->add_option("--num-decoders", o.num_decoders, "decoder count for the multi-head model");
    cmd->add_option("--upsample", o.upsample, "bilinear | tconv");
    cmd->add_option("--aggregate", o.aggregate, "logit_sum | prob_mean");
    cmd->add_option("--patience", o.patience, "early-stop patience (0 disables)");
    cmd->add_option("--threshold", o.threshold, "foreground probability cutoff");
    cmd->add_flag("--no-augment", o.no_augment, "disable training augmentation");
    cmd->add_option("--rotation-min", o.rotation_min, "augment: rotation lower bound (deg)");
    cmd->add_option("--rotation-max", o.rotation_max, "augment: rotation upper bound (deg)");
    cmd->add_option("--flip-prob", o.flip_prob, "augment: per-axis flip probability");
    cmd->add_option("--crop-resize-prob", o.crop_resize_prob, "augment: crop+resize probability");
    cmd->add_option("--brightness-min", o.brightness_min, "augment: brightness gain lower bound");
    cmd->add_option("--brightness-max", o.brightness_max, "augment: brightness gain upper bound");
    cmd->add_flag("--no-hue-contrast", o.hue_contrast_off, "augment: disable hue/contrast jitter");
}

void apply_overrides(const CLI::App* cmd, const RunOverrides& o, RunConfig& cfg) {
    if (cmd->count("--epochs")) cfg.epochs = o.epochs;
    if (cmd->count("--input-size")) cfg.input_size = o.input_size;
    if (cmd->count("--batch-size")) cfg.optimizer.batch_size = o.batch_size;
    if (cmd->count("--learning-rate")) cfg.optimizer.learning_rate = o.learning_rate;
    if (cmd->count("--loss-w")) cfg.loss.w = o.w;
    if (cmd->count("--loss-cw")) cfg.loss.cw = o.cw;
    if (cmd->count("--loss-gamma")) cfg.loss.gamma = o.gamma;
    if (cmd->count("--loss-kappa")) cfg.loss.kappa = o.kappa;
    if (cmd->count("--loss-beta")) cfg.loss.beta = o.beta;
    if (cmd->count("--loss-mode"))
        cfg.loss.mode = o.loss_mode == "hybrid_focal" ? LossMode::hybrid_focal
                        : o.loss_mode == "hybrid_ce"
                            ? LossMode::hybrid_ce
                            : throw ConfigError("unknown loss mode '" + o.loss_mode + "'");
    if (cmd->count("--schedule")) {
        if (o.schedule == "fixed")
            cfg.loss.schedule = WeightSchedule::fixed;
        else if (o.schedule == "agreement_init")
            cfg.loss.schedule = WeightSchedule::agreement_init;
        else if (o.schedule == "adaptive")
            cfg.loss.schedule = WeightSchedule::adaptive;
        else
            throw ConfigError("unknown schedule '" + o.schedule + "'");
    }
    if (cmd->count("--stages")) cfg.model.stage_channels = o.stages;
    if (cmd->count("--num-decoders")) cfg.model.num_decoders = o.num_decoders;
    if (cmd->count("--upsample"))
        cfg.model.upsample = o.upsample == "tconv" ? UpsampleMode::tconv
                             : o.upsample == "bilinear"
                                 ? UpsampleMode::bilinear
                                 : throw ConfigError("unknown upsample mode '" + o.upsample + "'");
    if (cmd->count("--aggregate"))
        cfg.model.aggregate = o.aggregate == "prob_mean" ? AggregateMode::prob_mean
                              : o.aggregate == "logit_sum"
                                  ? AggregateMode::logit_sum
                                  : throw ConfigError("unknown aggregate mode '" + o.aggregate +
                                                      "'");
    if (cmd->count("--patience")) cfg.early_stop_patience = o.patience;
    if (cmd->count("--threshold")) cfg.threshold = o.threshold;
    if (o.no_augment) cfg.augmentation.enabled = false;
    if (cmd->count("--rotation-min")) cfg.augmentation.rotation_min = o.rotation_min;
    if (cmd->count("--rotation-max")) cfg.augmentation.rotation_max = o.rotation_max;
    if (cmd->count("--flip-prob")) cfg.augmentation.flip_prob = o.flip_prob;
    if (cmd->count("--crop-resize-prob")) cfg.augmentation.crop_resize_prob = o.crop_resize_prob;
    if (cmd->count("--brightness-min")) cfg.augmentation.brightness_min = o.brightness_min;
    if (cmd->count("--brightness-max")) cfg.augmentation.brightness_max = o.brightness_max;
    if (o.hue_contrast_off) cfg.augmentation.hue_contrast_jitter = false;
}

std::vector<AnnotationPair> load_split_or_all(const std::string& manifest_path,
                                              const std::string& split) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    std::vector<AnnotationPair> items = load_pairs(manifest, split);
    if (items.empty())
        throw DataError(split.empty() ? "manifest has no entries"
                                      : "split '" + split + "' is empty");
    return items;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-annotator segmentation: shared-encoder network, hybrid losses, "
                 "agreement metrics, and the single-vs-multi-decoder comparison"};
    app.require_subcommand(1);

    uint64_t global_seed = 0;
    bool deterministic = false;
    app.add_option("--seed", global_seed, "override the config seed");
    app.add_flag("--deterministic", deterministic,
                 "fixed-order reductions and counter-based streams (always on; flag kept so "
                 "scripts can state it)");

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic two-annotator dataset");
    std::string gen_config, gen_out = "synthetic_out";
    SyntheticSpec gen_spec;
    gen->add_option("--config", gen_config, "SyntheticSpec JSON")->check(CLI::ExistingFile);
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--image-size", gen_spec.image_size, "square image size");
    gen->add_option("--disks-min", gen_spec.disks_min, "fewest disks per image");
    gen->add_option("--disks-max", gen_spec.disks_max, "most disks per image");
    gen->add_option("--radius-min", gen_spec.radius_min, "smallest disk radius");
    gen->add_option("--radius-max", gen_spec.radius_max, "largest disk radius");
    gen->add_option("--bias1", gen_spec.bias_1, "annotator 1 boundary offset (px)");
    gen->add_option("--bias2", gen_spec.bias_2, "annotator 2 boundary offset (px)");
    gen->add_option("--jitter-std", gen_spec.jitter_std, "per-vertex boundary noise (px)");
    gen->add_option("--bg-mean", gen_spec.bg_mean, "background intensity mean");
    gen->add_option("--bg-std", gen_spec.bg_std, "background intensity std");
    gen->add_option("--fg-mean", gen_spec.fg_mean, "foreground intensity mean");
    gen->add_option("--fg-std", gen_spec.fg_std, "foreground intensity std");
    gen->add_option("--channels", gen_spec.channels, "1 or 3");
    gen->add_option("--n-images", gen_spec.n_images, "dataset size");

    // patches
    auto* pat = app.add_subcommand("patches", "tile an annotated image into filtered patches");
    std::string pat_image, pat_mask1, pat_mask2, pat_out = "patches_out", pat_config;
    std::string pat_group;
    PatchSpec pat_spec;
    pat->add_option("--image", pat_image, "input image PNG")
        ->required()
        ->check(CLI::ExistingFile);
    pat->add_option("--mask1", pat_mask1, "annotator 1 mask PNG")
        ->required()
        ->check(CLI::ExistingFile);
    pat->add_option("--mask2", pat_mask2, "annotator 2 mask PNG")
        ->required()
        ->check(CLI::ExistingFile);
    pat->add_option("--out", pat_out, "output directory");
    pat->add_option("--config", pat_config, "PatchSpec JSON")->check(CLI::ExistingFile);
    pat->add_option("--group", pat_group, "group id recorded for every patch");
    pat->add_option("--patch-size", pat_spec.patch_size, "patch side length");
    pat->add_option("--overlap", pat_spec.overlap, "fractional overlap between patches");
    pat->add_option("--content-threshold", pat_spec.content_threshold,
                    "minimum content fraction");
    pat->add_option("--white-luminance", pat_spec.white_luminance,
                    "luminance above which a stain pixel counts as background");
    pat->add_option("--min-saturation", pat_spec.min_saturation,
                    "saturation below which a stain pixel counts as background");
    pat->add_option("--intensity-threshold", pat_spec.intensity_threshold,
                    "single-channel content cutoff");

    // agreement
    auto* agr = app.add_subcommand("agreement", "inter-annotator metric report");
    std::string agr_data, agr_split, agr_out = "agreement_out";
    agr->add_option("--data", agr_data, "manifest JSONL")->required()->check(CLI::ExistingFile);
    agr->add_option("--split", agr_split, "train | val | test (default: all)");
    agr->add_option("--out", agr_out, "output directory");

    // train
    auto* trn = app.add_subcommand("train", "train one model variant");
    std::string trn_data, trn_variant = "unaah", trn_out = "train_out";
    double trn_val_frac = 0.0;
    RunOverrides trn_over;
    trn->add_option("--data", trn_data, "manifest JSONL")->required()->check(CLI::ExistingFile);
    trn->add_option("--variant", trn_variant, "unet1 | unet2 | unaah");
    trn->add_option("--out", trn_out, "output directory");
    trn->add_option("--val-frac", trn_val_frac,
                    "carve a validation split when the manifest has none");
    add_run_flags(trn, trn_over);

    // evaluate
    auto* evl = app.add_subcommand("evaluate", "score a checkpoint against one annotation set");
    std::string evl_ckpt, evl_data, evl_split = "test", evl_out = "evaluate_out";
    int evl_annotation = 1;
    double evl_threshold = 0.5;
    evl->add_option("--checkpoint", evl_ckpt, "model checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    evl->add_option("--data", evl_data, "manifest JSONL")->required()->check(CLI::ExistingFile);
    evl->add_option("--split", evl_split, "train | val | test | all");
    evl->add_option("--annotation", evl_annotation, "annotation set to score against (1 or 2)")
        ->check(CLI::Range(1, 2));
    evl->add_option("--threshold", evl_threshold, "foreground probability cutoff");
    evl->add_option("--out", evl_out, "output directory");

    // experiment
    auto* exp = app.add_subcommand("experiment", "full single-vs-multi-decoder comparison");
    std::string exp_config, exp_data, exp_out;
    std::vector<uint64_t> exp_seeds;
    std::vector<std::string> exp_variants;
    double exp_train_frac = -1, exp_val_frac = -1, exp_test_frac = -1;
    int exp_overlays = -1;
    RunOverrides exp_over;
    exp->add_option("--config", exp_config, "ExperimentPlan JSON")->check(CLI::ExistingFile);
    exp->add_option("--data", exp_data, "manifest JSONL (overrides plan)");
    exp->add_option("--out", exp_out, "output directory (overrides plan)");
    exp->add_option("--seeds", exp_seeds, "training seeds (overrides plan)");
    exp->add_option("--variants", exp_variants, "model variants (overrides plan)");
    exp->add_option("--train-frac", exp_train_frac, "group fraction for training");
    exp->add_option("--val-frac", exp_val_frac, "group fraction for validation");
    exp->add_option("--test-frac", exp_test_frac, "group fraction for testing");
    exp->add_option("--overlay-count", exp_overlays, "test samples rendered as overlays");
    // run-config overrides share the train flags but live under different names
    exp->add_option("--epochs", exp_over.epochs, "training epochs");
    exp->add_option("--input-size", exp_over.input_size, "network input resolution");
    exp->add_option("--batch-size", exp_over.batch_size, "items per optimizer step");
    exp->add_option("--learning-rate", exp_over.learning_rate, "optimizer learning rate");
    exp->add_flag("--no-augment", exp_over.no_augment, "disable training augmentation");

    // overlay
    auto* ovl = app.add_subcommand("overlay", "render prediction overlays for a checkpoint");
    std::string ovl_ckpt, ovl_data, ovl_split = "test", ovl_out = "overlay_out";
    int ovl_count = 8;
    double ovl_threshold = 0.5;
    ovl->add_option("--checkpoint", ovl_ckpt, "model checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    ovl->add_option("--data", ovl_data, "manifest JSONL")->required()->check(CLI::ExistingFile);
    ovl->add_option("--split", ovl_split, "train | val | test | all");
    ovl->add_option("--count", ovl_count, "samples to render");
    ovl->add_option("--threshold", ovl_threshold, "foreground probability cutoff");
    ovl->add_option("--out", ovl_out, "output directory");

    // lets --seed / --deterministic appear after the subcommand name
    for (CLI::App* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        if (*gen) {
            SyntheticSpec spec = gen_spec;  // defaults plus any explicit flags
            if (!gen_config.empty()) {
                spec = synthetic_spec_from_json_text(slurp(gen_config));
                // explicit flags win over the config file
                if (gen->count("--image-size")) spec.image_size = gen_spec.image_size;
                if (gen->count("--disks-min")) spec.disks_min = gen_spec.disks_min;
                if (gen->count("--disks-max")) spec.disks_max = gen_spec.disks_max;
                if (gen->count("--radius-min")) spec.radius_min = gen_spec.radius_min;
                if (gen->count("--radius-max")) spec.radius_max = gen_spec.radius_max;
                if (gen->count("--bias1")) spec.bias_1 = gen_spec.bias_1;
                if (gen->count("--bias2")) spec.bias_2 = gen_spec.bias_2;
                if (gen->count("--jitter-std")) spec.jitter_std = gen_spec.jitter_std;
                if (gen->count("--bg-mean")) spec.bg_mean = gen_spec.bg_mean;
                if (gen->count("--bg-std")) spec.bg_std = gen_spec.bg_std;
                if (gen->count("--fg-mean")) spec.fg_mean = gen_spec.fg_mean;
                if (gen->count("--fg-std")) spec.fg_std = gen_spec.fg_std;
                if (gen->count("--channels")) spec.channels = gen_spec.channels;
                if (gen->count("--n-images")) spec.n_images = gen_spec.n_images;
            }
            if (app.count("--seed")) spec.seed = global_seed;
            const DatasetManifest manifest = generate_synthetic(spec, gen_out);
            std::printf("wrote %zu samples under %s\n", manifest.entries.size(),
                        gen_out.c_str());
        } else if (*pat) {
            PatchSpec spec =
                pat_config.empty() ? PatchSpec{} : patch_spec_from_json_text(slurp(pat_config));
            if (pat->count("--patch-size")) spec.patch_size = pat_spec.patch_size;
            if (pat->count("--overlap")) spec.overlap = pat_spec.overlap;
            if (pat->count("--content-threshold"))
                spec.content_threshold = pat_spec.content_threshold;
            if (pat->count("--white-luminance")) spec.white_luminance = pat_spec.white_luminance;
            if (pat->count("--min-saturation")) spec.min_saturation = pat_spec.min_saturation;
            if (pat->count("--intensity-threshold"))
                spec.intensity_threshold = pat_spec.intensity_threshold;
            const Raster image = read_image_png(pat_image);
            const Mask m1 = read_mask_png(pat_mask1);
            const Mask m2 = read_mask_png(pat_mask2);
            const std::string group =
                pat_group.empty() ? fs::path(pat_image).stem().string() : pat_group;
            const auto patches = extract_patches(image, m1, m2, spec, group);

            DatasetManifest manifest;
            manifest.root = pat_out;
            for (const char* sub : {"images", "masks1", "masks2"})
                fs::create_directories(fs::path(pat_out) / sub);
            char buf[64];
            for (size_t i = 0; i < patches.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%s_r%04d_c%04d", group.c_str(),
                              patches[i].sample.source_row, patches[i].sample.source_col);
                const std::string name(buf);
                write_image_png((fs::path(pat_out) / "images" / (name + ".png")).string(),
                                patches[i].sample.image);
                write_mask_png((fs::path(pat_out) / "masks1" / (name + ".png")).string(),
                               patches[i].mask_1);
                write_mask_png((fs::path(pat_out) / "masks2" / (name + ".png")).string(),
                               patches[i].mask_2);
                ManifestEntry e;
                e.image = "images/" + name + ".png";
                e.mask1 = "masks1/" + name + ".png";
                e.mask2 = "masks2/" + name + ".png";
                e.group = group;
                manifest.entries.push_back(e);
            }
            save_manifest(manifest, (fs::path(pat_out) / "manifest.jsonl").string());
            std::printf("kept %zu patches under %s\n", patches.size(), pat_out.c_str());
        } else if (*agr) {
            const std::vector<AnnotationPair> items = load_split_or_all(agr_data, agr_split);
            const MetricReport report = agreement_report(items);
            fs::create_directories(agr_out);
            const TableRow row = row_from_report(1, "annotator_2", report);
            write_metrics_csv((fs::path(agr_out) / "agreement.csv").string(), {row});
            write_metrics_json((fs::path(agr_out) / "agreement.json").string(), {row}, {});
            std::printf("%s", metrics_csv_text({row}).c_str());
        } else if (*trn) {
            RunConfig cfg = trn_over.config_path.empty()
                                ? RunConfig{}
                                : load_run_config(trn_over.config_path);
            apply_overrides(trn, trn_over, cfg);
            if (app.count("--seed")) cfg.seed = global_seed;

            DatasetManifest manifest = load_manifest(trn_data);
            if (manifest.split.empty()) {
                if (trn_val_frac > 0.0)
                    manifest = group_split(manifest, 1.0 - trn_val_frac, trn_val_frac, 0.0,
                                           cfg.seed);
                else
                    for (const std::string& g : manifest.group_ids())
                        manifest.split[g] = "train";
            }
            const auto train_items = load_pairs(manifest, "train");
            const auto val_items = load_pairs(manifest, "val");
            const TrainResult result =
                train_model(trn_variant, train_items, val_items, cfg, cfg.seed, trn_out);
            std::printf("trained %s for %zu epochs, checkpoint %s\n", trn_variant.c_str(),
                        result.epochs.size(), result.checkpoint_path.c_str());
        } else if (*evl) {
            const std::string split = evl_split == "all" ? "" : evl_split;
            const std::vector<AnnotationPair> items = load_split_or_all(evl_data, split);
            RunConfig cfg;
            cfg.threshold = evl_threshold;
            const MetricReport report =
                evaluate_checkpoint(evl_ckpt, items, cfg, evl_annotation);
            const CheckpointMeta meta = read_checkpoint_meta(evl_ckpt);
            fs::create_directories(evl_out);
            const TableRow row = row_from_report(evl_annotation, meta.variant, report);
            write_metrics_csv((fs::path(evl_out) / "evaluate.csv").string(), {row});
            write_metrics_json((fs::path(evl_out) / "evaluate.json").string(), {row}, {meta.seed});
            std::printf("%s", metrics_csv_text({row}).c_str());
        } else if (*exp) {
            ExperimentPlan plan = exp_config.empty() ? ExperimentPlan{}
                                                     : load_experiment_plan(exp_config);
            if (exp->count("--data")) plan.dataset = exp_data;
            if (exp->count("--out")) plan.output_dir = exp_out;
            if (exp->count("--seeds")) plan.seeds = exp_seeds;
            if (exp->count("--variants")) plan.variants = exp_variants;
            if (exp->count("--train-frac")) plan.train_frac = exp_train_frac;
            if (exp->count("--val-frac")) plan.val_frac = exp_val_frac;
            if (exp->count("--test-frac")) plan.test_frac = exp_test_frac;
            if (exp->count("--overlay-count")) plan.overlay_count = exp_overlays;
            if (exp->count("--epochs")) plan.run_config.epochs = exp_over.epochs;
            if (exp->count("--input-size")) plan.run_config.input_size = exp_over.input_size;
            if (exp->count("--batch-size"))
                plan.run_config.optimizer.batch_size = exp_over.batch_size;
            if (exp->count("--learning-rate"))
                plan.run_config.optimizer.learning_rate = exp_over.learning_rate;
            if (exp_over.no_augment) plan.run_config.augmentation.enabled = false;
            if (app.count("--seed")) plan.run_config.seed = global_seed;
            const ExperimentResult result = run_experiment(plan);
            std::printf("%s", metrics_csv_text(result.rows).c_str());
            std::printf("table: %s\n", result.csv_path.c_str());
        } else if (*ovl) {
            const std::string split = ovl_split == "all" ? "" : ovl_split;
            const std::vector<AnnotationPair> items = load_split_or_all(ovl_data, split);
            const CheckpointMeta meta = read_checkpoint_meta(ovl_ckpt);
            UnaahNet<float> net(meta.spec);
            load_checkpoint(ovl_ckpt, net);
            RunConfig cfg;
            cfg.input_size = meta.input_size;
            cfg.threshold = ovl_threshold;
            const int count = std::min<int>(ovl_count, int(items.size()));
            const std::vector<AnnotationPair> subset(items.begin(), items.begin() + count);
            const std::vector<Mask> preds = predict_items(net, subset, cfg);
            fs::create_directories(ovl_out);
            char buf[64];
            for (int i = 0; i < count; ++i) {
                const AnnotationPair sized = resize_sample(subset[size_t(i)], cfg.input_size);
                std::snprintf(buf, sizeof(buf), "sample_%03d.png", i);
                write_image_png((fs::path(ovl_out) / buf).string(),
                                render_overlay(sized, {preds[size_t(i)]}));
            }
            std::printf("wrote %d overlays under %s\n", count, ovl_out.c_str());
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DivergenceError& e) {
        std::fprintf(stderr, "training diverged: %s\n", e.what());
        return 4;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
