#include "unaah/experiment.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>

#include "unaah/augment.hpp"
#include "unaah/checkpoint.hpp"
#include "unaah/errors.hpp"
#include "unaah/overlay.hpp"
#include "unaah/png_io.hpp"
#include "unaah/train.hpp"

namespace fs = std::filesystem;

namespace unaah {

namespace {

Stat across_seeds(const std::vector<double>& values) { return stat_of(values); }

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    DatasetManifest manifest = load_manifest(plan.dataset);
    if (!plan.use_manifest_split || manifest.split.empty())
        manifest.split = group_split(manifest, plan.train_frac, plan.val_frac, plan.test_frac,
                                     plan.run_config.seed)
                             .split;

    const std::vector<AnnotationPair> train_items = load_pairs(manifest, "train");
    const std::vector<AnnotationPair> val_items = load_pairs(manifest, "val");
    const std::vector<AnnotationPair> test_items = load_pairs(manifest, "test");
    if (train_items.empty()) throw DataError("training split is empty");
    if (test_items.empty()) throw DataError("test split is empty");

    fs::create_directories(plan.output_dir);

    // per variant, per seed, the reports against annotation 1 and 2
    std::map<std::string, std::vector<std::array<MetricReport, 2>>> reports;
    std::map<std::string, std::string> first_checkpoint;

    for (const std::string& variant : plan.variants) {
        if (!known_variant(variant)) throw ConfigError("unknown variant '" + variant + "'");
        for (uint64_t seed : plan.seeds) {
            const fs::path run_dir =
                fs::path(plan.output_dir) / (variant + "_seed" + std::to_string(seed));
            const TrainResult trained =
                train_model(variant, train_items, val_items, plan.run_config, seed,
                            run_dir.string());
            std::array<MetricReport, 2> scored = {
                evaluate_checkpoint(trained.checkpoint_path, test_items, plan.run_config, 1),
                evaluate_checkpoint(trained.checkpoint_path, test_items, plan.run_config, 2)};
            reports[variant].push_back(std::move(scored));
            if (!first_checkpoint.count(variant))
                first_checkpoint[variant] = trained.checkpoint_path;
        }
    }

    ExperimentResult result;
    for (int annotation = 1; annotation <= 2; ++annotation) {
        for (const std::string& variant : plan.variants) {
            const auto& per_seed = reports.at(variant);
            std::vector<double> d, cd, i, inb;
            for (const auto& pair_reports : per_seed) {
                const MetricReport& r = pair_reports[size_t(annotation - 1)];
                d.push_back(r.dice);
                cd.push_back(r.core_dice.value_or(0.0));
                i.push_back(r.iou);
                inb.push_back(r.iou_nobk.value_or(0.0));
            }
            TableRow row;
            row.annotation = annotation;
            row.model = variant;
            row.n = per_seed.front()[size_t(annotation - 1)].n_items;
            row.dice = across_seeds(d);
            row.core_dice = across_seeds(cd);
            row.iou = across_seeds(i);
            row.iou_nobk = across_seeds(inb);
            result.rows.push_back(row);
        }
    }

    result.csv_path = (fs::path(plan.output_dir) / "table.csv").string();
    result.json_path = (fs::path(plan.output_dir) / "table.json").string();
    write_metrics_csv(result.csv_path, result.rows);
    write_metrics_json(result.json_path, result.rows, plan.seeds);

    // overlays from the first seed's checkpoints
    const int n_overlays = std::min<int>(plan.overlay_count, int(test_items.size()));
    if (n_overlays > 0) {
        const fs::path overlay_dir = fs::path(plan.output_dir) / "overlays";
        fs::create_directories(overlay_dir);
        const std::vector<AnnotationPair> subset(test_items.begin(),
                                                 test_items.begin() + n_overlays);
        std::vector<std::vector<Mask>> preds_by_variant;
        for (const std::string& variant : plan.variants) {
            const CheckpointMeta meta = read_checkpoint_meta(first_checkpoint.at(variant));
            UnaahNet<float> net(meta.spec);
            load_checkpoint(first_checkpoint.at(variant), net);
            RunConfig eval_cfg = plan.run_config;
            eval_cfg.input_size = meta.input_size;
            preds_by_variant.push_back(predict_items(net, subset, eval_cfg));
        }
        char buf[64];
        for (int s = 0; s < n_overlays; ++s) {
            const AnnotationPair sized = resize_sample(subset[size_t(s)],
                                                       plan.run_config.input_size);
            std::vector<Mask> preds;
            for (const auto& vp : preds_by_variant) preds.push_back(vp[size_t(s)]);
            std::snprintf(buf, sizeof(buf), "sample_%03d.png", s);
            write_image_png((overlay_dir / buf).string(), render_overlay(sized, preds));
        }
    }
    return result;
}

}  // namespace unaah
