#include "unaah/train.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "unaah/augment.hpp"
#include "unaah/checkpoint.hpp"
#include "unaah/errors.hpp"
#include "unaah/losses.hpp"
#include "unaah/rng.hpp"

namespace fs = std::filesystem;

namespace unaah {

namespace {

constexpr uint64_t kShuffleStream = 0x73687566ull;
constexpr uint64_t kAugmentStream = 0x61756721ull;

double dataset_agreement(const std::vector<AnnotationPair>& items) {
    const MetricReport rep = agreement_report(items);
    return 0.5 * (rep.dice + rep.iou);
}

// Dice of each decoder's own thresholded output against its annotation,
// computed in eval mode on the probe items. Baselines own the mask they
// train against.
std::vector<double> decoder_dice(UnaahNet<float>& net, const std::string& variant,
                                 const std::vector<AnnotationPair>& probe, const RunConfig& cfg) {
    const int K = net.spec.num_decoders;
    std::vector<std::vector<double>> scores(static_cast<size_t>(K));
    Tensor4<float> prob;
    for (const AnnotationPair& raw : probe) {
        const AnnotationPair pair = resize_sample(raw, cfg.input_size);
        std::vector<BatchItem> one = {{&pair, 0}};
        const Batch b = make_batch(one, cfg.input_size, net.spec.in_channels, nullptr, 0, 0);
        auto& out = net.forward(b.x, false);
        for (int k = 0; k < K; ++k) {
            kernels::softmax_channels(out.logits[size_t(k)], prob);
            DecoderOutputs<float> view;
            view.aggregate = prob;
            const Mask pred = predict_mask(view, cfg.threshold);
            const bool second = K == 1 ? variant == "unet2" : k % 2 == 1;
            scores[size_t(k)].push_back(dice(pred, second ? pair.mask_2 : pair.mask_1));
        }
    }
    std::vector<double> means(size_t(K), 0.0);
    for (int k = 0; k < K; ++k) means[size_t(k)] = stat_of(scores[size_t(k)]).mean;
    return means;
}

// Dice of the thresholded aggregate against the annotations this variant
// trains on (mean of both for the multi-decoder model). This is the score
// that picks the best checkpoint: the aggregate is what gets shipped, and
// its per-decoder components are individually miscalibrated (each carries
// only part of the summed logits).
double aggregate_dice(UnaahNet<float>& net, const std::string& variant,
                      const std::vector<AnnotationPair>& probe, const RunConfig& cfg) {
    std::vector<double> scores;
    scores.reserve(probe.size());
    for (const AnnotationPair& raw : probe) {
        const AnnotationPair pair = resize_sample(raw, cfg.input_size);
        std::vector<BatchItem> one = {{&pair, 0}};
        const Batch b = make_batch(one, cfg.input_size, net.spec.in_channels, nullptr, 0, 0);
        const Mask pred = predict_mask(net.forward(b.x, false), cfg.threshold);
        if (variant == "unet1")
            scores.push_back(dice(pred, pair.mask_1));
        else if (variant == "unet2")
            scores.push_back(dice(pred, pair.mask_2));
        else
            scores.push_back(0.5 * (dice(pred, pair.mask_1) + dice(pred, pair.mask_2)));
    }
    return stat_of(scores).mean;
}

void write_epochs_csv(const std::string& path, const std::vector<EpochRecord>& records,
                      int decoders) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "epoch,loss_total,ce_1,ce_2,w";
    for (int k = 1; k <= decoders; ++k) out << ",val_dice_" << k;
    out << ",val_agg,seconds\n";
    char buf[64];
    for (const EpochRecord& r : records) {
        out << r.epoch;
        const double cols[4] = {r.loss_total, r.loss_ce1, r.loss_ce2, r.w_used};
        for (double c : cols) {
            std::snprintf(buf, sizeof(buf), ",%.6f", c);
            out << buf;
        }
        for (int k = 0; k < decoders; ++k) {
            const double d = size_t(k) < r.val_dice.size() ? r.val_dice[size_t(k)] : 0.0;
            std::snprintf(buf, sizeof(buf), ",%.6f", d);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.6f", r.val_agg);
        out << buf;
        std::snprintf(buf, sizeof(buf), ",%.3f", r.seconds);
        out << buf << "\n";
    }
}

}  // namespace

bool known_variant(const std::string& variant) {
    return variant == "unet1" || variant == "unet2" || variant == "unaah";
}

ModelSpec variant_spec(const std::string& variant, const ModelSpec& base) {
    if (!known_variant(variant)) throw ConfigError("unknown variant '" + variant + "'");
    ModelSpec spec = base;
    if (variant != "unaah")
        spec.num_decoders = 1;
    else if (spec.num_decoders < 2)
        throw ConfigError("the multi-decoder variant needs num_decoders >= 2");
    spec.validate();
    return spec;
}

TrainResult train_model(const std::string& variant, const std::vector<AnnotationPair>& train_items,
                        const std::vector<AnnotationPair>& val_items, const RunConfig& cfg,
                        uint64_t seed, const std::string& out_dir) {
    cfg.validate();
    if (train_items.empty()) throw DataError("training split is empty");
    if (cfg.model.aggregate != AggregateMode::logit_sum)
        throw ConfigError("training requires logit_sum aggregation");
    fs::create_directories(out_dir);

    const ModelSpec spec = variant_spec(variant, cfg.model);
    const int K = spec.num_decoders;
    UnaahNet<float> net(spec);
    net.init_parameters(seed);
    Adam opt(cfg.optimizer.learning_rate);

    // probe set for per-epoch decoder dice (validation split when present)
    std::vector<AnnotationPair> probe = val_items;
    if (probe.empty()) {
        const size_t cap = std::min<size_t>(train_items.size(), 16);
        probe.assign(train_items.begin(), train_items.begin() + long(cap));
    }

    double w = cfg.loss.w;
    if (cfg.loss.schedule == WeightSchedule::agreement_init) {
        const double s = dataset_agreement(train_items);
        w = clip_weight(0.5 + cfg.loss.beta * (1.0 - s), cfg.loss);
    }

    std::vector<size_t> order(train_items.size());
    std::iota(order.begin(), order.end(), size_t(0));
    const int batch = std::max(1, cfg.optimizer.batch_size);

    TrainResult result;
    double best_probe = -1.0;
    int since_best = 0;
    char name_buf[64];

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng shuffle_rng(mix_stream(mix_stream(seed, kShuffleStream), uint64_t(epoch)));
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[size_t(shuffle_rng.uniform_int(0, int(i) - 1))]);

        double sum_total = 0, sum_ce1 = 0, sum_ce2 = 0;
        int batches = 0;
        for (size_t start = 0; start < order.size(); start += size_t(batch)) {
            const size_t end = std::min(order.size(), start + size_t(batch));
            std::vector<BatchItem> items;
            items.reserve(end - start);
            for (size_t i = start; i < end; ++i)
                items.push_back({&train_items[order[i]], uint64_t(order[i])});
            const AugmentConfig* aug = cfg.augmentation.enabled ? &cfg.augmentation : nullptr;
            const Batch b = make_batch(items, cfg.input_size, spec.in_channels, aug,
                                       mix_stream(seed, kAugmentStream), uint64_t(epoch));

            auto& out = net.forward(b.x, true);
            const Labels& a1 = variant == "unet2" ? b.a2 : b.a1;
            const Labels& a2 = variant == "unet1" ? b.a1 : b.a2;
            Tensor4<float> grad;
            const LossValue loss =
                hybrid_from_logits(out.aggregate_logits, a1, a2, cfg.loss, w, &grad);
            if (!std::isfinite(loss.total))
                throw DivergenceError("non-finite training loss", epoch, batches);

            net.zero_grad();
            std::vector<const Tensor4<float>*> grads(size_t(K), &grad);
            net.backward(grads);
            opt.step(net);

            sum_total += loss.total;
            sum_ce1 += loss.ce_1;
            sum_ce2 += loss.ce_2;
            ++batches;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.loss_total = sum_total / batches;
        rec.loss_ce1 = sum_ce1 / batches;
        rec.loss_ce2 = sum_ce2 / batches;
        rec.w_used = w;
        rec.val_dice = decoder_dice(net, variant, probe, cfg);
        rec.val_agg = aggregate_dice(net, variant, probe, cfg);
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.epochs.push_back(rec);

        CheckpointMeta meta;
        meta.spec = spec;
        meta.seed = seed;
        meta.epoch = epoch;
        meta.input_size = cfg.input_size;
        meta.variant = variant;
        std::snprintf(name_buf, sizeof(name_buf), "ckpt_epoch_%03d.ckpt", epoch);
        save_checkpoint((fs::path(out_dir) / name_buf).string(), net, meta);

        if (rec.val_agg > best_probe + 1e-5) {
            best_probe = rec.val_agg;
            since_best = 0;
            save_checkpoint((fs::path(out_dir) / "model.ckpt").string(), net, meta);
        } else {
            ++since_best;
        }

        if (cfg.loss.schedule == WeightSchedule::adaptive && K >= 2)
            w = adaptive_weight(w, rec.val_dice[0], rec.val_dice[1], cfg.loss.kappa, cfg.loss);

        if (cfg.early_stop_patience > 0 && since_best >= cfg.early_stop_patience) break;
    }

    write_epochs_csv((fs::path(out_dir) / "epochs.csv").string(), result.epochs, K);
    result.checkpoint_path = (fs::path(out_dir) / "model.ckpt").string();
    return result;
}

std::vector<Mask> predict_items(UnaahNet<float>& net, const std::vector<AnnotationPair>& items,
                                const RunConfig& cfg) {
    std::vector<Mask> preds(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        const AnnotationPair pair = resize_sample(items[i], cfg.input_size);
        std::vector<BatchItem> one = {{&pair, 0}};
        const Batch b = make_batch(one, cfg.input_size, net.spec.in_channels, nullptr, 0, 0);
        auto& out = net.forward(b.x, false);
        preds[i] = predict_mask(out, cfg.threshold);
    }
    return preds;
}

MetricReport evaluate_pairs(UnaahNet<float>& net, const std::vector<AnnotationPair>& items,
                            const RunConfig& cfg, int annotation_index) {
    if (items.empty()) throw DataError("evaluation split is empty");
    std::vector<AnnotationPair> sized(items.size());
    for (size_t i = 0; i < items.size(); ++i) sized[i] = resize_sample(items[i], cfg.input_size);
    const std::vector<Mask> preds = predict_items(net, items, cfg);
    return prediction_report(preds, sized, annotation_index);
}

MetricReport evaluate_checkpoint(const std::string& checkpoint_path,
                                 const std::vector<AnnotationPair>& items, const RunConfig& cfg,
                                 int annotation_index) {
    const CheckpointMeta meta = read_checkpoint_meta(checkpoint_path);
    UnaahNet<float> net(meta.spec);
    load_checkpoint(checkpoint_path, net);
    RunConfig eval_cfg = cfg;
    eval_cfg.input_size = meta.input_size;
    return evaluate_pairs(net, items, eval_cfg, annotation_index);
}

}  // namespace unaah
