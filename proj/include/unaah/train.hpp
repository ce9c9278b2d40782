#pragma once

#include <cmath>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "unaah/config.hpp"
#include "unaah/dataset.hpp"
#include "unaah/metrics.hpp"
#include "unaah/model.hpp"

namespace unaah {

// Adaptive-moment gradient descent over the network's named tensors.
// Moment buffers are kept in double so update order never feeds back
// into the accumulators.
class Adam {
public:
    explicit Adam(double lr) : lr_(lr) {}

    template <typename Net>
    void step(Net& net) {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, double(t_));
        const double bc2 = 1.0 - std::pow(beta2_, double(t_));
        net.for_each_param([&](const std::string& name, auto& w, auto& g) {
            auto& [m, v] = state_[name];
            if (m.size() != w.size()) {
                m.assign(w.size(), 0.0);
                v.assign(w.size(), 0.0);
            }
            using WT = std::decay_t<decltype(w[0])>;
            for (size_t i = 0; i < w.size(); ++i) {
                const double gi = double(g[i]);
                m[i] = beta1_ * m[i] + (1.0 - beta1_) * gi;
                v[i] = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
                w[i] -= WT(lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps_));
            }
        });
    }

private:
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    int64_t t_ = 0;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> state_;
};

struct EpochRecord {
    int epoch = 0;  // 1-based
    double loss_total = 0, loss_ce1 = 0, loss_ce2 = 0;
    double w_used = 0.5;
    std::vector<double> val_dice;  // each decoder's own output vs its annotation
    double val_agg = 0;            // aggregate vs the variant's training annotations
    double seconds = 0;
};

struct TrainResult {
    std::vector<EpochRecord> epochs;
    std::string checkpoint_path;  // epoch with the best aggregate validation dice
};

// Known experiment arms: the two single-annotation baselines and the
// multi-decoder model.
bool known_variant(const std::string& variant);

// Model layout for one arm: baselines collapse to a single decoder.
ModelSpec variant_spec(const std::string& variant, const ModelSpec& base);

// Trains one model. Baselines see their own annotation in both loss slots,
// which reduces the hybrid loss to a plain (or focal) CE against that mask.
// Writes per-epoch checkpoints and epochs.csv under out_dir.
TrainResult train_model(const std::string& variant, const std::vector<AnnotationPair>& train_items,
                        const std::vector<AnnotationPair>& val_items, const RunConfig& cfg,
                        uint64_t seed, const std::string& out_dir);

// Scores aggregate predictions against annotation 1 or 2 at the model's
// working resolution.
MetricReport evaluate_pairs(UnaahNet<float>& net, const std::vector<AnnotationPair>& items,
                            const RunConfig& cfg, int annotation_index);

MetricReport evaluate_checkpoint(const std::string& checkpoint_path,
                                 const std::vector<AnnotationPair>& items, const RunConfig& cfg,
                                 int annotation_index);

// Binarized aggregate predictions for a list of items, resized pairs first.
std::vector<Mask> predict_items(UnaahNet<float>& net, const std::vector<AnnotationPair>& items,
                                const RunConfig& cfg);

}  // namespace unaah
