#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "unaah/types.hpp"

namespace unaah {

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // population std
    int n = 0;
};

Stat stat_of(const std::vector<double>& xs);

// Overlap metrics on binary masks. Pixel counts are exact integers, so two
// implementations that count the same pixels produce identical doubles.
int64_t intersection_area(const Mask& a, const Mask& b);
int64_t union_area(const Mask& a, const Mask& b);

// 2|a∩b| / (|a|+|b|); 1.0 when both masks are empty. Throws DataError on
// dimension mismatch.
double dice(const Mask& a, const Mask& b);

// |a∩b| / |a∪b|; 1.0 when both masks are empty.
double iou(const Mask& a, const Mask& b);

// For binary masks IoU is determined by Dice: iou = dice / (2 - dice).
double iou_from_dice(double d);

// Aggregate over a list of mask pairs.
//
// dice/iou are means over every pair. core_dice and iou_nobk are means over
// only the pairs where at least one mask is nonempty; they are absent when no
// pair qualifies. dispersion is the population std of the per-pair Dice
// values.
struct MetricReport {
    double dice = 0.0;
    std::optional<double> core_dice;
    double iou = 0.0;
    std::optional<double> iou_nobk;
    int n_items = 0;
    double dispersion = 0.0;
    int n_core = 0;  // pairs passing the nonempty filter
};

using MaskPair = std::pair<const Mask*, const Mask*>;

MetricReport metric_report(const std::vector<MaskPair>& pairs);

inline MetricReport core_dice(const std::vector<MaskPair>& pairs) { return metric_report(pairs); }
inline MetricReport iou_nobk(const std::vector<MaskPair>& pairs) { return metric_report(pairs); }

// Inter-annotator agreement: metric_report over (mask_1, mask_2).
MetricReport agreement_report(const std::vector<AnnotationPair>& dataset);

// Model predictions scored against annotator `annotation_index` (1 or 2).
// Follows the reporting filters used for the annotated-patch statistics:
// core_dice keeps items where either annotator drew something, iou_nobk keeps
// items where either annotator drew something or the prediction is nonempty.
MetricReport prediction_report(const std::vector<Mask>& predictions,
                               const std::vector<AnnotationPair>& dataset, int annotation_index);

}  // namespace unaah
