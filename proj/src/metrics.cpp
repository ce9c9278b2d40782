#include "unaah/metrics.hpp"

#include <omp.h>

#include <cmath>
#include <string>

#include "unaah/errors.hpp"

namespace unaah {

Stat stat_of(const std::vector<double>& xs) {
    Stat s;
    s.n = int(xs.size());
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / double(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / double(xs.size()));
    return s;
}

static void check_dims(const Mask& a, const Mask& b) {
    if (!a.same_shape(b))
        throw DataError("mask dimension mismatch: " + std::to_string(a.width) + "x" +
                        std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                        std::to_string(b.height));
}

int64_t intersection_area(const Mask& a, const Mask& b) {
    check_dims(a, b);
    int64_t n = 0;
    for (size_t i = 0; i < a.data.size(); ++i) n += int64_t(a.data[i] & b.data[i]);
    return n;
}

int64_t union_area(const Mask& a, const Mask& b) {
    check_dims(a, b);
    int64_t n = 0;
    for (size_t i = 0; i < a.data.size(); ++i) n += int64_t(a.data[i] | b.data[i]);
    return n;
}

double dice(const Mask& a, const Mask& b) {
    check_dims(a, b);
    const int64_t denom = int64_t(a.area()) + int64_t(b.area());
    if (denom == 0) return 1.0;
    return 2.0 * double(intersection_area(a, b)) / double(denom);
}

double iou(const Mask& a, const Mask& b) {
    check_dims(a, b);
    const int64_t u = union_area(a, b);
    if (u == 0) return 1.0;
    return double(intersection_area(a, b)) / double(u);
}

double iou_from_dice(double d) { return d / (2.0 - d); }

namespace {

struct PairScores {
    std::vector<double> dice_all, iou_all;
    std::vector<uint8_t> nonempty;  // either mask nonempty
};

PairScores score_pairs(const std::vector<MaskPair>& pairs) {
    PairScores s;
    const int n = int(pairs.size());
    s.dice_all.resize(n);
    s.iou_all.resize(n);
    s.nonempty.resize(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const Mask& a = *pairs[i].first;
        const Mask& b = *pairs[i].second;
        s.dice_all[i] = dice(a, b);
        s.iou_all[i] = iou(a, b);
        s.nonempty[i] = (a.area() > 0 || b.area() > 0) ? 1 : 0;
    }
    return s;
}

MetricReport assemble(const PairScores& s, const std::vector<uint8_t>& nobk_keep) {
    MetricReport r;
    r.n_items = int(s.dice_all.size());
    const Stat d = stat_of(s.dice_all);
    r.dice = d.mean;
    r.dispersion = d.stddev;
    r.iou = stat_of(s.iou_all).mean;
    std::vector<double> core_d, nobk_i;
    for (size_t i = 0; i < s.dice_all.size(); ++i) {
        if (s.nonempty[i]) core_d.push_back(s.dice_all[i]);
        if (nobk_keep[i]) nobk_i.push_back(s.iou_all[i]);
    }
    r.n_core = int(core_d.size());
    if (!core_d.empty()) r.core_dice = stat_of(core_d).mean;
    if (!nobk_i.empty()) r.iou_nobk = stat_of(nobk_i).mean;
    return r;
}

}  // namespace

MetricReport metric_report(const std::vector<MaskPair>& pairs) {
    if (pairs.empty()) throw DataError("metric_report: empty pair list");
    const PairScores s = score_pairs(pairs);
    std::vector<uint8_t> keep(s.nonempty.begin(), s.nonempty.end());
    return assemble(s, keep);
}

MetricReport agreement_report(const std::vector<AnnotationPair>& dataset) {
    if (dataset.empty()) throw DataError("agreement_report: empty dataset");
    std::vector<MaskPair> pairs;
    pairs.reserve(dataset.size());
    for (const auto& p : dataset) pairs.push_back({&p.mask_1, &p.mask_2});
    return metric_report(pairs);
}

MetricReport prediction_report(const std::vector<Mask>& predictions,
                               const std::vector<AnnotationPair>& dataset, int annotation_index) {
    if (dataset.empty()) throw DataError("prediction_report: empty dataset");
    if (predictions.size() != dataset.size())
        throw DataError("prediction_report: " + std::to_string(predictions.size()) +
                        " predictions for " + std::to_string(dataset.size()) + " items");
    if (annotation_index != 1 && annotation_index != 2)
        throw DataError("prediction_report: annotation_index must be 1 or 2");
    const int n = int(dataset.size());
    PairScores s;
    s.dice_all.resize(n);
    s.iou_all.resize(n);
    s.nonempty.resize(n);
    std::vector<uint8_t> nobk(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const Mask& ann =
            annotation_index == 1 ? dataset[size_t(i)].mask_1 : dataset[size_t(i)].mask_2;
        s.dice_all[i] = dice(predictions[size_t(i)], ann);
        s.iou_all[i] = iou(predictions[size_t(i)], ann);
        const bool annotated =
            dataset[size_t(i)].mask_1.area() > 0 || dataset[size_t(i)].mask_2.area() > 0;
        s.nonempty[i] = annotated ? 1 : 0;
        nobk[i] = (annotated || predictions[size_t(i)].area() > 0) ? 1 : 0;
    }
    return assemble(s, nobk);
}

}  // namespace unaah
