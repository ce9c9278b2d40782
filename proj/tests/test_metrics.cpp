#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "unaah/metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "unaah/errors.hpp"
#include "unaah/rng.hpp"

using namespace unaah;

namespace {

Mask block_mask(int h, int w, int y0, int x0, int bh, int bw) {
    Mask m(h, w);
    for (int y = y0; y < y0 + bh; ++y)
        for (int x = x0; x < x0 + bw; ++x) m.at(y, x) = 1;
    return m;
}

}  // namespace

TEST_CASE("dice and iou on hand-counted masks") {
    // 2x2 blocks of area 4 overlapping in a 2x1 strip
    const Mask a = block_mask(4, 4, 0, 0, 2, 2);
    const Mask b = block_mask(4, 4, 0, 1, 2, 2);
    CHECK(dice(a, b) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK(dice(a, a) == 1.0);
    CHECK(iou(a, a) == 1.0);

    const Mask c = block_mask(4, 4, 2, 2, 2, 2);  // disjoint from a
    CHECK(dice(a, c) == 0.0);
    CHECK(iou(a, c) == 0.0);

    const Mask e1(4, 4), e2(4, 4);
    CHECK(dice(e1, e2) == 1.0);
    CHECK(iou(e1, e2) == 1.0);

    const Mask other(4, 5);
    CHECK_THROWS_AS(dice(a, other), DataError);
    CHECK_THROWS_AS(iou(a, other), DataError);
}

TEST_CASE("random masks: oracle equivalence, symmetry, identity, range") {
    Rng rng(2024);
    for (int t = 0; t < 1000; ++t) {
        // sweep densities so empty and near-full masks both occur
        const double p1 = rng.uniform(0.0, 1.0) < 0.1 ? 0.0 : rng.uniform(0.0, 1.0);
        const double p2 = rng.uniform(0.0, 1.0) < 0.1 ? 0.0 : rng.uniform(0.0, 1.0);
        const Mask a = oracle::random_mask(rng, 16, 16, p1);
        const Mask b = oracle::random_mask(rng, 16, 16, p2);

        const double d = dice(a, b);
        const double i = iou(a, b);
        CHECK(d == oracle::dice(a, b));
        CHECK(i == oracle::iou(a, b));
        CHECK(d == dice(b, a));
        CHECK(i == iou(b, a));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(i >= 0.0);
        CHECK(i <= 1.0);
        CHECK(std::abs(i - iou_from_dice(d)) < 1e-12);
    }
}

TEST_CASE("metric_report filtering") {
    const Mask empty(4, 4);
    const Mask a = block_mask(4, 4, 0, 0, 2, 2);
    const Mask b = block_mask(4, 4, 0, 1, 2, 2);

    SUBCASE("all pairs empty: filtered metrics absent, plain means 1.0") {
        std::vector<MaskPair> pairs = {{&empty, &empty}, {&empty, &empty}, {&empty, &empty}};
        const MetricReport r = metric_report(pairs);
        CHECK(r.dice == 1.0);
        CHECK(r.iou == 1.0);
        CHECK(r.n_items == 3);
        CHECK(!r.core_dice.has_value());
        CHECK(!r.iou_nobk.has_value());
    }

    SUBCASE("empty-empty pairs dilute dice but not core_dice") {
        std::vector<MaskPair> pairs = {{&empty, &empty}, {&a, &b}};
        const MetricReport r = metric_report(pairs);
        CHECK(r.dice == doctest::Approx(0.75).epsilon(1e-15));
        REQUIRE(r.core_dice.has_value());
        CHECK(*r.core_dice == doctest::Approx(0.5).epsilon(1e-15));
        REQUIRE(r.iou_nobk.has_value());
        CHECK(*r.iou_nobk == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(r.n_core == 1);
        // dispersion: population std of dice values {1.0, 0.5}
        CHECK(r.dispersion == doctest::Approx(0.25).epsilon(1e-12));
    }

    SUBCASE("all pairs nonempty: core equals plain mean") {
        std::vector<MaskPair> pairs = {{&a, &b}, {&a, &a}};
        const MetricReport r = metric_report(pairs);
        REQUIRE(r.core_dice.has_value());
        CHECK(*r.core_dice == r.dice);
        REQUIRE(r.iou_nobk.has_value());
        CHECK(*r.iou_nobk == r.iou);
    }

    SUBCASE("empty list rejected") {
        std::vector<MaskPair> none;
        CHECK_THROWS_AS(metric_report(none), DataError);
    }
}

TEST_CASE("mostly-empty datasets score higher unfiltered than filtered") {
    // 81 of 100 pairs are empty-empty and score a perfect 1.0
    Rng rng(7);
    std::vector<Mask> store;
    store.reserve(200);
    std::vector<MaskPair> pairs;
    const Mask empty(8, 8);
    for (int i = 0; i < 81; ++i) pairs.push_back({&empty, &empty});
    for (int i = 0; i < 19; ++i) {
        store.push_back(oracle::random_mask(rng, 8, 8, 0.4));
        store.push_back(oracle::random_mask(rng, 8, 8, 0.4));
        const Mask& a = store[store.size() - 2];
        const Mask& b = store[store.size() - 1];
        if (a.area() == 0 && b.area() == 0) continue;
        pairs.push_back({&a, &b});
    }
    const MetricReport r = metric_report(pairs);
    REQUIRE(r.core_dice.has_value());
    CHECK(r.dice > *r.core_dice);
    REQUIRE(r.iou_nobk.has_value());
    CHECK(r.iou > *r.iou_nobk);
}

TEST_CASE("agreement_report over annotation pairs") {
    AnnotationPair p1, p2;
    p1.mask_1 = block_mask(4, 4, 0, 0, 2, 2);
    p1.mask_2 = p1.mask_1;
    p2.mask_1 = Mask(4, 4);
    p2.mask_2 = Mask(4, 4);
    const MetricReport r = agreement_report({p1, p2});
    CHECK(r.dice == 1.0);
    CHECK(r.iou == 1.0);
    REQUIRE(r.core_dice.has_value());
    CHECK(*r.core_dice == 1.0);
    REQUIRE(r.iou_nobk.has_value());
    CHECK(*r.iou_nobk == 1.0);
    CHECK(r.dispersion == 0.0);
    CHECK_THROWS_AS(agreement_report({}), DataError);
}

TEST_CASE("prediction_report filters") {
    const Mask empty(4, 4);
    const Mask a = block_mask(4, 4, 0, 0, 2, 2);
    const Mask b = block_mask(4, 4, 0, 1, 2, 2);

    // item 1: annotated, prediction matches annotator 1 exactly
    AnnotationPair i1;
    i1.mask_1 = a;
    i1.mask_2 = b;
    // item 2: nothing annotated, model hallucinates a block
    AnnotationPair i2;
    i2.mask_1 = empty;
    i2.mask_2 = empty;
    // item 3: nothing anywhere
    AnnotationPair i3 = i2;

    const std::vector<Mask> preds = {a, b, empty};
    const MetricReport r = prediction_report(preds, {i1, i2, i3}, 1);

    // dice vs annotator 1: {1.0, 0.0 (pred nonempty vs empty), 1.0 (both empty)}
    CHECK(r.dice == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // core filter keeps only the annotated item
    REQUIRE(r.core_dice.has_value());
    CHECK(*r.core_dice == 1.0);
    CHECK(r.n_core == 1);
    // nobk filter also keeps the hallucinated item (prediction nonempty)
    REQUIRE(r.iou_nobk.has_value());
    CHECK(*r.iou_nobk == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(prediction_report(preds, {i1, i2}, 1), DataError);
    CHECK_THROWS_AS(prediction_report(preds, {i1, i2, i3}, 0), DataError);
}

TEST_CASE("stat_of") {
    const Stat s = stat_of({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.stddev == doctest::Approx(std::sqrt(1.25)));
    CHECK(s.n == 4);
    CHECK(stat_of({}).n == 0);
}
