#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "unaah/checkpoint.hpp"
#include "unaah/losses.hpp"
#include "unaah/overlay.hpp"
#include "unaah/report_io.hpp"
#include "unaah/train.hpp"

using namespace unaah;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("unaah_harness_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

Mask flat_mask(int h, int w, uint8_t value = 0) {
    Mask m;
    m.height = h;
    m.width = w;
    m.data.assign(size_t(h) * w, value);
    return m;
}

// One bright disk on a dark background; the two annotations differ by
// `shrink` pixels of radius so the annotators disagree in a controlled way.
AnnotationPair disk_pair(int size, int cy, int cx, int r, int shrink = 0) {
    AnnotationPair p;
    p.sample.image = Raster(size, size, 1, 0.2f);
    p.mask_1 = flat_mask(size, size);
    p.mask_2 = flat_mask(size, size);
    const int r2 = r - shrink;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const int d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
            if (d2 <= r * r) {
                p.sample.image.at(y, x, 0) = 0.8f;
                p.mask_1.at(y, x) = 1;
            }
            if (d2 <= r2 * r2) p.mask_2.at(y, x) = 1;
        }
    }
    return p;
}

std::vector<AnnotationPair> disk_set(int n, int size, int shrink = 0) {
    std::vector<AnnotationPair> items;
    for (int i = 0; i < n; ++i) {
        const int r = 3 + i % 3;
        const int cy = r + 1 + (i * 5) % (size - 2 * r - 2);
        const int cx = r + 1 + (i * 7) % (size - 2 * r - 2);
        items.push_back(disk_pair(size, cy, cx, r, shrink));
    }
    return items;
}

RunConfig tiny_run(int input_size, int epochs, double lr) {
    RunConfig cfg;
    cfg.model.stage_channels = {2, 3};
    cfg.model.in_channels = 1;
    cfg.input_size = input_size;
    cfg.epochs = epochs;
    cfg.optimizer.learning_rate = lr;
    cfg.optimizer.batch_size = 2;
    cfg.augmentation.enabled = false;
    cfg.early_stop_patience = 0;
    return cfg;
}

// Minimal parameter holders that satisfy the optimizer's interface.
struct OneTensor {
    std::vector<float> w, g;
    template <typename F>
    void for_each_param(F&& f) {
        f(std::string("t"), w, g);
    }
};

struct TwoTensors {
    std::vector<float> w1{1.f}, g1, w2{1.f}, g2;
    template <typename F>
    void for_each_param(F&& f) {
        f(std::string("a"), w1, g1);
        f(std::string("b"), w2, g2);
    }
};

}  // namespace

TEST_CASE("variant names and their model layouts") {
    CHECK(known_variant("unet1"));
    CHECK(known_variant("unet2"));
    CHECK(known_variant("unaah"));
    CHECK_FALSE(known_variant("unet3"));
    CHECK_FALSE(known_variant(""));

    ModelSpec base;
    base.stage_channels = {2, 3};
    base.num_decoders = 2;
    CHECK(variant_spec("unet1", base).num_decoders == 1);
    CHECK(variant_spec("unet2", base).num_decoders == 1);
    CHECK(variant_spec("unaah", base).num_decoders == 2);

    base.num_decoders = 3;
    CHECK(variant_spec("unaah", base).num_decoders == 3);

    base.num_decoders = 1;
    CHECK_THROWS_AS(variant_spec("unaah", base), ConfigError);
    CHECK_THROWS_AS(variant_spec("resnet", base), ConfigError);
}

TEST_CASE("adam applies bias-corrected steps of size close to the learning rate") {
    // with a constant gradient both moment estimates equal the gradient after
    // bias correction, so every step moves by ~lr regardless of the gradient
    // magnitude
    const double lr = 0.01;
    OneTensor net;
    net.w = {0.5f, -0.25f};
    Adam opt(lr);
    for (int t = 0; t < 4; ++t) {
        net.g = {0.2f, -0.002f};
        opt.step(net);
    }
    CHECK(net.w[0] == doctest::Approx(0.5 - 4 * lr).epsilon(1e-4));
    CHECK(net.w[1] == doctest::Approx(-0.25 + 4 * lr).epsilon(1e-4));
}

TEST_CASE("adam keeps separate moment state per tensor name") {
    TwoTensors net;
    Adam opt(0.1);
    net.g1 = {1.f};
    net.g2 = {-1.f};
    opt.step(net);
    net.g1 = {1.f};
    net.g2 = {-1.f};
    opt.step(net);
    // mirrored gradients, mirrored trajectories
    CHECK(net.w1[0] - 1.f == doctest::Approx(-(net.w2[0] - 1.f)).epsilon(1e-6));
    CHECK(net.w1[0] < 1.f);
    CHECK(net.w2[0] > 1.f);
}

TEST_CASE("adam matches a step-by-step reference") {
    const double lr = 0.003, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    OneTensor net;
    net.w = {0.4f, -1.2f, 0.05f};
    std::vector<double> rw = {0.4f, -1.2f, 0.05f};
    std::vector<double> m(3, 0.0), v(3, 0.0);
    Adam opt(lr);
    for (int t = 1; t <= 7; ++t) {
        net.g.assign(3, 0.f);
        for (int i = 0; i < 3; ++i) net.g[size_t(i)] = float(0.1 * t - 0.15 * i);
        for (int i = 0; i < 3; ++i) {
            const double gi = double(net.g[size_t(i)]);
            m[size_t(i)] = b1 * m[size_t(i)] + (1 - b1) * gi;
            v[size_t(i)] = b2 * v[size_t(i)] + (1 - b2) * gi * gi;
            const double mh = m[size_t(i)] / (1.0 - std::pow(b1, t));
            const double vh = v[size_t(i)] / (1.0 - std::pow(b2, t));
            rw[size_t(i)] -= lr * mh / (std::sqrt(vh) + eps);
        }
        opt.step(net);
    }
    for (int i = 0; i < 3; ++i)
        CHECK(double(net.w[size_t(i)]) == doctest::Approx(rw[size_t(i)]).epsilon(1e-5));
}

TEST_CASE("a vanishing learning rate leaves every parameter at its initialization") {
    TempDir dir;
    const auto items = disk_set(4, 16);
    // small enough that the float update rounds to zero for any weight
    RunConfig cfg = tiny_run(16, 1, 1e-60);
    const uint64_t seed = 5;
    const TrainResult result = train_model("unet1", items, {}, cfg, seed, dir.path.string());
    REQUIRE(result.epochs.size() == 1);

    UnaahNet<float> fresh(variant_spec("unet1", cfg.model));
    fresh.init_parameters(seed);
    UnaahNet<float> trained(variant_spec("unet1", cfg.model));
    load_checkpoint((dir.path / "ckpt_epoch_001.ckpt").string(), trained);

    std::vector<std::vector<float>> a, b;
    fresh.for_each_param([&](const std::string&, std::vector<float>& w, std::vector<float>&) {
        a.push_back(w);
    });
    trained.for_each_param([&](const std::string&, std::vector<float>& w, std::vector<float>&) {
        b.push_back(w);
    });
    CHECK(a == b);
}

TEST_CASE("identical annotations give identical loss terms") {
    TempDir dir;
    auto items = disk_set(4, 16, 0);  // shrink 0: mask_2 equals mask_1
    RunConfig cfg = tiny_run(16, 2, 1e-3);

    SUBCASE("multi-decoder model") {
        const TrainResult r = train_model("unaah", items, {}, cfg, 3, dir.path.string());
        for (const EpochRecord& e : r.epochs) CHECK(e.loss_ce1 == e.loss_ce2);
    }
    SUBCASE("baseline trains against one mask in both slots") {
        auto skewed = disk_set(4, 16, 2);  // annotations differ...
        const TrainResult r = train_model("unet1", skewed, {}, cfg, 3, dir.path.string());
        // ...but the baseline never sees the second one
        for (const EpochRecord& e : r.epochs) CHECK(e.loss_ce1 == e.loss_ce2);
    }
}

TEST_CASE("loss falls over the first epochs on an easy dataset") {
    TempDir dir;
    const auto items = disk_set(12, 32);
    RunConfig cfg = tiny_run(32, 3, 1e-3);
    cfg.model.stage_channels = {4, 8};
    cfg.optimizer.batch_size = 4;
    const TrainResult r = train_model("unet1", items, {}, cfg, 1, dir.path.string());
    REQUIRE(r.epochs.size() == 3);
    CHECK(r.epochs[0].loss_total > r.epochs[1].loss_total);
    CHECK(r.epochs[1].loss_total > r.epochs[2].loss_total);
    CHECK(fs::exists(r.checkpoint_path));

    std::ifstream csv(dir.path / "epochs.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "epoch,loss_total,ce_1,ce_2,w,val_dice_1,val_agg,seconds");
}

TEST_CASE("agreement-derived starting weight") {
    TempDir dir;
    const auto items = disk_set(4, 16, 2);
    RunConfig cfg = tiny_run(16, 1, 1e-3);
    cfg.loss.schedule = WeightSchedule::agreement_init;
    cfg.loss.beta = 0.4;
    const TrainResult r = train_model("unaah", items, {}, cfg, 3, dir.path.string());
    REQUIRE(r.epochs.size() == 1);

    const MetricReport rep = agreement_report(items);
    const double s = 0.5 * (rep.dice + rep.iou);
    CHECK(s < 1.0);  // the shrunken annotation disagrees
    CHECK(r.epochs[0].w_used == doctest::Approx(clip_weight(0.5 + 0.4 * (1.0 - s), cfg.loss)));
}

TEST_CASE("adaptive schedule moves the weight from the previous epoch's decoder dice") {
    TempDir dir;
    const auto items = disk_set(4, 16, 2);
    RunConfig cfg = tiny_run(16, 2, 1e-3);
    cfg.loss.schedule = WeightSchedule::adaptive;
    cfg.loss.kappa = 4.0;
    const TrainResult r = train_model("unaah", items, {}, cfg, 9, dir.path.string());
    REQUIRE(r.epochs.size() == 2);
    CHECK(r.epochs[0].w_used == 0.5);
    REQUIRE(r.epochs[0].val_dice.size() == 2);
    const double expected = adaptive_weight(0.5, r.epochs[0].val_dice[0],
                                            r.epochs[0].val_dice[1], cfg.loss.kappa, cfg.loss);
    CHECK(r.epochs[1].w_used == doctest::Approx(expected));
}

TEST_CASE("non-finite loss stops training with a divergence error") {
    TempDir dir;
    auto items = disk_set(2, 16);
    items[0].sample.image.at(0, 0, 0) = std::numeric_limits<float>::quiet_NaN();
    RunConfig cfg = tiny_run(16, 1, 1e-3);
    cfg.optimizer.batch_size = 1;
    CHECK_THROWS_AS(train_model("unet1", items, {}, cfg, 1, dir.path.string()), DivergenceError);
}

TEST_CASE("training rejects bad inputs up front") {
    TempDir dir;
    const auto items = disk_set(2, 16);
    RunConfig cfg = tiny_run(16, 1, 1e-3);
    CHECK_THROWS_AS(train_model("unet1", {}, {}, cfg, 1, dir.path.string()), DataError);
    cfg.model.aggregate = AggregateMode::prob_mean;
    CHECK_THROWS_AS(train_model("unaah", items, {}, cfg, 1, dir.path.string()), ConfigError);
}

TEST_CASE("early stopping") {
    TempDir dir;
    const auto items = disk_set(4, 16);

    SUBCASE("patience zero runs the full schedule") {
        RunConfig cfg = tiny_run(16, 3, 1e-3);
        const TrainResult r = train_model("unet1", items, {}, cfg, 2, dir.path.string());
        CHECK(r.epochs.size() == 3);
    }
    SUBCASE("stalled validation dice stops before the schedule ends") {
        // no parameter movement: the probe dice can only improve once
        RunConfig cfg = tiny_run(16, 6, 1e-60);
        cfg.early_stop_patience = 2;
        const TrainResult r = train_model("unet1", items, {}, cfg, 2, dir.path.string());
        CHECK(r.epochs.size() >= 3);  // the first epoch always counts as an improvement
        CHECK(r.epochs.size() < 6);
    }
}

TEST_CASE("evaluating the checkpoint reproduces the in-memory evaluation") {
    TempDir dir;
    const auto items = disk_set(6, 16, 1);
    RunConfig cfg = tiny_run(16, 2, 5e-3);
    const TrainResult r = train_model("unet1", items, {}, cfg, 4, dir.path.string());

    const CheckpointMeta meta = read_checkpoint_meta(r.checkpoint_path);
    UnaahNet<float> net(meta.spec);
    load_checkpoint(r.checkpoint_path, net);
    const MetricReport direct = evaluate_pairs(net, items, cfg, 1);
    const MetricReport via_file = evaluate_checkpoint(r.checkpoint_path, items, cfg, 1);

    CHECK(via_file.n_items == 6);
    CHECK(via_file.dice == direct.dice);
    CHECK(via_file.iou == direct.iou);
    CHECK(via_file.dispersion == direct.dispersion);
    CHECK(via_file.dice >= 0.0);
    CHECK(via_file.dice <= 1.0);
}

TEST_CASE("metrics table text is stable") {
    TableRow r1;
    r1.annotation = 1;
    r1.model = "unet1";
    r1.dice = {0.9, 0.01, 5};
    r1.core_dice = {0.85, 0.0, 4};
    r1.iou = {0.8, 0.0, 5};
    r1.iou_nobk = {0.75, 0.0, 4};
    r1.n = 5;
    TableRow r2;
    r2.annotation = 2;
    r2.model = "unaah";
    r2.dice = {0.5, 0.125, 3};
    r2.core_dice = {0.25, 0.0, 2};
    r2.iou = {1.0 / 3.0, 0.0, 3};
    r2.iou_nobk = {0.2, 0.0, 2};
    r2.n = 3;

    const std::string expected =
        "annotation,model,dice,core_dice,iou,iou_nobk,n,std\n"
        "1,unet1,0.900000,0.850000,0.800000,0.750000,5,0.010000\n"
        "2,unaah,0.500000,0.250000,0.333333,0.200000,3,0.125000\n";
    CHECK(metrics_csv_text({r1, r2}) == expected);
}

TEST_CASE("table rows are built from metric reports") {
    MetricReport rep;
    rep.dice = 0.5;
    rep.core_dice = 0.7;
    rep.iou = 0.4;
    rep.iou_nobk = 0.6;
    rep.n_items = 9;
    rep.n_core = 6;
    rep.dispersion = 0.03;
    const TableRow row = row_from_report(2, "unet2", rep);
    CHECK(row.annotation == 2);
    CHECK(row.model == "unet2");
    CHECK(row.n == 9);
    CHECK(row.dice.mean == 0.5);
    CHECK(row.dice.stddev == 0.03);
    CHECK(row.dice.n == 9);
    CHECK(row.core_dice.mean == 0.7);
    CHECK(row.core_dice.n == 6);
    CHECK(row.iou.mean == 0.4);
    CHECK(row.iou_nobk.mean == 0.6);

    // absent filtered metrics are reported as zero over zero items
    MetricReport empty;
    empty.n_items = 3;
    const TableRow zrow = row_from_report(1, "m", empty);
    CHECK(zrow.core_dice.mean == 0.0);
    CHECK(zrow.core_dice.n == 0);
}

TEST_CASE("metrics json carries rows, seeds, and filter definitions") {
    TempDir dir;
    TableRow r1;
    r1.annotation = 1;
    r1.model = "unaah";
    r1.dice = {0.75, 0.05, 10};
    r1.core_dice = {0.8, 0.0, 8};
    r1.iou = {0.6, 0.0, 10};
    r1.iou_nobk = {0.65, 0.0, 8};
    r1.n = 10;
    const std::string path = (dir.path / "table.json").string();
    write_metrics_json(path, {r1}, {1, 2, 3});

    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["seeds"] == nlohmann::json({1, 2, 3}));
    CHECK(doc["filters"].contains("core_dice"));
    CHECK(doc["filters"].contains("iou_nobk"));
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["model"] == "unaah");
    CHECK(doc["rows"][0]["dice"]["mean"] == doctest::Approx(0.75));
    CHECK(doc["rows"][0]["dice"]["std"] == doctest::Approx(0.05));
    CHECK(doc["rows"][0]["dice"]["n"] == 10);
    CHECK(doc["rows"][0]["core_dice"]["n"] == 8);
}

TEST_CASE("overlay layout, colors, and validation") {
    AnnotationPair pair;
    pair.sample.image = Raster(6, 6, 1, 0.3f);
    pair.mask_1 = flat_mask(6, 6);
    pair.mask_2 = flat_mask(6, 6);
    pair.mask_1.at(2, 2) = 1;
    pair.mask_2.at(3, 3) = 1;

    Mask pred = flat_mask(6, 6);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) pred.at(y, x) = 1;

    const Raster canvas = render_overlay(pair, {pred});
    CHECK(canvas.height == 6);
    CHECK(canvas.width == 4 * 6);  // input, two masks, one prediction panel
    CHECK(canvas.channels == 3);

    // panel 0: the grayscale input replicated across channels
    CHECK(canvas.at(0, 0, 0) == 0.3f);
    CHECK(canvas.at(0, 0, 1) == 0.3f);
    CHECK(canvas.at(0, 0, 2) == 0.3f);
    // panels 1 and 2: the annotation masks in white on black
    CHECK(canvas.at(2, 6 + 2, 0) == 1.f);
    CHECK(canvas.at(0, 6 + 0, 0) == 0.f);
    CHECK(canvas.at(3, 12 + 3, 1) == 1.f);
    // panel 3: annotation 1 contour in green, annotation 2 in blue, the
    // prediction in red; (2,2) is interior to the prediction so its contour
    // never overwrites the green marker there
    CHECK(canvas.at(2, 18 + 2, 1) == 1.f);
    CHECK(canvas.at(2, 18 + 2, 0) == 0.15f);
    CHECK(canvas.at(1, 18 + 1, 0) == 1.f);  // prediction corner
    CHECK(canvas.at(1, 18 + 1, 1) == 0.15f);
    CHECK(canvas.at(3, 18 + 3, 0) == 1.f);  // prediction overdraws annotation 2
    CHECK(canvas.at(0, 18 + 0, 0) == 0.3f);  // untouched background shows the image

    Mask wrong = flat_mask(4, 4);
    CHECK_THROWS_AS(render_overlay(pair, {wrong}), DataError);

    // multiple predictions add one panel each
    CHECK(render_overlay(pair, {pred, pred, pred}).width == 6 * 6);
    CHECK(render_overlay(pair, {}).width == 3 * 6);
}

TEST_CASE("rgb overlay input keeps its colors in the image panels") {
    AnnotationPair pair;
    pair.sample.image = Raster(4, 4, 3, 0.f);
    pair.sample.image.at(0, 0, 0) = 0.9f;
    pair.sample.image.at(0, 0, 1) = 0.5f;
    pair.sample.image.at(0, 0, 2) = 0.1f;
    pair.mask_1 = flat_mask(4, 4);
    pair.mask_2 = flat_mask(4, 4);
    const Raster canvas = render_overlay(pair, {});
    CHECK(canvas.at(0, 0, 0) == 0.9f);
    CHECK(canvas.at(0, 0, 1) == 0.5f);
    CHECK(canvas.at(0, 0, 2) == 0.1f);
}
