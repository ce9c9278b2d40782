// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL]
// line; the process exits nonzero if any criterion fails.
//
// Usage: acceptance <path-to-cli-binary> [criterion ids...]

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "unaah/dataset.hpp"
#include "unaah/losses.hpp"
#include "unaah/manifest.hpp"
#include "unaah/metrics.hpp"
#include "unaah/model.hpp"
#include "unaah/patches.hpp"
#include "unaah/rng.hpp"
#include "unaah/synthetic.hpp"
#include "unaah/train.hpp"

using namespace unaah;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

// pinned tolerances and budgets
constexpr double kGradRelTol = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr int kGradInstances = 100;
constexpr double kGradBudget = 30.0;  // seconds
constexpr double kMetricTol = 1e-12;
constexpr int kMetricInstances = 1000;
constexpr double kAlgebraTol = 1e-12;
constexpr double kAffineTol = 1e-10;
constexpr double kTableTol = 1e-6;
constexpr double kExperimentBudget = 900.0;  // seconds
constexpr int kExperimentEpochs = 3;         // budget allows up to 15
constexpr int kExperimentSeeds = 5;

std::string g_cli;   // path to the command line binary
fs::path g_work;     // scratch directory

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. analytic loss gradients match central finite differences
// ---------------------------------------------------------------------------
Outcome criterion_gradients() {
    const auto t0 = clock_type::now();
    Rng rng(101);
    double worst = 0.0;
    for (int inst = 0; inst < kGradInstances; ++inst) {
        Tensor4<double> z;
        z.resize(1, 8, 8, 2);
        for (auto& v : z.v) v = rng.normal(0.0, 2.0);
        Labels a1, a2;
        a1.n = a2.n = 1;
        a1.h = a2.h = 8;
        a1.w = a2.w = 8;
        a1.v.resize(64);
        a2.v.resize(64);
        for (auto& v : a1.v) v = rng.bernoulli(0.5) ? 1 : 0;
        for (auto& v : a2.v) v = rng.bernoulli(0.5) ? 1 : 0;

        LossConfig cfg;
        cfg.mode = inst % 2 == 0 ? LossMode::hybrid_ce : LossMode::hybrid_focal;
        cfg.cw = rng.uniform(0.1, 2.0);
        cfg.gamma = rng.uniform(0.0, 3.0);
        const double w = rng.uniform(0.0, 1.0);

        Tensor4<double> grad;
        hybrid_from_logits(z, a1, a2, cfg, w, &grad);

        for (size_t i = 0; i < z.v.size(); ++i) {
            const double keep = z.v[i];
            z.v[i] = keep + kGradStep;
            const double up = hybrid_from_logits(z, a1, a2, cfg, w, nullptr).total;
            z.v[i] = keep - kGradStep;
            const double dn = hybrid_from_logits(z, a1, a2, cfg, w, nullptr).total;
            z.v[i] = keep;
            const double fd = (up - dn) / (2.0 * kGradStep);
            const double an = grad.v[i];
            const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-8});
            worst = std::max(worst, rel);
        }
    }
    const double secs = seconds_since(t0);
    Outcome out;
    out.pass = worst < kGradRelTol && secs < kGradBudget;
    out.detail = fmt("max relative error %.3g (tol %.0e), %d instances in %.2f s (budget %.0f s)",
                     worst, kGradRelTol, kGradInstances, secs, kGradBudget);
    return out;
}

// ---------------------------------------------------------------------------
// 2. metrics match a brute-force pixel-counting oracle
// ---------------------------------------------------------------------------
Outcome criterion_metric_oracle() {
    Rng rng(202);
    double worst = 0.0, worst_id = 0.0;
    for (int i = 0; i < kMetricInstances; ++i) {
        const double pf_a = i % 25 == 0 ? 0.0 : rng.uniform(0.02, 0.7);
        const double pf_b = i % 25 == 0 ? 0.0 : rng.uniform(0.02, 0.7);
        const Mask a = oracle::random_mask(rng, 16, 16, pf_a);
        const Mask b = oracle::random_mask(rng, 16, 16, pf_b);
        const double d = dice(a, b);
        const double j = iou(a, b);
        worst = std::max(worst, std::abs(d - oracle::dice(a, b)));
        worst = std::max(worst, std::abs(j - oracle::iou(a, b)));
        worst_id = std::max(worst_id, std::abs(j - iou_from_dice(d)));
    }

    // the filtered report means against the same oracle
    std::vector<AnnotationPair> pairs(160);
    std::vector<Mask> preds(160);
    for (size_t i = 0; i < pairs.size(); ++i) {
        const double pf = i % 8 == 0 ? 0.0 : 0.3;
        pairs[i].sample.image = Raster(16, 16, 1, 0.5f);
        pairs[i].mask_1 = oracle::random_mask(rng, 16, 16, pf);
        pairs[i].mask_2 = oracle::random_mask(rng, 16, 16, pf);
        preds[i] = oracle::random_mask(rng, 16, 16, i % 8 == 0 ? 0.0 : 0.3);
    }
    const MetricReport rep = prediction_report(preds, pairs, 1);
    double sum_d = 0, sum_j = 0, sum_core = 0, sum_nobk = 0;
    int n_core = 0, n_nobk = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
        const double d = oracle::dice(preds[i], pairs[i].mask_1);
        const double j = oracle::iou(preds[i], pairs[i].mask_1);
        sum_d += d;
        sum_j += j;
        const bool drawn = pairs[i].mask_1.area() > 0 || pairs[i].mask_2.area() > 0;
        if (drawn) {
            sum_core += d;
            ++n_core;
        }
        if (drawn || preds[i].area() > 0) {
            sum_nobk += j;
            ++n_nobk;
        }
    }
    double worst_rep = std::abs(rep.dice - sum_d / double(pairs.size()));
    worst_rep = std::max(worst_rep, std::abs(rep.iou - sum_j / double(pairs.size())));
    worst_rep = std::max(worst_rep, std::abs(rep.core_dice.value() - sum_core / n_core));
    worst_rep = std::max(worst_rep, std::abs(rep.iou_nobk.value() - sum_nobk / n_nobk));

    Outcome out;
    out.pass = worst <= kMetricTol && worst_id <= kMetricTol && worst_rep <= kMetricTol;
    out.detail = fmt("max |metric - oracle| %.3g, |iou - d/(2-d)| %.3g, report means %.3g "
                     "(tol %.0e, %d pairs)",
                     worst, worst_id, worst_rep, kMetricTol, kMetricInstances);
    return out;
}

// ---------------------------------------------------------------------------
// 3. loss algebra: reductions, swap symmetry, affinity in w
// ---------------------------------------------------------------------------
Outcome criterion_loss_algebra() {
    Rng rng(303);
    double worst_red = 0.0, worst_focal = 0.0, worst_swap = 0.0, worst_aff = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        Tensor4<double> p;
        p.resize(1, 8, 8, 2);
        for (size_t i = 0; i < 64; ++i) {
            const double q = rng.uniform(1e-4, 1.0 - 1e-4);
            p.v[2 * i] = q;
            p.v[2 * i + 1] = 1.0 - q;
        }
        Labels a1, a2;
        a1.n = a2.n = 1;
        a1.h = a2.h = 8;
        a1.w = a2.w = 8;
        a1.v.resize(64);
        a2.v.resize(64);
        for (auto& v : a1.v) v = rng.bernoulli(0.5) ? 1 : 0;
        for (auto& v : a2.v) v = rng.bernoulli(0.5) ? 1 : 0;
        const double w = rng.uniform(0.05, 0.95);

        // w = 1 leaves only the first annotation's cross-entropy
        worst_red = std::max(worst_red,
                             std::abs(hybrid_ce(p, a1, a2, 1.0).total - mean_ce(p, a1)));

        // gamma = 0, cw = 1 collapses the focal loss onto the plain hybrid
        LossConfig flat;
        flat.gamma = 0.0;
        flat.cw = 1.0;
        worst_focal = std::max(worst_focal, std::abs(hybrid_focal(p, a1, a2, flat, w).total -
                                                     hybrid_ce(p, a1, a2, w).total));

        // swapping experts and mirroring the weight changes nothing
        worst_swap = std::max(worst_swap, std::abs(hybrid_ce(p, a1, a2, w).total -
                                                   hybrid_ce(p, a2, a1, 1.0 - w).total));
        LossConfig foc;
        foc.gamma = 2.0;
        foc.cw = 0.25;
        worst_swap = std::max(worst_swap, std::abs(hybrid_focal(p, a1, a2, foc, w).total -
                                                   hybrid_focal(p, a2, a1, foc, 1.0 - w).total));

        // the total is affine in w: the midpoint lies on the chord
        const double c_lo = hybrid_ce(p, a1, a2, 0.2).total;
        const double c_mid = hybrid_ce(p, a1, a2, 0.5).total;
        const double c_hi = hybrid_ce(p, a1, a2, 0.8).total;
        worst_aff = std::max(worst_aff, std::abs(c_mid - 0.5 * (c_lo + c_hi)));
        const double f_lo = hybrid_focal(p, a1, a2, foc, 0.2).total;
        const double f_mid = hybrid_focal(p, a1, a2, foc, 0.5).total;
        const double f_hi = hybrid_focal(p, a1, a2, foc, 0.8).total;
        worst_aff = std::max(worst_aff, std::abs(f_mid - 0.5 * (f_lo + f_hi)));
    }
    Outcome out;
    out.pass = worst_red <= kAlgebraTol && worst_focal <= kAlgebraTol &&
               worst_swap <= kAlgebraTol && worst_aff <= kAffineTol;
    out.detail = fmt("w=1 reduction %.3g, gamma=0 reduction %.3g, swap %.3g (tol %.0e); "
                     "affinity %.3g (tol %.0e)",
                     worst_red, worst_focal, worst_swap, kAlgebraTol, worst_aff, kAffineTol);
    return out;
}

// ---------------------------------------------------------------------------
// 4. architecture contracts
// ---------------------------------------------------------------------------
Outcome criterion_architecture() {
    ModelSpec spec;
    spec.in_channels = 1;
    spec.stage_channels = {4, 8, 12, 16};
    spec.num_decoders = 2;
    UnaahNet<float> net(spec);
    net.init_parameters(11);

    Tensor4<float> x;
    x.resize(1, 224, 224, 1);
    Rng rng(404);
    for (auto& v : x.v) v = float(rng.uniform());

    auto& out = net.forward(x, false);
    const bool shapes = net.bottleneck_out.h == 14 && net.bottleneck_out.w == 14 &&
                        net.bottleneck_out.c == 32 && out.logits.size() == 2 &&
                        out.logits[0].h == 224 && out.logits[0].w == 224 &&
                        out.logits[0].c == 2 && out.logits[1].h == 224;
    const Tensor4<float> base_o1 = out.logits[0];

    // zeroed second decoder: the aggregate collapses to normalize(O1)
    UnaahNet<float> zeroed(spec);
    zeroed.init_parameters(11);
    zeroed.for_each_param([&](const std::string& name, std::vector<float>& w,
                              std::vector<float>&) {
        if (name.rfind("dec2.", 0) == 0) std::fill(w.begin(), w.end(), 0.f);
    });
    auto& zout = zeroed.forward(x, false);
    double worst_norm = 0.0;
    const size_t npix = zout.aggregate.v.size() / 2;
    for (size_t i = 0; i < npix; ++i) {
        const double z0 = double(zout.logits[0].v[2 * i]);
        const double z1 = double(zout.logits[0].v[2 * i + 1]);
        const double m = std::max(z0, z1);
        const double e0 = std::exp(z0 - m), e1 = std::exp(z1 - m);
        worst_norm = std::max(worst_norm,
                              std::abs(double(zout.aggregate.v[2 * i]) - e0 / (e0 + e1)));
    }
    double o2_mag = 0.0;
    for (float v : zout.logits[1].v) o2_mag = std::max(o2_mag, double(std::abs(v)));

    // perturbing a second-decoder weight must not move the first decoder
    UnaahNet<float> bumped(spec);
    bumped.init_parameters(11);
    bool bumped_one = false;
    bumped.for_each_param([&](const std::string& name, std::vector<float>& w,
                              std::vector<float>&) {
        if (!bumped_one && name.rfind("dec2.", 0) == 0 && !w.empty()) {
            w[0] += 0.5f;
            bumped_one = true;
        }
    });
    auto& bout = bumped.forward(x, false);
    const bool o1_bitwise = bout.logits[0].v == base_o1.v;

    Outcome out_c;
    out_c.pass = shapes && o2_mag == 0.0 && worst_norm <= 1e-6 && bumped_one && o1_bitwise;
    out_c.detail = fmt("bottleneck 14x14x32 %s, |O2|=0 %s, |aggregate-softmax(O1)| %.3g, "
                       "O1 bit-identical under decoder-2 perturbation %s",
                       shapes ? "yes" : "NO", o2_mag == 0.0 ? "yes" : "NO", worst_norm,
                       o1_bitwise ? "yes" : "NO");
    return out_c;
}

// ---------------------------------------------------------------------------
// 5. synthetic compromise experiment
// ---------------------------------------------------------------------------
Outcome criterion_experiment() {
    const auto t0 = clock_type::now();
    SyntheticSpec sp;  // 128x128, one disk, biases +3/-3, jitter 1
    sp.n_images = 250;
    sp.seed = 4242;
    const fs::path ds = g_work / "exp_ds";
    const DatasetManifest manifest = generate_synthetic(sp, ds.string());
    std::vector<AnnotationPair> all = load_pairs(manifest, "");
    const std::vector<AnnotationPair> train(all.begin(), all.begin() + 200);
    const std::vector<AnnotationPair> test(all.begin() + 200, all.end());

    RunConfig cfg;
    cfg.model.stage_channels = {16, 32, 64};
    cfg.model.in_channels = 1;
    cfg.input_size = 64;
    cfg.epochs = kExperimentEpochs;
    cfg.optimizer.batch_size = 8;
    cfg.optimizer.learning_rate = 1e-3;
    cfg.augmentation.enabled = false;
    cfg.early_stop_patience = 0;

    const char* variants[3] = {"unet1", "unet2", "unaah"};
    double d[kExperimentSeeds][3][2];  // [seed][variant][annotation]
    for (int s = 0; s < kExperimentSeeds; ++s) {
        for (int v = 0; v < 3; ++v) {
            const fs::path dir = g_work / fmt("exp_%s_s%d", variants[v], s + 1);
            const TrainResult r =
                train_model(variants[v], train, {}, cfg, uint64_t(s + 1), dir.string());
            d[s][v][0] = evaluate_checkpoint(r.checkpoint_path, test, cfg, 1).dice;
            d[s][v][1] = evaluate_checkpoint(r.checkpoint_path, test, cfg, 2).dice;
            std::printf("    seed %d %-5s  dice vs ann1 %.4f  vs ann2 %.4f  (%.0f s elapsed)\n",
                        s + 1, variants[v], d[s][v][0], d[s][v][1], seconds_since(t0));
            std::fflush(stdout);
        }
    }

    int hits_a = 0, hits_b = 0;
    for (int s = 0; s < kExperimentSeeds; ++s) {
        if (d[s][0][0] > d[s][0][1] && d[s][1][1] > d[s][1][0]) ++hits_a;
        if (d[s][2][0] >= d[s][1][0] && d[s][2][1] >= d[s][0][1]) ++hits_b;
    }
    const double secs = seconds_since(t0);
    Outcome out;
    out.pass = hits_a >= 4 && hits_b >= 4 && secs < kExperimentBudget;
    out.detail = fmt("own-annotator asymmetry %d/%d seeds, compromise dominance %d/%d seeds "
                     "(need 4), %d epochs, %.0f s (budget %.0f s)",
                     hits_a, kExperimentSeeds, hits_b, kExperimentSeeds, kExperimentEpochs,
                     secs, kExperimentBudget);
    return out;
}

// ---------------------------------------------------------------------------
// 6. patch pipeline exactness
// ---------------------------------------------------------------------------
Outcome criterion_patches() {
    PatchSpec ps;  // patch 512, overlap 0.5, content threshold 0.35
    const Mask m1(1024, 1024), m2(1024, 1024);

    const Raster tissue(1024, 1024, 1, 0.9f);
    const auto kept = extract_patches(tissue, m1, m2, ps, "g");
    const Raster blank(1024, 1024, 1, 0.1f);
    const auto dropped = extract_patches(blank, m1, m2, ps, "g");
    const std::vector<int> anchors = patch_anchors(1024, ps.patch_size, ps.stride());

    Outcome out;
    out.pass = kept.size() == 9 && dropped.empty() && anchors == std::vector<int>{0, 256, 512};
    out.detail = fmt("1024/512/50%%: %zu patches (want 9), all-background: %zu (want 0)",
                     kept.size(), dropped.size());
    return out;
}

// ---------------------------------------------------------------------------
// 7. CLI determinism
// ---------------------------------------------------------------------------
int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null";
    return std::system(cmd.c_str());
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::vector<char> ba((std::istreambuf_iterator<char>(fa)), {});
    std::vector<char> bb((std::istreambuf_iterator<char>(fb)), {});
    return ba == bb;
}

// identical trees, byte for byte
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> rel;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), a));
    for (const auto& r : rel) {
        if (!fs::exists(b / r)) {
            why = "missing " + r.string();
            return false;
        }
        if (!same_bytes(a / r, b / r)) {
            why = "differs: " + r.string();
            return false;
        }
    }
    size_t nb = 0;
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) ++nb;
    if (nb != rel.size()) {
        why = "file count differs";
        return false;
    }
    return true;
}

// equal CSV tables, numeric cells compared to kTableTol, skipping the column
// named `skip_name` (wall-clock timings)
bool same_table(const fs::path& a, const fs::path& b, const std::string& skip_name,
                std::string& why) {
    std::ifstream fa(a), fb(b);
    if (!fa || !fb) {
        why = "missing table";
        return false;
    }
    std::string la, lb;
    int lineno = 0;
    int skip_col = -1;
    while (true) {
        const bool ga = bool(std::getline(fa, la));
        const bool gb = bool(std::getline(fb, lb));
        if (ga != gb) {
            why = "row count differs";
            return false;
        }
        if (!ga) return true;
        ++lineno;
        if (lineno == 1) {
            std::stringstream hs(la);
            std::string cell;
            for (int c = 0; std::getline(hs, cell, ','); ++c)
                if (cell == skip_name) skip_col = c;
        }
        std::stringstream sa(la), sb(lb);
        std::string ca, cb;
        int col = 0;
        while (true) {
            const bool ha = bool(std::getline(sa, ca, ','));
            const bool hb = bool(std::getline(sb, cb, ','));
            if (ha != hb) {
                why = fmt("line %d: column count differs", lineno);
                return false;
            }
            if (!ha) break;
            if (col != skip_col) {
                char* end_a = nullptr;
                const double va = std::strtod(ca.c_str(), &end_a);
                const bool numeric = end_a && *end_a == '\0' && !ca.empty();
                if (numeric) {
                    const double vb = std::strtod(cb.c_str(), nullptr);
                    if (std::abs(va - vb) > kTableTol) {
                        why = fmt("line %d col %d: %s vs %s", lineno, col, ca.c_str(), cb.c_str());
                        return false;
                    }
                } else if (ca != cb) {
                    why = fmt("line %d col %d: %s vs %s", lineno, col, ca.c_str(), cb.c_str());
                    return false;
                }
            }
            ++col;
        }
    }
}

Outcome criterion_determinism() {
    Outcome out;
    const fs::path a = g_work / "det_a", b = g_work / "det_b";
    const std::string gen_flags =
        " --image-size 96 --n-images 12 --seed 33";
    if (run_cli("generate --out " + a.string() + gen_flags) != 0 ||
        run_cli("generate --out " + b.string() + gen_flags) != 0) {
        out.detail = "generate failed";
        return out;
    }
    std::string why;
    if (!same_tree(a, b, why)) {
        out.detail = "datasets not byte-identical: " + why;
        return out;
    }

    const std::string data = " --data " + (a / "manifest.jsonl").string();
    if (run_cli("agreement" + data + " --out " + (g_work / "agr1").string()) != 0 ||
        run_cli("agreement" + data + " --out " + (g_work / "agr2").string()) != 0) {
        out.detail = "agreement failed";
        return out;
    }
    if (!same_bytes(g_work / "agr1" / "agreement.csv", g_work / "agr2" / "agreement.csv")) {
        out.detail = "agreement tables differ";
        return out;
    }

    const std::string train_flags = " --variant unet1 --epochs 1 --input-size 32 --batch-size 4 "
                                    "--stages 4 8 --no-augment --seed 7 --out ";
    if (run_cli("train" + data + train_flags + (g_work / "t1").string()) != 0 ||
        run_cli("train" + data + train_flags + (g_work / "t2").string()) != 0) {
        out.detail = "train failed";
        return out;
    }
    // epochs.csv: everything but the wall-clock column must agree
    if (!same_table(g_work / "t1" / "epochs.csv", g_work / "t2" / "epochs.csv", "seconds", why)) {
        out.detail = "training logs differ: " + why;
        return out;
    }
    for (const char* t : {"t1", "t2"}) {
        if (run_cli("evaluate --checkpoint " + (g_work / t / "model.ckpt").string() + data +
                    " --annotation 1 --out " + (g_work / (std::string("ev_") + t)).string()) !=
            0) {
            out.detail = "evaluate failed";
            return out;
        }
    }
    if (!same_bytes(g_work / "ev_t1" / "evaluate.csv", g_work / "ev_t2" / "evaluate.csv")) {
        out.detail = "evaluation tables differ";
        return out;
    }

    out.pass = true;
    out.detail = fmt("dataset trees byte-identical; agreement, training log, and evaluation "
                     "tables reproduce (tol %.0e)",
                     kTableTol);
    return out;
}

// ---------------------------------------------------------------------------
// 8. agreement sanity on identical annotators
// ---------------------------------------------------------------------------
Outcome criterion_agreement_sanity() {
    SyntheticSpec sp;
    sp.image_size = 96;
    sp.n_images = 8;
    sp.bias_1 = 0.0;
    sp.bias_2 = 0.0;
    sp.jitter_std = 0.0;
    sp.seed = 5;
    const DatasetManifest manifest = generate_synthetic(sp, (g_work / "agr_ds").string());
    const auto pairs = load_pairs(manifest, "");
    const MetricReport rep = agreement_report(pairs);
    Outcome out;
    out.pass = rep.dice == 1.0 && rep.iou == 1.0 && rep.core_dice.has_value() &&
               rep.core_dice.value() == 1.0 && rep.iou_nobk.has_value() &&
               rep.iou_nobk.value() == 1.0;
    out.detail = fmt("dice %.17g, core %.17g, iou %.17g, iou_nobk %.17g (all must equal 1)",
                     rep.dice, rep.core_dice.value_or(-1), rep.iou, rep.iou_nobk.value_or(-1));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli-binary> [criterion ids...]\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    g_work = fs::temp_directory_path() / ("unaah_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(g_work);

    std::vector<int> only;
    for (int i = 2; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const auto wanted = [&](int id) {
        return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
    };

    struct Entry {
        int id;
        const char* label;
        std::function<Outcome()> fn;
    };
    const Entry entries[] = {
        {1, "loss gradients match finite differences", criterion_gradients},
        {2, "metrics match the pixel-counting oracle", criterion_metric_oracle},
        {3, "loss algebra identities", criterion_loss_algebra},
        {4, "architecture contracts", criterion_architecture},
        {5, "synthetic compromise experiment", criterion_experiment},
        {6, "patch pipeline exactness", criterion_patches},
        {7, "command line determinism", criterion_determinism},
        {8, "agreement sanity on identical annotators", criterion_agreement_sanity},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        if (!wanted(e.id)) continue;
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out.pass = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        std::printf("[%s] %d. %s: %s\n", out.pass ? "PASS" : "FAIL", e.id, e.label,
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }

    fs::remove_all(g_work);
    return failures == 0 ? 0 : 1;
}
