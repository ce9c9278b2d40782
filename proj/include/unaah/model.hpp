#pragma once

#include <string>
#include <vector>

#include "unaah/config.hpp"
#include "unaah/errors.hpp"
#include "unaah/layers.hpp"
#include "unaah/losses.hpp"

namespace unaah {

template <typename T>
struct DecoderOutputs {
    std::vector<Tensor4<T>> logits;  // O_1 ... O_K
    Tensor4<T> aggregate;            // per-pixel class probabilities
    Tensor4<T> aggregate_logits;     // sum of logits (logit_sum mode)
};

// One shared encoder, a shared bottleneck, K decoders with skip connections
// into every decoder, 1x1 heads, and aggregation across decoder outputs.
template <typename T>
struct UnaahNet {
    ModelSpec spec;

    std::vector<ConvBlock<T>> enc;  // one block per stage, each followed by maxpool
    ConvBlock<T> bottleneck;

    struct Level {
        Conv2d<T> reduce;   // 1x1 after bilinear upsampling
        TConv2x2<T> tconv;  // alternative learned upsampling
        ConvBlock<T> block;
        // caches
        Tensor4<T> up_in, cat_in;
        Tensor4<T> out;
    };
    struct Decoder {
        std::vector<Level> levels;  // deepest first
        Conv2d<T> head;
    };
    std::vector<Decoder> decoders;

    // training caches
    std::vector<Tensor4<T>> skips;             // encoder block outputs
    std::vector<std::vector<int32_t>> pool_arg;
    std::vector<std::pair<int, int>> pool_dims;
    Tensor4<T> bottleneck_in, bottleneck_out;
    std::vector<Tensor4<T>> dec_feats;  // per decoder, full-res features before head
    DecoderOutputs<T> last;

    explicit UnaahNet(const ModelSpec& s) : spec(s) {
        spec.validate();
        const int stages = spec.num_stages();
        enc.resize(size_t(stages));
        int c_in = spec.in_channels;
        for (int i = 0; i < stages; ++i) {
            enc[size_t(i)].configure(c_in, spec.stage_channels[size_t(i)]);
            c_in = spec.stage_channels[size_t(i)];
        }
        const int c_deep = spec.stage_channels.back();
        bottleneck.configure(c_deep, 2 * c_deep);

        decoders.resize(size_t(spec.num_decoders));
        for (auto& d : decoders) {
            d.levels.resize(size_t(stages));
            int c_prev = 2 * c_deep;
            for (int i = stages - 1; i >= 0; --i) {
                Level& lvl = d.levels[size_t(stages - 1 - i)];
                const int c_out = spec.stage_channels[size_t(i)];
                if (spec.upsample == UpsampleMode::bilinear)
                    lvl.reduce.configure(1, 1, c_prev, c_out, /*bias=*/true);
                else
                    lvl.tconv.configure(c_prev, c_out);
                lvl.block.configure(2 * c_out, c_out);
                c_prev = c_out;
            }
            d.head.configure(1, 1, spec.stage_channels[0], spec.num_classes, /*bias=*/true);
        }
        pool_arg.resize(size_t(stages));
        pool_dims.resize(size_t(stages));
        skips.resize(size_t(stages));
        dec_feats.resize(size_t(spec.num_decoders));
    }

    // deterministic draw order: encoder, bottleneck, then each decoder
    void init_parameters(uint64_t seed) {
        Rng rng(mix_stream(seed, 0x6d6f64656cull));  // "model"
        for (auto& b : enc) b.init(rng);
        bottleneck.init(rng);
        for (auto& d : decoders) {
            for (auto& lvl : d.levels) {
                if (spec.upsample == UpsampleMode::bilinear)
                    lvl.reduce.init(rng);
                else
                    lvl.tconv.init(rng);
                lvl.block.init(rng);
            }
            d.head.init(rng);
        }
    }

    template <typename F>
    void for_each_param(F&& fn) {
        for (size_t i = 0; i < enc.size(); ++i) enc[i].visit("enc" + std::to_string(i), fn);
        bottleneck.visit("bottleneck", fn);
        for (size_t k = 0; k < decoders.size(); ++k) {
            const std::string dp = "dec" + std::to_string(k + 1);
            for (size_t l = 0; l < decoders[k].levels.size(); ++l) {
                const std::string lp = dp + ".lvl" + std::to_string(l);
                if (spec.upsample == UpsampleMode::bilinear)
                    decoders[k].levels[l].reduce.visit(lp + ".reduce", fn);
                else
                    decoders[k].levels[l].tconv.visit(lp + ".up", fn);
                decoders[k].levels[l].block.visit(lp + ".block", fn);
            }
            decoders[k].head.visit(dp + ".head", fn);
        }
    }

    // batchnorm running statistics, in the same traversal order as the
    // parameters they sit next to
    template <typename F>
    void for_each_stat(F&& fn) {
        for (size_t i = 0; i < enc.size(); ++i)
            enc[i].visit_stats("enc" + std::to_string(i), fn);
        bottleneck.visit_stats("bottleneck", fn);
        for (size_t k = 0; k < decoders.size(); ++k) {
            const std::string dp = "dec" + std::to_string(k + 1);
            for (size_t l = 0; l < decoders[k].levels.size(); ++l)
                decoders[k].levels[l].block.visit_stats(dp + ".lvl" + std::to_string(l) + ".block",
                                                        fn);
        }
    }

    size_t param_count() {
        size_t n = 0;
        for_each_param([&](const std::string&, std::vector<T>& w, std::vector<T>&) {
            n += w.size();
        });
        return n;
    }

    void zero_grad() {
        for_each_param([](const std::string&, std::vector<T>&, std::vector<T>& g) {
            std::fill(g.begin(), g.end(), T(0));
        });
    }

    DecoderOutputs<T>& forward(const Tensor4<T>& x, bool train) {
        if (x.c != spec.in_channels)
            throw DataError("model expects " + std::to_string(spec.in_channels) +
                            " input channels, got " + std::to_string(x.c));
        const int factor = 1 << spec.num_stages();
        if (x.h % factor != 0 || x.w % factor != 0)
            throw DataError("input dims must be divisible by " + std::to_string(factor));

        Tensor4<T> cur = x;
        for (size_t i = 0; i < enc.size(); ++i) {
            Tensor4<T> bout;
            enc[i].forward(cur, bout, train);
            skips[i] = bout;
            pool_dims[i] = {bout.h, bout.w};
            kernels::maxpool2x2_forward(bout, cur, pool_arg[i]);
        }
        if (train) bottleneck_in = cur;
        bottleneck.forward(cur, bottleneck_out, train);

        last.logits.assign(decoders.size(), Tensor4<T>{});
        for (size_t k = 0; k < decoders.size(); ++k) {
            Tensor4<T> d = bottleneck_out;
            for (size_t l = 0; l < decoders[k].levels.size(); ++l) {
                Level& lvl = decoders[k].levels[l];
                const size_t stage = enc.size() - 1 - l;
                Tensor4<T> v;
                if (spec.upsample == UpsampleMode::bilinear) {
                    Tensor4<T> u;
                    kernels::upsample2x_bilinear_forward(d, u);
                    if (train) lvl.up_in = d;
                    lvl.reduce.forward(u, v, train);
                } else {
                    lvl.tconv.forward(d, v, train);
                }
                Tensor4<T> cat;
                kernels::concat_channels(v, skips[stage], cat);
                lvl.block.forward(cat, d, train);
                if (train) lvl.out = d;
            }
            if (train) dec_feats[k] = d;
            decoders[k].head.forward(d, last.logits[k], train);
        }

        aggregate(last);
        return last;
    }

    void aggregate(DecoderOutputs<T>& out) const {
        if (spec.aggregate == AggregateMode::logit_sum) {
            out.aggregate_logits = out.logits[0];
            for (size_t k = 1; k < out.logits.size(); ++k)
                kernels::add_inplace(out.aggregate_logits, out.logits[k]);
            kernels::softmax_channels(out.aggregate_logits, out.aggregate);
        } else {
            Tensor4<T> p;
            kernels::softmax_channels(out.logits[0], out.aggregate);
            for (size_t k = 1; k < out.logits.size(); ++k) {
                kernels::softmax_channels(out.logits[k], p);
                kernels::add_inplace(out.aggregate, p);
            }
            const T inv = T(1) / T(out.logits.size());
            for (auto& v : out.aggregate.v) v *= inv;
            out.aggregate_logits.resize(0, 0, 0, 0);
        }
    }

    // Backward from per-decoder logit gradients; accumulates into param grads.
    void backward(const std::vector<const Tensor4<T>*>& g_logits) {
        if (g_logits.size() != decoders.size())
            throw DataError("backward: need one gradient per decoder");

        std::vector<Tensor4<T>> g_skips(enc.size());
        for (size_t i = 0; i < enc.size(); ++i) {
            g_skips[i].resize(skips[i].n, skips[i].h, skips[i].w, skips[i].c);
        }
        Tensor4<T> g_bneck_out(bottleneck_out.n, bottleneck_out.h, bottleneck_out.w,
                               bottleneck_out.c);

        for (size_t k = 0; k < decoders.size(); ++k) {
            Tensor4<T> g_d;
            decoders[k].head.backward(*g_logits[k], g_d);
            for (size_t l = decoders[k].levels.size(); l-- > 0;) {
                Level& lvl = decoders[k].levels[l];
                const size_t stage = enc.size() - 1 - l;
                Tensor4<T> g_cat;
                lvl.block.backward(g_d, g_cat);
                Tensor4<T> g_v, g_skip;
                kernels::split_channels(g_cat, g_cat.c - skips[stage].c, g_v, g_skip);
                kernels::add_inplace(g_skips[stage], g_skip);
                if (spec.upsample == UpsampleMode::bilinear) {
                    Tensor4<T> g_u;
                    lvl.reduce.backward(g_v, g_u);
                    kernels::upsample2x_bilinear_backward(g_u, g_d);
                } else {
                    lvl.tconv.backward(g_v, g_d);
                }
            }
            kernels::add_inplace(g_bneck_out, g_d);
        }

        Tensor4<T> g;
        bottleneck.backward(g_bneck_out, g);
        for (size_t i = enc.size(); i-- > 0;) {
            Tensor4<T> g_bout;
            kernels::maxpool2x2_backward(g, pool_arg[i], pool_dims[i].first,
                                         pool_dims[i].second, g_bout);
            kernels::add_inplace(g_bout, g_skips[i]);
            enc[i].backward(g_bout, g);
        }
    }
};

// Binarize the aggregate probability map of a single-image batch: foreground
// is everything that is not class 0, so pixel = 1 iff 1 - p(class 0) >= t.
template <typename T>
Mask predict_mask(const DecoderOutputs<T>& out, double threshold, int item = 0) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw ConfigError("prediction threshold must be in (0,1)");
    const Tensor4<T>& p = out.aggregate;
    Mask m(p.h, p.w);
    for (int y = 0; y < p.h; ++y)
        for (int x = 0; x < p.w; ++x) {
            const double fg = 1.0 - double(p.at(item, y, x, 0));
            m.at(y, x) = fg >= threshold ? 1 : 0;
        }
    return m;
}

}  // namespace unaah
