#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "unaah/kernels.hpp"
#include "unaah/rng.hpp"
#include "unaah/tensor.hpp"

namespace unaah {

// Parameter visitor: name, values, gradient. Used for init order, the
// optimizer, checkpoints and tests.
template <typename T, typename F>
concept ParamVisitor = std::invocable<F, const std::string&, std::vector<T>&, std::vector<T>&>;

template <typename T>
struct Conv2d {
    int kh = 0, kw = 0, cin = 0, cout = 0;
    bool has_bias = true;
    std::vector<T> w, gw;
    std::vector<T> b, gb;
    Tensor4<T> x_cache;

    void configure(int kh_, int kw_, int cin_, int cout_, bool bias) {
        kh = kh_;
        kw = kw_;
        cin = cin_;
        cout = cout_;
        has_bias = bias;
        w.assign(size_t(kh) * kw * cin * cout, T(0));
        gw.assign(w.size(), T(0));
        b.assign(has_bias ? size_t(cout) : 0, T(0));
        gb.assign(b.size(), T(0));
    }

    // He fan-in initialization; biases start at zero
    void init(Rng& rng) {
        const double stddev = std::sqrt(2.0 / (double(kh) * kw * cin));
        for (auto& v : w) v = T(rng.normal(0.0, stddev));
        for (auto& v : b) v = T(0);
    }

    void forward(const Tensor4<T>& x, Tensor4<T>& y, bool cache) {
        if (cache) x_cache = x;
        kernels::conv2d_forward(x, w, has_bias ? &b : nullptr, kh, kw, cout, y);
    }

    void backward(const Tensor4<T>& gy, Tensor4<T>& gx) {
        std::vector<T> gw_now, gb_now;
        kernels::conv2d_backward_params(x_cache, gy, kh, kw, gw_now, has_bias ? &gb_now : nullptr);
        for (size_t i = 0; i < gw.size(); ++i) gw[i] += gw_now[i];
        for (size_t i = 0; i < gb.size(); ++i) gb[i] += gb_now[i];
        kernels::conv2d_backward_input(gy, w, kh, kw, cin, gx);
    }

    template <typename F>
    void visit(const std::string& prefix, F&& fn) {
        fn(prefix + ".w", w, gw);
        if (has_bias) fn(prefix + ".b", b, gb);
    }
};

template <typename T>
struct TConv2x2 {
    int cin = 0, cout = 0;
    std::vector<T> w, gw, b, gb;
    Tensor4<T> x_cache;

    void configure(int cin_, int cout_) {
        cin = cin_;
        cout = cout_;
        w.assign(size_t(4) * cin * cout, T(0));
        gw.assign(w.size(), T(0));
        b.assign(size_t(cout), T(0));
        gb.assign(b.size(), T(0));
    }

    void init(Rng& rng) {
        const double stddev = std::sqrt(2.0 / double(cin));  // one input tap per output
        for (auto& v : w) v = T(rng.normal(0.0, stddev));
        for (auto& v : b) v = T(0);
    }

    void forward(const Tensor4<T>& x, Tensor4<T>& y, bool cache) {
        if (cache) x_cache = x;
        kernels::tconv2x2_forward(x, w, &b, cout, y);
    }

    void backward(const Tensor4<T>& gy, Tensor4<T>& gx) {
        std::vector<T> gw_now, gb_now;
        kernels::tconv2x2_backward_params(x_cache, gy, gw_now, &gb_now);
        for (size_t i = 0; i < gw.size(); ++i) gw[i] += gw_now[i];
        for (size_t i = 0; i < gb.size(); ++i) gb[i] += gb_now[i];
        kernels::tconv2x2_backward_input(gy, w, cin, gx);
    }

    template <typename F>
    void visit(const std::string& prefix, F&& fn) {
        fn(prefix + ".w", w, gw);
        fn(prefix + ".b", b, gb);
    }
};

template <typename T>
struct BatchNorm {
    static constexpr double eps = 1e-5;
    static constexpr double momentum = 0.1;

    int channels = 0;
    std::vector<T> gamma, dgamma, beta, dbeta;
    std::vector<double> running_mean, running_var;

    Tensor4<T> x_cache;
    std::vector<double> mean_cache, invstd_cache;

    void configure(int channels_) {
        channels = channels_;
        gamma.assign(size_t(channels), T(1));
        dgamma.assign(size_t(channels), T(0));
        beta.assign(size_t(channels), T(0));
        dbeta.assign(size_t(channels), T(0));
        running_mean.assign(size_t(channels), 0.0);
        running_var.assign(size_t(channels), 1.0);
    }

    void forward(const Tensor4<T>& x, Tensor4<T>& y, bool train) {
        if (train) {
            std::vector<double> var;
            kernels::bn_batch_stats(x, mean_cache, var);
            invstd_cache.resize(size_t(channels));
            for (int c = 0; c < channels; ++c) {
                invstd_cache[size_t(c)] = 1.0 / std::sqrt(var[size_t(c)] + eps);
                running_mean[size_t(c)] =
                    (1.0 - momentum) * running_mean[size_t(c)] + momentum * mean_cache[size_t(c)];
                running_var[size_t(c)] =
                    (1.0 - momentum) * running_var[size_t(c)] + momentum * var[size_t(c)];
            }
            x_cache = x;
            kernels::bn_normalize(x, mean_cache, invstd_cache, gamma, beta, y);
        } else {
            std::vector<double> invstd(static_cast<size_t>(channels), 0.0);
            for (int c = 0; c < channels; ++c)
                invstd[size_t(c)] = 1.0 / std::sqrt(running_var[size_t(c)] + eps);
            kernels::bn_normalize(x, running_mean, invstd, gamma, beta, y);
        }
    }

    void backward(const Tensor4<T>& gy, Tensor4<T>& gx) {
        std::vector<T> dg, db;
        kernels::bn_backward(x_cache, gy, mean_cache, invstd_cache, gamma, gx, dg, db);
        for (size_t i = 0; i < dgamma.size(); ++i) {
            dgamma[i] += dg[i];
            dbeta[i] += db[i];
        }
    }

    template <typename F>
    void visit(const std::string& prefix, F&& fn) {
        fn(prefix + ".gamma", gamma, dgamma);
        fn(prefix + ".beta", beta, dbeta);
    }

    // running statistics: state that must survive checkpointing but is not
    // touched by the optimizer
    template <typename F>
    void visit_stats(const std::string& prefix, F&& fn) {
        fn(prefix + ".running_mean", running_mean);
        fn(prefix + ".running_var", running_var);
    }
};

// Residual unit: two [conv 3x3 -> batch-norm -> relu] stages plus a shortcut
// (1x1 conv with bias when the channel count changes, identity otherwise).
template <typename T>
struct ConvBlock {
    int cin = 0, cout = 0;
    Conv2d<T> conv1, conv2;
    BatchNorm<T> bn1, bn2;
    Conv2d<T> shortcut;  // only used when cin != cout
    bool projected = false;

    Tensor4<T> u1_cache, u2_cache;

    void configure(int cin_, int cout_) {
        cin = cin_;
        cout = cout_;
        conv1.configure(3, 3, cin, cout, /*bias=*/false);
        bn1.configure(cout);
        conv2.configure(3, 3, cout, cout, /*bias=*/false);
        bn2.configure(cout);
        projected = cin != cout;
        if (projected) shortcut.configure(1, 1, cin, cout, /*bias=*/true);
    }

    void init(Rng& rng) {
        conv1.init(rng);
        conv2.init(rng);
        if (projected) shortcut.init(rng);
    }

    void forward(const Tensor4<T>& x, Tensor4<T>& y, bool train) {
        Tensor4<T> t;
        conv1.forward(x, t, train);
        Tensor4<T> u1;
        bn1.forward(t, u1, train);
        kernels::relu_forward(u1);
        conv2.forward(u1, t, train);
        Tensor4<T> u2;
        bn2.forward(t, u2, train);
        kernels::relu_forward(u2);
        if (train) {
            u1_cache = u1;
            u2_cache = u2;
        }
        if (projected) {
            shortcut.forward(x, y, train);
            kernels::add_inplace(y, u2);
        } else {
            y = u2;
            kernels::add_inplace(y, x);
        }
    }

    void backward(const Tensor4<T>& gy, Tensor4<T>& gx) {
        Tensor4<T> g = gy;
        kernels::relu_backward(u2_cache, g);
        Tensor4<T> gt;
        bn2.backward(g, gt);
        Tensor4<T> gu1;
        conv2.backward(gt, gu1);
        kernels::relu_backward(u1_cache, gu1);
        bn1.backward(gu1, gt);
        conv1.backward(gt, gx);
        if (projected) {
            Tensor4<T> gs;
            shortcut.backward(gy, gs);
            kernels::add_inplace(gx, gs);
        } else {
            kernels::add_inplace(gx, gy);
        }
    }

    template <typename F>
    void visit(const std::string& prefix, F&& fn) {
        conv1.visit(prefix + ".conv1", fn);
        bn1.visit(prefix + ".bn1", fn);
        conv2.visit(prefix + ".conv2", fn);
        bn2.visit(prefix + ".bn2", fn);
        if (projected) shortcut.visit(prefix + ".shortcut", fn);
    }

    template <typename F>
    void visit_stats(const std::string& prefix, F&& fn) {
        bn1.visit_stats(prefix + ".bn1", fn);
        bn2.visit_stats(prefix + ".bn2", fn);
    }
};

}  // namespace unaah
