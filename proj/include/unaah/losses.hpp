#pragma once

#include <cmath>
#include <string>
#include <type_traits>

#include "unaah/errors.hpp"
#include "unaah/metrics.hpp"
#include "unaah/tensor.hpp"
#include "unaah/types.hpp"

namespace unaah {

enum class LossMode { hybrid_ce, hybrid_focal };
enum class WeightSchedule { fixed, agreement_init, adaptive };

struct LossConfig {
    double w = 0.5;    // expert-1 weight
    double cw = 0.25;  // positive-class weight (focal mode)
    double gamma = 2.0;
    LossMode mode = LossMode::hybrid_ce;
    WeightSchedule schedule = WeightSchedule::fixed;
    double w_clip_low = 0.25;
    double w_clip_high = 0.75;
    double beta = 0.0;   // agreement_init slope: w = 0.5 + beta * (1 - s)
    double kappa = 4.0;  // adaptive schedule gain

    void validate() const {
        if (w < 0.0 || w > 1.0) throw ConfigError("loss.w must be in [0,1]");
        if (cw <= 0.0) throw ConfigError("loss.cw must be positive");
        if (gamma < 0.0) throw ConfigError("loss.gamma must be >= 0");
        if (!(w_clip_low < w_clip_high)) throw ConfigError("loss.w_clip must satisfy low < high");
    }
};

struct LossValue {
    double total = 0.0;
    double ce_1 = 0.0;
    double ce_2 = 0.0;
    double w_used = 0.5;
};

inline double clip_weight(double w, const LossConfig& cfg) {
    return std::min(cfg.w_clip_high, std::max(cfg.w_clip_low, w));
}

// focal modulation g(u) = (1 - e^-u)^gamma * u and its derivative
inline double focal_mod(double u, double gamma) {
    return std::pow(1.0 - std::exp(-u), gamma) * u;
}

inline double focal_mod_deriv(double u, double gamma) {
    if (gamma == 0.0) return 1.0;
    const double em = std::exp(-u);
    const double base = 1.0 - em;
    if (base <= 0.0) return 0.0;  // u = 0 limit for gamma > 0
    return std::pow(base, gamma) + u * gamma * std::pow(base, gamma - 1.0) * em;
}

inline Labels to_labels(const Mask& m) {
    Labels l;
    l.n = 1;
    l.h = m.height;
    l.w = m.width;
    l.v = m.data;
    return l;
}

namespace detail {

template <typename T>
void check_loss_inputs(const Tensor4<T>& p, const Labels& a1, const Labels& a2) {
    if (a1.n != p.n || a1.h != p.h || a1.w != p.w || a2.n != p.n || a2.h != p.h || a2.w != p.w)
        throw DataError("loss: annotation dimensions do not match the prediction");
    if (p.c < 2) throw DataError("loss: prediction needs at least 2 classes");
}

template <typename T>
void check_normalized(const Tensor4<T>& p) {
    const size_t npix = size_t(p.n) * p.h * p.w;
    for (size_t i = 0; i < npix; ++i) {
        T s = T(0);
        for (int c = 0; c < p.c; ++c) s += p.data()[i * p.c + c];
        if (std::abs(double(s) - 1.0) > 1e-4)
            throw DataError("loss: probability rows must sum to 1 (got " +
                            std::to_string(double(s)) + ")");
    }
}

}  // namespace detail

// Mean per-pixel cross-entropy of probability map p against labels a.
template <typename T>
double mean_ce(const Tensor4<T>& p, const Labels& a) {
    const size_t npix = size_t(p.n) * p.h * p.w;
    constexpr double minp = 1e-30;
    double sum = 0.0;
    for (size_t i = 0; i < npix; ++i) {
        const double q = double(p.data()[i * p.c + a.v[i]]);
        sum += -std::log(q < minp ? minp : q);
    }
    return sum / double(npix);
}

// total = w * CE(p, a1) + (1 - w) * CE(p, a2)
template <typename T>
LossValue hybrid_ce(const Tensor4<T>& p, const Labels& a1, const Labels& a2, double w) {
    detail::check_loss_inputs(p, a1, a2);
    detail::check_normalized(p);
    LossValue lv;
    lv.ce_1 = mean_ce(p, a1);
    lv.ce_2 = mean_ce(p, a2);
    lv.w_used = w;
    lv.total = w * lv.ce_1 + (1.0 - w) * lv.ce_2;
    return lv;
}

inline LossValue hybrid_ce(const Tensor4<float>& p, const Mask& a1, const Mask& a2, double w) {
    return hybrid_ce(p, to_labels(a1), to_labels(a2), w);
}

// total = w * cw * (1 - e^-CE1)^gamma * CE1 + (1 - w) * cw * (1 - e^-CE2)^gamma * CE2
template <typename T>
LossValue hybrid_focal(const Tensor4<T>& p, const Labels& a1, const Labels& a2,
                       const LossConfig& cfg, double w) {
    detail::check_loss_inputs(p, a1, a2);
    detail::check_normalized(p);
    LossValue lv;
    lv.ce_1 = mean_ce(p, a1);
    lv.ce_2 = mean_ce(p, a2);
    lv.w_used = w;
    lv.total = w * cfg.cw * focal_mod(lv.ce_1, cfg.gamma) +
               (1.0 - w) * cfg.cw * focal_mod(lv.ce_2, cfg.gamma);
    return lv;
}

template <typename T>
LossValue hybrid_focal(const Tensor4<T>& p, const Labels& a1, const Labels& a2,
                       const LossConfig& cfg) {
    return hybrid_focal(p, a1, a2, cfg, cfg.w);
}

inline LossValue hybrid_focal(const Tensor4<float>& p, const Mask& a1, const Mask& a2,
                              const LossConfig& cfg) {
    return hybrid_focal(p, to_labels(a1), to_labels(a2), cfg, cfg.w);
}

// Loss and gradient w.r.t. the aggregate logits z, for training. Computes the
// softmax internally; if grad is non-null it receives d(total)/dz.
template <typename T>
LossValue hybrid_from_logits(const Tensor4<T>& z, const Labels& a1, const Labels& a2,
                             const LossConfig& cfg, double w,
                             Tensor4<std::type_identity_t<T>>* grad) {
    detail::check_loss_inputs(z, a1, a2);
    const int c = z.c;
    const size_t npix = size_t(z.n) * z.h * z.w;
    const double m = double(npix);

    Tensor4<T> p;
    p.resize(z.n, z.h, z.w, c);
    constexpr double minp = 1e-30;
    double sum1 = 0.0, sum2 = 0.0;
    for (size_t i = 0; i < npix; ++i) {
        const T* zp = z.data() + i * c;
        T* pp = p.data() + i * c;
        T mx = zp[0];
        for (int ch = 1; ch < c; ++ch) mx = std::max(mx, zp[ch]);
        T s = T(0);
        for (int ch = 0; ch < c; ++ch) {
            pp[ch] = std::exp(zp[ch] - mx);
            s += pp[ch];
        }
        const T inv = T(1) / s;
        for (int ch = 0; ch < c; ++ch) pp[ch] *= inv;
        const double q1 = double(pp[a1.v[i]]);
        const double q2 = double(pp[a2.v[i]]);
        sum1 += -std::log(q1 < minp ? minp : q1);
        sum2 += -std::log(q2 < minp ? minp : q2);
    }

    LossValue lv;
    lv.ce_1 = sum1 / m;
    lv.ce_2 = sum2 / m;
    lv.w_used = w;

    double coef1, coef2;
    if (cfg.mode == LossMode::hybrid_ce) {
        lv.total = w * lv.ce_1 + (1.0 - w) * lv.ce_2;
        coef1 = w;
        coef2 = 1.0 - w;
    } else {
        lv.total = w * cfg.cw * focal_mod(lv.ce_1, cfg.gamma) +
                   (1.0 - w) * cfg.cw * focal_mod(lv.ce_2, cfg.gamma);
        coef1 = w * cfg.cw * focal_mod_deriv(lv.ce_1, cfg.gamma);
        coef2 = (1.0 - w) * cfg.cw * focal_mod_deriv(lv.ce_2, cfg.gamma);
    }

    if (grad) {
        grad->resize(z.n, z.h, z.w, c);
        const T s1 = T(coef1 / m), s2 = T(coef2 / m), s12 = T((coef1 + coef2) / m);
        for (size_t i = 0; i < npix; ++i) {
            const T* pp = p.data() + i * c;
            T* gp = grad->data() + i * c;
            for (int ch = 0; ch < c; ++ch) gp[ch] = s12 * pp[ch];
            gp[a1.v[i]] -= s1;
            gp[a2.v[i]] -= s2;
        }
    }
    return lv;
}

// Startup weight from annotator agreement: s = (dice + iou)/2,
// w = clip(0.5 + beta * (1 - s)). beta defaults to 0 so w = 0.5; the
// agreement statistic is reported either way.
inline double init_weight(const Mask& a1, const Mask& a2, const LossConfig& cfg,
                          double* agreement_out = nullptr) {
    const double s = 0.5 * (dice(a1, a2) + iou(a1, a2));
    if (agreement_out) *agreement_out = s;
    return clip_weight(0.5 + cfg.beta * (1.0 - s), cfg);
}

// Per-epoch weight from the previous epoch's decoder-vs-own-annotation Dice
// means: the weaker decoder's annotation gains weight.
inline double adaptive_weight(double prev_w, double m1, double m2, double kappa,
                              const LossConfig& cfg) {
    (void)prev_w;
    const double x = kappa * (m2 - m1);
    return clip_weight(1.0 / (1.0 + std::exp(-x)), cfg);
}

}  // namespace unaah
