#include "unaah/augment.hpp"

#include <algorithm>
#include <cmath>

#include "unaah/errors.hpp"

namespace unaah {

namespace {

// Pixel-center sampling: output pixel o reads source coordinate
// (o + 0.5) * in/out - 0.5.
inline double src_coord(int o, int in, int out) {
    return (double(o) + 0.5) * double(in) / double(out) - 0.5;
}

inline int nearest_index(int o, int in, int out) {
    const int i = int(std::floor((double(o) + 0.5) * double(in) / double(out)));
    return std::clamp(i, 0, in - 1);
}

float sample_bilinear(const Raster& in, double y, double x, int c) {
    if (y < -0.5 || x < -0.5 || y > in.height - 0.5 || x > in.width - 0.5) return 0.f;
    const int y0 = std::clamp(int(std::floor(y)), 0, in.height - 1);
    const int x0 = std::clamp(int(std::floor(x)), 0, in.width - 1);
    const int y1 = std::min(y0 + 1, in.height - 1);
    const int x1 = std::min(x0 + 1, in.width - 1);
    const double fy = std::clamp(y - std::floor(y), 0.0, 1.0);
    const double fx = std::clamp(x - std::floor(x), 0.0, 1.0);
    const double top = (1.0 - fx) * in.at(y0, x0, c) + fx * in.at(y0, x1, c);
    const double bot = (1.0 - fx) * in.at(y1, x0, c) + fx * in.at(y1, x1, c);
    return float((1.0 - fy) * top + fy * bot);
}

uint8_t sample_nearest_mask(const Mask& in, double y, double x) {
    const int yi = int(std::lround(y));
    const int xi = int(std::lround(x));
    if (yi < 0 || xi < 0 || yi >= in.height || xi >= in.width) return 0;
    return in.at(yi, xi);
}

struct Affine {
    // maps output pixel coordinates to source coordinates
    double a, b, c;  // sx = a*x + b*y + c
    double d, e, f;  // sy = d*x + e*y + f
};

Affine rotation_about_center(double degrees, int h, int w) {
    const double rad = degrees * M_PI / 180.0;
    const double co = std::cos(rad), si = std::sin(rad);
    const double cy = (h - 1) * 0.5, cx = (w - 1) * 0.5;
    // inverse rotation: rotate output coords by -angle around the center
    Affine t;
    t.a = co;
    t.b = si;
    t.c = cx - co * cx - si * cy;
    t.d = -si;
    t.e = co;
    t.f = cy + si * cx - co * cy;
    return t;
}

void apply_affine(const AnnotationPair& in, const Affine& t, AnnotationPair& out) {
    const int h = in.sample.image.height, w = in.sample.image.width;
    out.sample.image.height = h;
    out.sample.image.width = w;
    out.sample.image.channels = in.sample.image.channels;
    out.sample.image.data.assign(in.sample.image.data.size(), 0.f);
    out.mask_1.height = out.mask_2.height = h;
    out.mask_1.width = out.mask_2.width = w;
    out.mask_1.data.assign(size_t(h) * w, 0);
    out.mask_2.data.assign(size_t(h) * w, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double sx = t.a * x + t.b * y + t.c;
            const double sy = t.d * x + t.e * y + t.f;
            for (int c = 0; c < in.sample.image.channels; ++c)
                out.sample.image.at(y, x, c) = sample_bilinear(in.sample.image, sy, sx, c);
            out.mask_1.at(y, x) = sample_nearest_mask(in.mask_1, sy, sx);
            out.mask_2.at(y, x) = sample_nearest_mask(in.mask_2, sy, sx);
        }
    }
}

void flip_pair(AnnotationPair& p, bool horizontal, bool vertical) {
    const int h = p.sample.image.height, w = p.sample.image.width;
    auto dst_y = [&](int y) { return vertical ? h - 1 - y : y; };
    auto dst_x = [&](int x) { return horizontal ? w - 1 - x : x; };
    Raster img = p.sample.image;
    Mask m1 = p.mask_1, m2 = p.mask_2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < img.channels; ++c)
                p.sample.image.at(dst_y(y), dst_x(x), c) = img.at(y, x, c);
            p.mask_1.at(dst_y(y), dst_x(x)) = m1.at(y, x);
            p.mask_2.at(dst_y(y), dst_x(x)) = m2.at(y, x);
        }
    }
}

}  // namespace

Raster resize_raster(const Raster& in, int out_h, int out_w) {
    Raster out;
    out.height = out_h;
    out.width = out_w;
    out.channels = in.channels;
    out.data.resize(size_t(out_h) * out_w * in.channels);
    for (int y = 0; y < out_h; ++y) {
        const double sy = src_coord(y, in.height, out_h);
        for (int x = 0; x < out_w; ++x) {
            const double sx = src_coord(x, in.width, out_w);
            for (int c = 0; c < in.channels; ++c)
                out.at(y, x, c) =
                    sample_bilinear(in, std::clamp(sy, 0.0, double(in.height - 1)),
                                    std::clamp(sx, 0.0, double(in.width - 1)), c);
        }
    }
    return out;
}

Mask resize_mask(const Mask& in, int out_h, int out_w) {
    Mask out;
    out.height = out_h;
    out.width = out_w;
    out.data.resize(size_t(out_h) * out_w);
    for (int y = 0; y < out_h; ++y) {
        const int sy = nearest_index(y, in.height, out_h);
        for (int x = 0; x < out_w; ++x)
            out.at(y, x) = in.at(sy, nearest_index(x, in.width, out_w));
    }
    return out;
}

AnnotationPair resize_sample(const AnnotationPair& pair, int size) {
    if (size <= 0) throw ConfigError("resize target must be positive");
    AnnotationPair out;
    out.sample = pair.sample;
    out.sample.image = resize_raster(pair.sample.image, size, size);
    out.mask_1 = resize_mask(pair.mask_1, size, size);
    out.mask_2 = resize_mask(pair.mask_2, size, size);
    return out;
}

AnnotationPair augment(const AnnotationPair& pair, const AugmentConfig& cfg, Rng& draw) {
    cfg.validate();
    pair.validate();
    if (!cfg.enabled) return pair;

    // fixed draw order keeps a given rng state reproducible
    const double angle = draw.uniform(cfg.rotation_min, cfg.rotation_max);
    const bool flip_h = draw.bernoulli(cfg.flip_prob);
    const bool flip_v = draw.bernoulli(cfg.flip_prob);
    const bool do_crop = draw.bernoulli(cfg.crop_resize_prob);
    const double crop_scale = draw.uniform(0.7, 1.0);
    const double crop_oy = draw.uniform(0.0, 1.0);
    const double crop_ox = draw.uniform(0.0, 1.0);

    AnnotationPair out = pair;
    if (angle != 0.0) {
        AnnotationPair rotated;
        rotated.sample = pair.sample;
        apply_affine(pair, rotation_about_center(angle, pair.sample.image.height,
                                                 pair.sample.image.width),
                     rotated);
        out = std::move(rotated);
    }
    if (flip_h || flip_v) flip_pair(out, flip_h, flip_v);
    if (do_crop) {
        const int h = out.sample.image.height, w = out.sample.image.width;
        const int ch = std::max(1, int(std::lround(h * crop_scale)));
        const int cw = std::max(1, int(std::lround(w * crop_scale)));
        const int top = int(std::lround(crop_oy * (h - ch)));
        const int left = int(std::lround(crop_ox * (w - cw)));
        AnnotationPair cropped;
        cropped.sample = out.sample;
        cropped.sample.image.height = ch;
        cropped.sample.image.width = cw;
        cropped.sample.image.data.resize(size_t(ch) * cw * out.sample.image.channels);
        for (int y = 0; y < ch; ++y)
            for (int x = 0; x < cw; ++x)
                for (int c = 0; c < out.sample.image.channels; ++c)
                    cropped.sample.image.at(y, x, c) = out.sample.image.at(top + y, left + x, c);
        auto crop_m = [&](const Mask& m) {
            Mask r;
            r.height = ch;
            r.width = cw;
            r.data.resize(size_t(ch) * cw);
            for (int y = 0; y < ch; ++y)
                for (int x = 0; x < cw; ++x) r.at(y, x) = m.at(top + y, left + x);
            return r;
        };
        cropped.mask_1 = crop_m(out.mask_1);
        cropped.mask_2 = crop_m(out.mask_2);
        cropped.sample.image = resize_raster(cropped.sample.image, h, w);
        cropped.mask_1 = resize_mask(cropped.mask_1, h, w);
        cropped.mask_2 = resize_mask(cropped.mask_2, h, w);
        out = std::move(cropped);
    }

    if (out.sample.image.channels >= 3) {
        if (cfg.hue_contrast_jitter) {
            const double contrast = draw.uniform(0.75, 1.25);
            const double gain_r = draw.uniform(0.9, 1.1);
            const double gain_b = draw.uniform(0.9, 1.1);
            double mean = 0.0;
            for (float v : out.sample.image.data) mean += v;
            mean /= double(out.sample.image.data.size());
            Raster& img = out.sample.image;
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    for (int c = 0; c < img.channels; ++c) {
                        double v = mean + contrast * (img.at(y, x, c) - mean);
                        if (c == 0) v *= gain_r;
                        if (c == 2) v *= gain_b;
                        img.at(y, x, c) = float(std::clamp(v, 0.0, 1.0));
                    }
                }
            }
        }
    } else {
        const double gain = draw.uniform(cfg.brightness_min, cfg.brightness_max);
        if (gain != 1.0)
            for (float& v : out.sample.image.data) v = float(std::clamp(double(v) * gain, 0.0, 1.0));
    }
    return out;
}

}  // namespace unaah
