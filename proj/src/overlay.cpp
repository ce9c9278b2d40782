#include "unaah/overlay.hpp"

#include <algorithm>

#include "unaah/errors.hpp"

namespace unaah {

namespace {

// Foreground pixels with a background 4-neighbor (or on the image border).
Mask contour_of(const Mask& m) {
    Mask c(m.height, m.width);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(y, x)) continue;
            const bool edge = y == 0 || x == 0 || y == m.height - 1 || x == m.width - 1 ||
                              !m.at(y - 1, x) || !m.at(y + 1, x) || !m.at(y, x - 1) ||
                              !m.at(y, x + 1);
            if (edge) c.at(y, x) = 1;
        }
    }
    return c;
}

void blit_gray(Raster& canvas, int left, const Raster& image) {
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const int src_c = image.channels >= 3 ? c : 0;
                canvas.at(y, left + x, c) = image.at(y, x, src_c);
            }
        }
    }
}

void blit_mask(Raster& canvas, int left, const Mask& m) {
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            for (int c = 0; c < 3; ++c) canvas.at(y, left + x, c) = m.at(y, x) ? 1.f : 0.f;
}

void draw_contour(Raster& canvas, int left, const Mask& contour, int channel) {
    for (int y = 0; y < contour.height; ++y) {
        for (int x = 0; x < contour.width; ++x) {
            if (!contour.at(y, x)) continue;
            for (int c = 0; c < 3; ++c)
                canvas.at(y, left + x, c) = c == channel ? 1.f : 0.15f;
        }
    }
}

}  // namespace

Raster render_overlay(const AnnotationPair& pair, const std::vector<Mask>& predictions) {
    pair.validate();
    const int h = pair.sample.image.height, w = pair.sample.image.width;
    for (const Mask& p : predictions)
        if (p.height != h || p.width != w)
            throw DataError("prediction dimensions do not match the sample");

    const int panels = 3 + int(predictions.size());
    Raster canvas;
    canvas.height = h;
    canvas.width = panels * w;
    canvas.channels = 3;
    canvas.data.assign(size_t(h) * canvas.width * 3, 0.f);

    blit_gray(canvas, 0, pair.sample.image);
    blit_mask(canvas, w, pair.mask_1);
    blit_mask(canvas, 2 * w, pair.mask_2);
    for (size_t i = 0; i < predictions.size(); ++i) {
        const int left = int(3 + i) * w;
        blit_gray(canvas, left, pair.sample.image);
        draw_contour(canvas, left, contour_of(pair.mask_1), 1);   // green: annotator 1
        draw_contour(canvas, left, contour_of(pair.mask_2), 2);   // blue: annotator 2
        draw_contour(canvas, left, contour_of(predictions[i]), 0);  // red: model
    }
    return canvas;
}

}  // namespace unaah
