#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "unaah/errors.hpp"

namespace unaah {

// Binary per-pixel annotation raster. Pixels are strictly 0 or 1.
struct Mask {
    int height = 0, width = 0;
    std::vector<uint8_t> data;  // row-major

    Mask() = default;
    Mask(int height_, int width_, uint8_t fill = 0)
        : height(height_), width(width_), data(size_t(height_) * width_, fill) {}

    uint8_t& at(int y, int x) { return data[size_t(y) * width + x]; }
    uint8_t at(int y, int x) const { return data[size_t(y) * width + x]; }

    size_t area() const {
        size_t a = 0;
        for (uint8_t p : data) a += p;
        return a;
    }
    bool empty_fg() const { return area() == 0; }

    bool same_shape(const Mask& o) const { return height == o.height && width == o.width; }

    void validate() const {
        if (height <= 0 || width <= 0) throw DataError("mask has non-positive dimensions");
        for (uint8_t p : data)
            if (p > 1) throw DataError("mask pixel outside {0,1}");
    }
};

// H×W×C raster with values in [0,1]; C is 1 (intensity) or 3 (stain-style RGB).
struct Raster {
    int height = 0, width = 0, channels = 0;
    std::vector<float> data;  // row-major, channel innermost

    Raster() = default;
    Raster(int height_, int width_, int channels_, float fill = 0.f)
        : height(height_),
          width(width_),
          channels(channels_),
          data(size_t(height_) * width_ * channels_, fill) {}

    float& at(int y, int x, int c) { return data[(size_t(y) * width + x) * channels + c]; }
    float at(int y, int x, int c) const { return data[(size_t(y) * width + x) * channels + c]; }

    bool same_shape(const Raster& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

struct ImageSample {
    Raster image;
    std::string group_id;
    int source_row = 0;  // patch origin in the parent image
    int source_col = 0;
};

// One image with the reference annotations of both experts.
struct AnnotationPair {
    ImageSample sample;
    Mask mask_1;
    Mask mask_2;

    void validate() const {
        if (!mask_1.same_shape(mask_2) || mask_1.height != sample.image.height ||
            mask_1.width != sample.image.width)
            throw DataError("annotation masks must match the image dimensions");
        mask_1.validate();
        mask_2.validate();
    }
};

}  // namespace unaah
