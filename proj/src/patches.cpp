#include "unaah/patches.hpp"

#include <algorithm>
#include <cmath>

#include "unaah/errors.hpp"

namespace unaah {

std::vector<int> patch_anchors(int dim, int patch, int stride) {
    std::vector<int> anchors;
    for (int a = 0; a + patch <= dim; a += stride) anchors.push_back(a);
    if (anchors.empty() || anchors.back() != dim - patch) anchors.push_back(dim - patch);
    return anchors;
}

double content_fraction(const Raster& patch, const PatchSpec& spec) {
    const size_t pixels = size_t(patch.height) * size_t(patch.width);
    if (pixels == 0) return 0.0;
    size_t content = 0;
    if (patch.channels >= 3) {
        for (int y = 0; y < patch.height; ++y) {
            for (int x = 0; x < patch.width; ++x) {
                const float r = patch.at(y, x, 0), g = patch.at(y, x, 1), b = patch.at(y, x, 2);
                const float lum = 0.2126f * r + 0.7152f * g + 0.0722f * b;
                const float hi = std::max({r, g, b});
                const float lo = std::min({r, g, b});
                const float sat = hi > 0.f ? (hi - lo) / hi : 0.f;
                if (lum < float(spec.white_luminance) && sat > float(spec.min_saturation))
                    ++content;
            }
        }
    } else {
        for (int y = 0; y < patch.height; ++y)
            for (int x = 0; x < patch.width; ++x)
                if (patch.at(y, x, 0) > float(spec.intensity_threshold)) ++content;
    }
    return double(content) / double(pixels);
}

Raster crop_raster(const Raster& image, int top, int left, int size) {
    Raster out;
    out.height = size;
    out.width = size;
    out.channels = image.channels;
    out.data.resize(size_t(size) * size_t(size) * size_t(image.channels));
    for (int y = 0; y < size; ++y) {
        const float* src = &image.data[(size_t(top + y) * image.width + left) * image.channels];
        std::copy(src, src + size_t(size) * image.channels,
                  &out.data[size_t(y) * size * image.channels]);
    }
    return out;
}

Mask crop_mask(const Mask& mask, int top, int left, int size) {
    Mask out;
    out.height = size;
    out.width = size;
    out.data.resize(size_t(size) * size_t(size));
    for (int y = 0; y < size; ++y) {
        const uint8_t* src = &mask.data[size_t(top + y) * mask.width + left];
        std::copy(src, src + size, &out.data[size_t(y) * size]);
    }
    return out;
}

std::vector<AnnotationPair> extract_patches(const Raster& image, const Mask& mask_1,
                                            const Mask& mask_2, const PatchSpec& spec,
                                            const std::string& group_id) {
    spec.validate();
    const int p = spec.patch_size;
    if (image.height < p || image.width < p)
        throw DataError("image " + std::to_string(image.width) + "x" +
                        std::to_string(image.height) + " is smaller than patch size " +
                        std::to_string(p));
    if (mask_1.height != image.height || mask_1.width != image.width ||
        mask_2.height != image.height || mask_2.width != image.width)
        throw DataError("mask dimensions do not match the image");

    const auto rows = patch_anchors(image.height, p, spec.stride());
    const auto cols = patch_anchors(image.width, p, spec.stride());
    struct Cell {
        int top, left;
        bool keep;
    };
    std::vector<Cell> grid;
    grid.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols) grid.push_back({r, c, false});

#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < grid.size(); ++i) {
        const Raster patch = crop_raster(image, grid[i].top, grid[i].left, p);
        grid[i].keep = content_fraction(patch, spec) >= spec.content_threshold;
    }

    std::vector<AnnotationPair> out;
    for (const Cell& cell : grid) {
        if (!cell.keep) continue;
        AnnotationPair pair;
        pair.sample.image = crop_raster(image, cell.top, cell.left, p);
        pair.sample.group_id = group_id;
        pair.sample.source_row = cell.top;
        pair.sample.source_col = cell.left;
        pair.mask_1 = crop_mask(mask_1, cell.top, cell.left, p);
        pair.mask_2 = crop_mask(mask_2, cell.top, cell.left, p);
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace unaah
