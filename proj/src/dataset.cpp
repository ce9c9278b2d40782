#include "unaah/dataset.hpp"

#include <exception>

#include "unaah/augment.hpp"
#include "unaah/errors.hpp"
#include "unaah/png_io.hpp"
#include "unaah/rng.hpp"

namespace unaah {

std::vector<AnnotationPair> load_pairs(const DatasetManifest& manifest, const std::string& split) {
    const std::vector<ManifestEntry> wanted =
        split.empty() ? manifest.entries : manifest.in_split(split);

    std::vector<AnnotationPair> out(wanted.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < wanted.size(); ++i) {
        try {
            const ManifestEntry& e = wanted[i];
            AnnotationPair& pair = out[i];
            pair.sample.image = read_image_png(manifest.resolve(e.image));
            pair.sample.group_id = e.group;
            pair.mask_1 = read_mask_png(manifest.resolve(e.mask1));
            pair.mask_2 = read_mask_png(manifest.resolve(e.mask2));
            pair.validate();
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

Batch make_batch(const std::vector<BatchItem>& items, int input_size, int in_channels,
                 const AugmentConfig* aug, uint64_t seed, uint64_t epoch) {
    const int n = int(items.size());
    if (n == 0) throw DataError("empty batch");
    Batch batch;
    batch.x.resize(n, input_size, input_size, in_channels);
    batch.a1 = Labels(n, input_size, input_size);
    batch.a2 = Labels(n, input_size, input_size);

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            const AnnotationPair* pair = items[size_t(i)].pair;
            AnnotationPair local;
            if (aug && aug->enabled) {
                Rng rng(item_stream(seed, epoch, items[size_t(i)].index, 0));
                local = augment(*pair, *aug, rng);
                pair = &local;
            }
            const AnnotationPair sized = (pair->sample.image.height == input_size &&
                                          pair->sample.image.width == input_size)
                                             ? *pair
                                             : resize_sample(*pair, input_size);
            const Raster& img = sized.sample.image;
            if (img.channels != in_channels)
                throw DataError("image has " + std::to_string(img.channels) +
                                " channels, model expects " + std::to_string(in_channels));
            float* dst = &batch.x.v[batch.x.offset(i, 0, 0)];
            std::copy(img.data.begin(), img.data.end(), dst);
            const size_t plane = size_t(input_size) * input_size;
            for (size_t p = 0; p < plane; ++p) {
                batch.a1.v[size_t(i) * plane + p] = sized.mask_1.data[p] ? 1 : 0;
                batch.a2.v[size_t(i) * plane + p] = sized.mask_2.data[p] ? 1 : 0;
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return batch;
}

}  // namespace unaah
