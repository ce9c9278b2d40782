#include "unaah/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "unaah/errors.hpp"

namespace unaah {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const char* what) {
    throw DataError(path + ": " + what);
}

struct PngRead {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngRead() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWrite {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWrite() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

// Decodes to 8- or 16-bit gray or RGB rows; rows, width, height, channels and
// bit depth come back through the out-params.
void decode(const std::string& path, std::vector<std::vector<png_byte>>& rows, int& width,
            int& height, int& channels, int& bit_depth) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail(path, "cannot open file");

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        fail(path, "not a PNG file");

    PngRead r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) fail(path, "png_create_read_struct failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) fail(path, "png_create_info_struct failed");
    if (setjmp(png_jmpbuf(r.png))) fail(path, "libpng read error");

    png_init_io(r.png, fp.get());
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);

    const png_byte color = png_get_color_type(r.png, r.info);
    bit_depth = png_get_bit_depth(r.png, r.info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(r.png, r.info, PNG_INFO_tRNS))
        png_set_strip_alpha(r.png);
    png_set_interlace_handling(r.png);
    png_read_update_info(r.png, r.info);

    width = int(png_get_image_width(r.png, r.info));
    height = int(png_get_image_height(r.png, r.info));
    channels = int(png_get_channels(r.png, r.info));
    bit_depth = int(png_get_bit_depth(r.png, r.info));
    if (width <= 0 || height <= 0) fail(path, "empty image");
    if (bit_depth != 8 && bit_depth != 16) fail(path, "unsupported bit depth");

    const size_t rowbytes = png_get_rowbytes(r.png, r.info);
    rows.assign(size_t(height), std::vector<png_byte>(rowbytes));
    std::vector<png_bytep> ptrs(rows.size());
    for (int y = 0; y < height; ++y) ptrs[size_t(y)] = rows[size_t(y)].data();
    png_read_image(r.png, ptrs.data());
    png_read_end(r.png, nullptr);
}

// 16-bit PNG samples are big-endian on disk
inline unsigned sample_at(const std::vector<png_byte>& row, size_t idx, int bit_depth) {
    if (bit_depth == 8) return row[idx];
    return (unsigned(row[idx * 2]) << 8) | row[idx * 2 + 1];
}

}  // namespace

Raster read_image_png(const std::string& path) {
    std::vector<std::vector<png_byte>> rows;
    int w = 0, h = 0, ch = 0, depth = 0;
    decode(path, rows, w, h, ch, depth);
    if (ch != 1 && ch != 3) fail(path, "expected 1 or 3 channels");

    Raster img(h, w, ch);
    const float scale = depth == 8 ? 1.f / 255.f : 1.f / 65535.f;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c)
                img.at(y, x, c) = scale * float(sample_at(rows[size_t(y)], size_t(x) * ch + c, depth));
    return img;
}

Mask read_mask_png(const std::string& path) {
    std::vector<std::vector<png_byte>> rows;
    int w = 0, h = 0, ch = 0, depth = 0;
    decode(path, rows, w, h, ch, depth);
    if (ch != 1) fail(path, "mask must be single-channel");

    Mask m(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            m.at(y, x) = sample_at(rows[size_t(y)], size_t(x), depth) != 0 ? 1 : 0;
    return m;
}

namespace {

void encode(const std::string& path, const std::vector<std::vector<png_byte>>& rows, int width,
            int height, int color_type) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(path, "cannot open file for writing");

    PngWrite wr;
    wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!wr.png) fail(path, "png_create_write_struct failed");
    wr.info = png_create_info_struct(wr.png);
    if (!wr.info) fail(path, "png_create_info_struct failed");
    if (setjmp(png_jmpbuf(wr.png))) fail(path, "libpng write error");

    png_init_io(wr.png, fp.get());
    png_set_IHDR(wr.png, wr.info, png_uint_32(width), png_uint_32(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(wr.png, wr.info);
    for (int y = 0; y < height; ++y)
        png_write_row(wr.png, const_cast<png_bytep>(rows[size_t(y)].data()));
    png_write_end(wr.png, nullptr);
}

inline png_byte quantize(float v) {
    const float c = v < 0.f ? 0.f : (v > 1.f ? 1.f : v);
    return png_byte(c * 255.f + 0.5f);
}

}  // namespace

void write_image_png(const std::string& path, const Raster& img) {
    if (img.channels != 1 && img.channels != 3)
        throw DataError(path + ": rasters must have 1 or 3 channels");
    std::vector<std::vector<png_byte>> rows(size_t(img.height),
                                            std::vector<png_byte>(size_t(img.width) * img.channels));
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                rows[size_t(y)][size_t(x) * img.channels + c] = quantize(img.at(y, x, c));
    encode(path, rows, img.width, img.height,
           img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB);
}

void write_mask_png(const std::string& path, const Mask& mask) {
    std::vector<std::vector<png_byte>> rows(size_t(mask.height),
                                            std::vector<png_byte>(size_t(mask.width)));
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            rows[size_t(y)][size_t(x)] = mask.at(y, x) ? 255 : 0;
    encode(path, rows, mask.width, mask.height, PNG_COLOR_TYPE_GRAY);
}

}  // namespace unaah
