#include "unaah/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "unaah/errors.hpp"
#include "unaah/png_io.hpp"
#include "unaah/rng.hpp"

namespace fs = std::filesystem;

namespace unaah {

namespace {

constexpr int kVertices = 72;
constexpr uint64_t kStream = 0x73796e7468ull;

// Scanline fill (even-odd rule) of a closed polygon, OR-ed into the mask.
// Pixel centers sit at integer + 0.5.
void rasterize_polygon(const std::vector<double>& vx, const std::vector<double>& vy, Mask& m) {
    const size_t n = vx.size();
    std::vector<double> xs;
    for (int y = 0; y < m.height; ++y) {
        const double yc = y + 0.5;
        xs.clear();
        for (size_t i = 0; i < n; ++i) {
            const size_t j = (i + 1) % n;
            const double y0 = vy[i], y1 = vy[j];
            if ((y0 <= yc && y1 > yc) || (y1 <= yc && y0 > yc))
                xs.push_back(vx[i] + (yc - y0) / (y1 - y0) * (vx[j] - vx[i]));
        }
        std::sort(xs.begin(), xs.end());
        for (size_t i = 0; i + 1 < xs.size(); i += 2) {
            const int x_begin = std::max(0, int(std::ceil(xs[i] - 0.5)));
            const int x_end = std::min(m.width, int(std::ceil(xs[i + 1] - 0.5)));
            for (int x = x_begin; x < x_end; ++x) m.at(y, x) = 1;
        }
    }
}

void disk_polygon(double cy, double cx, const std::vector<double>& radii, std::vector<double>& vx,
                  std::vector<double>& vy) {
    vx.resize(radii.size());
    vy.resize(radii.size());
    for (size_t v = 0; v < radii.size(); ++v) {
        const double theta = 2.0 * M_PI * double(v) / double(radii.size());
        vx[v] = cx + radii[v] * std::cos(theta);
        vy[v] = cy + radii[v] * std::sin(theta);
    }
}

std::string item_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img_%05d", i);
    return buf;
}

}  // namespace

DatasetManifest generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
    spec.validate();
    const fs::path root(out_dir);
    for (const char* sub : {"images", "masks1", "masks2", "base"})
        fs::create_directories(root / sub);

    const double slack = std::max(std::abs(spec.bias_1), std::abs(spec.bias_2)) +
                         3.0 * spec.jitter_std + 2.0;
    double margin = spec.radius_max + slack;
    margin = std::min(margin, spec.image_size / 2.0 - 1.0);

    DatasetManifest manifest;
    manifest.root = out_dir;
    manifest.entries.resize(size_t(spec.n_images));

    for (int i = 0; i < spec.n_images; ++i) {
        Rng rng(item_stream(spec.seed, kStream, uint64_t(i), 0));
        const int h = spec.image_size, w = spec.image_size;
        Mask base(h, w);
        Mask a1 = base, a2 = base;

        const int n_disks = rng.uniform_int(spec.disks_min, spec.disks_max);
        std::vector<double> r_base(kVertices), r_1(kVertices), r_2(kVertices);
        std::vector<double> vx, vy;
        for (int d = 0; d < n_disks; ++d) {
            const double cy = rng.uniform(margin, h - margin);
            const double cx = rng.uniform(margin, w - margin);
            const double r = rng.uniform(spec.radius_min, spec.radius_max);
            for (int v = 0; v < kVertices; ++v) {
                const double j1 = rng.normal(0.0, spec.jitter_std);
                const double j2 = rng.normal(0.0, spec.jitter_std);
                r_base[size_t(v)] = r;
                r_1[size_t(v)] = std::max(1.0, r + spec.bias_1 + j1);
                r_2[size_t(v)] = std::max(1.0, r + spec.bias_2 + j2);
            }
            disk_polygon(cy, cx, r_base, vx, vy);
            rasterize_polygon(vx, vy, base);
            disk_polygon(cy, cx, r_1, vx, vy);
            rasterize_polygon(vx, vy, a1);
            disk_polygon(cy, cx, r_2, vx, vy);
            rasterize_polygon(vx, vy, a2);
        }

        Raster img;
        img.height = h;
        img.width = w;
        img.channels = spec.channels;
        img.data.resize(size_t(h) * w * spec.channels);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const bool fg = base.at(y, x) != 0;
                const double v = rng.normal(fg ? spec.fg_mean : spec.bg_mean,
                                            fg ? spec.fg_std : spec.bg_std);
                const float pv = float(std::clamp(v, 0.0, 1.0));
                for (int c = 0; c < spec.channels; ++c) img.at(y, x, c) = pv;
            }
        }

        const std::string name = item_name(i);
        write_image_png((root / "images" / (name + ".png")).string(), img);
        write_mask_png((root / "masks1" / (name + ".png")).string(), a1);
        write_mask_png((root / "masks2" / (name + ".png")).string(), a2);
        write_mask_png((root / "base" / (name + ".png")).string(), base);

        ManifestEntry& e = manifest.entries[size_t(i)];
        e.image = "images/" + name + ".png";
        e.mask1 = "masks1/" + name + ".png";
        e.mask2 = "masks2/" + name + ".png";
        e.group = name;
    }

    save_manifest(manifest, (root / "manifest.jsonl").string());
    std::ofstream spec_out(root / "spec.json");
    spec_out << to_json_text(spec) << "\n";
    if (!spec_out) throw DataError("failed to write " + (root / "spec.json").string());
    return manifest;
}

}  // namespace unaah
