#pragma once

#include <map>
#include <string>
#include <vector>

namespace unaah {

struct ManifestEntry {
    std::string image;
    std::string mask1;
    std::string mask2;
    std::string group;
};

// Dataset index. Entry paths are stored as written in the file and resolved
// against `root` (the manifest's directory) on access.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;            // file order
    std::map<std::string, std::string> split;      // group_id -> train|val|test
    std::string root;

    std::string resolve(const std::string& path) const;

    // entries whose group is assigned to `which`; everything if no split set
    std::vector<ManifestEntry> in_split(const std::string& which) const;

    std::vector<std::string> group_ids() const;  // unique, first-appearance order
};

// Parses a JSON-lines manifest (one object per line: image, mask1, mask2,
// group). Malformed lines, duplicate paths and missing files are reported
// with their line number. `check_files` exists so tests can build manifests
// for paths that are about to be written.
DatasetManifest load_manifest(const std::string& path, bool check_files = true);

// Optional sidecar: a JSON object mapping group_id -> split name.
void load_split_file(DatasetManifest& manifest, const std::string& path);

void save_manifest(const DatasetManifest& manifest, const std::string& path);
void save_split_file(const DatasetManifest& manifest, const std::string& path);

// Shuffles group ids with `seed` and deals them into train/val/test by the
// given fractions (largest-remainder rounding, at least one group per nonzero
// fraction). Returns a copy of the manifest with the split filled in.
DatasetManifest group_split(const DatasetManifest& manifest, double train_frac, double val_frac,
                            double test_frac, uint64_t seed);

}  // namespace unaah
