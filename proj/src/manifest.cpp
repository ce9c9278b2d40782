#include "unaah/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "unaah/errors.hpp"
#include "unaah/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace unaah {

std::string DatasetManifest::resolve(const std::string& path) const {
    const fs::path p(path);
    if (p.is_absolute() || root.empty()) return path;
    return (fs::path(root) / p).string();
}

std::vector<ManifestEntry> DatasetManifest::in_split(const std::string& which) const {
    if (split.empty()) return entries;
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
        const auto it = split.find(e.group);
        if (it != split.end() && it->second == which) out.push_back(e);
    }
    return out;
}

std::vector<std::string> DatasetManifest::group_ids() const {
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (const auto& e : entries)
        if (seen.insert(e.group).second) ids.push_back(e.group);
    return ids;
}

namespace {

[[noreturn]] void line_error(const std::string& path, int line, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

std::string require_string(const json& obj, const char* key, const std::string& path, int line) {
    if (!obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty())
        line_error(path, line, std::string("missing or empty \"") + key + "\"");
    return obj[key].get<std::string>();
}

}  // namespace

DatasetManifest load_manifest(const std::string& path, bool check_files) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open manifest");

    DatasetManifest m;
    m.root = fs::path(path).parent_path().string();

    std::set<std::string> seen_paths;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            line_error(path, lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) line_error(path, lineno, "entry is not a JSON object");

        ManifestEntry e;
        e.image = require_string(obj, "image", path, lineno);
        e.mask1 = require_string(obj, "mask1", path, lineno);
        e.mask2 = require_string(obj, "mask2", path, lineno);
        e.group = require_string(obj, "group", path, lineno);

        for (const auto* p : {&e.image, &e.mask1, &e.mask2}) {
            if (!seen_paths.insert(*p).second)
                line_error(path, lineno, "duplicate path \"" + *p + "\"");
            if (check_files && !fs::exists(m.resolve(*p)))
                line_error(path, lineno, "referenced file does not exist: " + m.resolve(*p));
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

void load_split_file(DatasetManifest& manifest, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open split file");
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError(path + ": split file must be a JSON object");
    manifest.split.clear();
    for (const auto& [group, name] : obj.items()) {
        if (!name.is_string() ||
            (name != "train" && name != "val" && name != "test"))
            throw DataError(path + ": group \"" + group +
                            "\" must map to train, val or test");
        manifest.split[group] = name.get<std::string>();
    }
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError(path + ": cannot write manifest");
    for (const auto& e : manifest.entries) {
        const json obj = {{"image", e.image}, {"mask1", e.mask1}, {"mask2", e.mask2},
                          {"group", e.group}};
        out << obj.dump() << "\n";
    }
}

void save_split_file(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError(path + ": cannot write split file");
    const json obj(manifest.split);
    out << obj.dump(2) << "\n";
}

DatasetManifest group_split(const DatasetManifest& manifest, double train_frac, double val_frac,
                            double test_frac, uint64_t seed) {
    const double fracs[3] = {train_frac, val_frac, test_frac};
    double sum = 0.0;
    for (double f : fracs) {
        if (f < 0.0) throw ConfigError("split fractions must be nonnegative");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");

    std::vector<std::string> groups = manifest.group_ids();
    int nonzero = 0;
    for (double f : fracs)
        if (f > 0.0) ++nonzero;
    if (int(groups.size()) < nonzero)
        throw DataError("too few groups (" + std::to_string(groups.size()) + ") for " +
                        std::to_string(nonzero) + " nonzero split fractions");

    // Fisher-Yates with the project RNG, then largest-remainder apportionment
    Rng rng(mix_stream(seed, 0x73706c6974ull));  // "split"
    for (size_t i = groups.size(); i > 1; --i)
        std::swap(groups[i - 1], groups[size_t(rng.uniform_int(0, int(i) - 1))]);

    const int g = int(groups.size());
    int counts[3];
    double remainders[3];
    int assigned = 0;
    for (int k = 0; k < 3; ++k) {
        const double share = fracs[k] * g;
        counts[k] = int(std::floor(share));
        remainders[k] = share - counts[k];
        assigned += counts[k];
    }
    while (assigned < g) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (remainders[k] > remainders[best]) best = k;
        ++counts[best];
        remainders[best] = -1.0;
        ++assigned;
    }
    // every nonzero fraction gets at least one group
    for (int k = 0; k < 3; ++k) {
        while (fracs[k] > 0.0 && counts[k] == 0) {
            int donor = 0;
            for (int j = 1; j < 3; ++j)
                if (counts[j] > counts[donor]) donor = j;
            --counts[donor];
            ++counts[k];
        }
    }

    DatasetManifest out = manifest;
    out.split.clear();
    const char* names[3] = {"train", "val", "test"};
    int idx = 0;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < counts[k]; ++i) out.split[groups[size_t(idx++)]] = names[k];
    return out;
}

}  // namespace unaah
