#include "unaah/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <vector>

#include "json.hpp"
#include "unaah/errors.hpp"

using nlohmann::json;

namespace unaah {

namespace {

constexpr char kMagic[8] = {'U', 'N', 'A', 'A', 'H', 'C', 'K', '1'};

json spec_to_json(const ModelSpec& s) {
    return {{"in_channels", s.in_channels},
            {"num_classes", s.num_classes},
            {"stage_channels", s.stage_channels},
            {"num_decoders", s.num_decoders},
            {"upsample", to_string(s.upsample)},
            {"aggregate", to_string(s.aggregate)}};
}

void check_spec_match(const json& stored, const ModelSpec& spec, const std::string& path) {
    const json current = spec_to_json(spec);
    for (const auto& item : current.items()) {
        if (!stored.contains(item.key()) || stored[item.key()] != item.value())
            throw DataError(path + ": checkpoint model mismatch at \"" + item.key() +
                            "\" (checkpoint " +
                            (stored.contains(item.key()) ? stored[item.key()].dump() : "absent") +
                            ", model " + item.value().dump() + ")");
    }
}

CheckpointMeta meta_from_header(const json& hdr, const std::string& path) {
    CheckpointMeta meta;
    try {
        const json& s = hdr.at("spec");
        meta.spec.in_channels = s.at("in_channels").get<int>();
        meta.spec.num_classes = s.at("num_classes").get<int>();
        meta.spec.stage_channels = s.at("stage_channels").get<std::vector<int>>();
        meta.spec.num_decoders = s.at("num_decoders").get<int>();
        meta.spec.upsample = s.at("upsample").get<std::string>() == "tconv"
                                 ? UpsampleMode::tconv
                                 : UpsampleMode::bilinear;
        meta.spec.aggregate = s.at("aggregate").get<std::string>() == "prob_mean"
                                  ? AggregateMode::prob_mean
                                  : AggregateMode::logit_sum;
        meta.seed = hdr.at("seed").get<uint64_t>();
        meta.epoch = hdr.at("epoch").get<int>();
        meta.input_size = hdr.value("input_size", 0);
        meta.variant = hdr.value("variant", "");
    } catch (const json::exception& e) {
        throw DataError(path + ": malformed checkpoint header: " + e.what());
    }
    return meta;
}

json read_header(std::ifstream& in, const std::string& path) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw DataError(path + ": not a checkpoint file");
    uint32_t hdr_len = 0;
    in.read(reinterpret_cast<char*>(&hdr_len), 4);
    if (!in || hdr_len == 0 || hdr_len > (64u << 20))
        throw DataError(path + ": corrupt checkpoint header");
    std::string text(hdr_len, '\0');
    in.read(text.data(), hdr_len);
    if (!in) throw DataError(path + ": truncated checkpoint header");
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(path + ": invalid checkpoint header: " + e.what());
    }
}

}  // namespace

void save_checkpoint(const std::string& path, UnaahNet<float>& net, const CheckpointMeta& meta) {
    json dir = json::array();
    std::vector<const std::vector<float>*> blobs;
    net.for_each_param([&](const std::string& name, std::vector<float>& w, std::vector<float>&) {
        dir.push_back({{"name", name}, {"size", w.size()}});
        blobs.push_back(&w);
    });
    // batchnorm running statistics ride along as f64 so eval-mode forward
    // passes survive a reload exactly
    json stats_dir = json::array();
    std::vector<const std::vector<double>*> stat_blobs;
    net.for_each_stat([&](const std::string& name, std::vector<double>& s) {
        stats_dir.push_back({{"name", name}, {"size", s.size()}});
        stat_blobs.push_back(&s);
    });

    const json hdr = {{"format_version", 1}, {"spec", spec_to_json(net.spec)},
                      {"seed", meta.seed},   {"epoch", meta.epoch},
                      {"variant", meta.variant}, {"input_size", meta.input_size},
                      {"dtype", "f32"},      {"tensors", dir},
                      {"stats", stats_dir}};
    const std::string text = hdr.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot write checkpoint");
    out.write(kMagic, 8);
    const uint32_t hdr_len = uint32_t(text.size());
    out.write(reinterpret_cast<const char*>(&hdr_len), 4);
    out.write(text.data(), std::streamsize(text.size()));
    for (const auto* blob : blobs)
        out.write(reinterpret_cast<const char*>(blob->data()),
                  std::streamsize(blob->size() * sizeof(float)));
    for (const auto* blob : stat_blobs)
        out.write(reinterpret_cast<const char*>(blob->data()),
                  std::streamsize(blob->size() * sizeof(double)));
    if (!out) throw DataError(path + ": checkpoint write failed");
}

CheckpointMeta read_checkpoint_meta(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open checkpoint");
    return meta_from_header(read_header(in, path), path);
}

CheckpointMeta load_checkpoint(const std::string& path, UnaahNet<float>& net) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open checkpoint");
    const json hdr = read_header(in, path);
    const CheckpointMeta meta = meta_from_header(hdr, path);
    check_spec_match(hdr.at("spec"), net.spec, path);

    std::map<std::string, std::vector<float>*> params;
    net.for_each_param([&](const std::string& name, std::vector<float>& w, std::vector<float>&) {
        params[name] = &w;
    });

    size_t loaded = 0;
    for (const auto& entry : hdr.at("tensors")) {
        const std::string name = entry.at("name").get<std::string>();
        const size_t size = entry.at("size").get<size_t>();
        const auto it = params.find(name);
        if (it == params.end())
            throw DataError(path + ": checkpoint tensor \"" + name + "\" not present in model");
        if (it->second->size() != size)
            throw DataError(path + ": size mismatch for \"" + name + "\" (checkpoint " +
                            std::to_string(size) + ", model " +
                            std::to_string(it->second->size()) + ")");
        in.read(reinterpret_cast<char*>(it->second->data()),
                std::streamsize(size * sizeof(float)));
        if (!in) throw DataError(path + ": truncated checkpoint data at \"" + name + "\"");
        ++loaded;
    }
    if (loaded != params.size())
        throw DataError(path + ": checkpoint holds " + std::to_string(loaded) +
                        " tensors, model has " + std::to_string(params.size()));

    std::map<std::string, std::vector<double>*> stats;
    net.for_each_stat([&](const std::string& name, std::vector<double>& s) { stats[name] = &s; });
    size_t stats_loaded = 0;
    for (const auto& entry : hdr.value("stats", json::array())) {
        const std::string name = entry.at("name").get<std::string>();
        const size_t size = entry.at("size").get<size_t>();
        const auto it = stats.find(name);
        if (it == stats.end())
            throw DataError(path + ": checkpoint stat \"" + name + "\" not present in model");
        if (it->second->size() != size)
            throw DataError(path + ": size mismatch for \"" + name + "\" (checkpoint " +
                            std::to_string(size) + ", model " +
                            std::to_string(it->second->size()) + ")");
        in.read(reinterpret_cast<char*>(it->second->data()),
                std::streamsize(size * sizeof(double)));
        if (!in) throw DataError(path + ": truncated checkpoint data at \"" + name + "\"");
        ++stats_loaded;
    }
    if (stats_loaded != stats.size())
        throw DataError(path + ": checkpoint holds " + std::to_string(stats_loaded) +
                        " stat buffers, model has " + std::to_string(stats.size()));
    return meta;
}

}  // namespace unaah
