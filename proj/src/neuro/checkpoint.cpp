#include "desmoke/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <map>

#include <json.hpp>

namespace desmoke {

namespace {

constexpr char kMagic[8] = {'D', 'S', 'M', 'K', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put_f32(std::string& out, double v) {
    float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
}

double get_f32(const unsigned char* p) {
    std::uint32_t bits = get_u32(p);
    float f;
    std::memcpy(&f, &bits, 4);
    return static_cast<double>(f);
}

nlohmann::json spec_to_json(const NetworkSpec& s) {
    return {{"image_channels", s.image_channels}, {"gen_encoder", s.gen_encoder},
            {"gen_decoder", s.gen_decoder},       {"disc_filters", s.disc_filters},
            {"tap_layers", s.tap_layers},         {"leaky_slope", s.leaky_slope}};
}

NetworkSpec spec_from_json(const nlohmann::json& j) {
    NetworkSpec s;
    s.image_channels = j.at("image_channels").get<int>();
    s.gen_encoder = j.at("gen_encoder").get<std::vector<int>>();
    s.gen_decoder = j.at("gen_decoder").get<std::vector<int>>();
    s.disc_filters = j.at("disc_filters").get<std::vector<int>>();
    s.tap_layers = j.at("tap_layers").get<std::vector<int>>();
    s.leaky_slope = j.at("leaky_slope").get<double>();
    s.validate();
    return s;
}

}  // namespace

Checkpoint snapshot(Generator& gen, Discriminator* disc, int image_size, long step) {
    Checkpoint ck;
    ck.spec = gen.spec();
    ck.image_size = image_size;
    ck.step = step;
    for (auto& [name, buf] : gen.state_buffers()) ck.buffers.emplace_back(name, *buf);
    if (disc) {
        for (auto& [name, buf] : disc->state_buffers()) ck.buffers.emplace_back(name, *buf);
    }
    return ck;
}

void restore(const Checkpoint& ck, Generator& gen, Discriminator* disc) {
    std::map<std::string, const std::vector<double>*> by_name;
    for (const auto& [name, buf] : ck.buffers) by_name[name] = &buf;

    auto apply = [&](std::vector<std::pair<std::string, std::vector<double>*>> targets) {
        for (auto& [name, buf] : targets) {
            auto it = by_name.find(name);
            require(it != by_name.end(), ErrorKind::format,
                    "checkpoint missing buffer " + name);
            require(it->second->size() == buf->size(), ErrorKind::shape,
                    "checkpoint buffer size mismatch for " + name);
            *buf = *it->second;
        }
    };
    apply(gen.state_buffers());
    if (disc) apply(disc->state_buffers());
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    nlohmann::json header;
    header["image_size"] = ck.image_size;
    header["step"] = ck.step;
    header["spec"] = spec_to_json(ck.spec);
    nlohmann::json dir = nlohmann::json::array();
    for (const auto& [name, buf] : ck.buffers) {
        dir.push_back({{"name", name}, {"size", buf.size()}});
    }
    header["buffers"] = dir;
    const std::string hjson = header.dump();

    std::string out;
    out.append(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(hjson.size()));
    out += hjson;
    for (const auto& [name, buf] : ck.buffers) {
        (void)name;
        for (double v : buf) put_f32(out, v);
    }

    std::FILE* f = std::fopen(path.c_str(), "wb");
    require(f != nullptr, ErrorKind::io, "cannot write checkpoint " + path);
    const bool ok = std::fwrite(out.data(), 1, out.size(), f) == out.size();
    std::fclose(f);
    require(ok, ErrorKind::io, "short write to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    require(f != nullptr, ErrorKind::io, "cannot open checkpoint " + path);
    std::string raw;
    char buf[65536];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) raw.append(buf, got);
    std::fclose(f);

    const unsigned char* p = reinterpret_cast<const unsigned char*>(raw.data());
    require(raw.size() >= 16 && std::memcmp(p, kMagic, sizeof kMagic) == 0, ErrorKind::format,
            "not a checkpoint file: " + path);
    require(get_u32(p + 8) == kVersion, ErrorKind::format, "unsupported checkpoint version");
    const std::uint32_t hlen = get_u32(p + 12);
    require(raw.size() >= 16 + static_cast<std::size_t>(hlen), ErrorKind::format,
            "truncated checkpoint header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(raw.substr(16, hlen));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::format, std::string("bad checkpoint header: ") + e.what());
    }

    Checkpoint ck;
    ck.image_size = header.at("image_size").get<int>();
    ck.step = header.at("step").get<long>();
    ck.spec = spec_from_json(header.at("spec"));

    std::size_t pos = 16 + hlen;
    for (const auto& entry : header.at("buffers")) {
        const std::string name = entry.at("name").get<std::string>();
        const std::size_t size = entry.at("size").get<std::size_t>();
        require(raw.size() >= pos + size * 4, ErrorKind::format,
                "truncated checkpoint data at " + name);
        std::vector<double> values(size);
        for (std::size_t i = 0; i < size; ++i) {
            values[i] = get_f32(p + pos + i * 4);
        }
        pos += size * 4;
        ck.buffers.emplace_back(name, std::move(values));
    }
    return ck;
}

}  // namespace desmoke
