#include "desmoke/config.hpp"

#include <cstdio>
#include <sstream>

namespace desmoke {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse(item));
    }
    return out;
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    require(f != nullptr, ErrorKind::io, "cannot open config " + path);
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
    std::fclose(f);
    return from_string(text);
}

ConfigMap ConfigMap::from_string(const std::string& text) {
    ConfigMap cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::format,
                "config line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), ErrorKind::format,
                "config line " + std::to_string(lineno) + " has an empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

std::string ConfigMap::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::strtod(it->second.c_str(), nullptr);
}

int ConfigMap::get(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback
                               : static_cast<int>(std::strtol(it->second.c_str(), nullptr, 10));
}

std::uint64_t ConfigMap::get(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::strtoull(it->second.c_str(), nullptr, 10);
}

std::vector<int> ConfigMap::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_list<int>(it->second, [](const std::string& s) {
        return static_cast<int>(std::strtol(s.c_str(), nullptr, 10));
    });
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_list<double>(it->second,
                              [](const std::string& s) { return std::strtod(s.c_str(), nullptr); });
}

void apply_config(const ConfigMap& cfg, TrainConfig* train, NetworkSpec* spec,
                  LossWeights* weights) {
    if (train) {
        train->learning_rate = cfg.get("learning_rate", train->learning_rate);
        train->beta1 = cfg.get("beta1", train->beta1);
        train->beta2 = cfg.get("beta2", train->beta2);
        train->batch_size = cfg.get("batch_size", train->batch_size);
        train->epochs = cfg.get("epochs", train->epochs);
        train->image_size = cfg.get("image_size", train->image_size);
        train->seed = cfg.get("seed", train->seed);
    }
    if (spec) {
        spec->gen_encoder = cfg.get_int_list("gen_encoder", spec->gen_encoder);
        if (cfg.has("gen_encoder") && !cfg.has("gen_decoder")) {
            spec->gen_decoder.assign(spec->gen_encoder.rbegin() + 1, spec->gen_encoder.rend());
        } else {
            spec->gen_decoder = cfg.get_int_list("gen_decoder", spec->gen_decoder);
        }
        spec->disc_filters = cfg.get_int_list("disc_filters", spec->disc_filters);
        spec->tap_layers = cfg.get_int_list("tap_layers", spec->tap_layers);
        spec->leaky_slope = cfg.get("leaky_slope", spec->leaky_slope);
    }
    if (weights) {
        weights->lambda_adv = cfg.get("lambda_adv", weights->lambda_adv);
        weights->lambda_perc = cfg.get_double_list("lambda_perc", weights->lambda_perc);
        weights->lambda_ssim = cfg.get("lambda_ssim", weights->lambda_ssim);
        weights->lambda_l1 = cfg.get("lambda_l1", weights->lambda_l1);
        if (cfg.has("ssim_variant")) {
            weights->ssim_variant = ssim_variant_from_name(cfg.get("ssim_variant", ""));
        }
    }
}

}  // namespace desmoke
