#pragma once

#include <map>
#include <string>
#include <vector>

#include "desmoke/losses.hpp"
#include "desmoke/train.hpp"

namespace desmoke {

// `key = value` lines with '#' comments.
class ConfigMap {
public:
    ConfigMap() = default;
    static ConfigMap from_file(const std::string& path);
    static ConfigMap from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get(const std::string& key, double fallback) const;
    int get(const std::string& key, int fallback) const;
    std::uint64_t get(const std::string& key, std::uint64_t fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

private:
    std::map<std::string, std::string> values_;
};

// Overrides the training knobs named in the config file (epochs,
// batch_size, image_size, learning_rate, beta1, beta2, gen_encoder,
// disc_filters, tap_layers, lambda_adv, lambda_perc, lambda_ssim,
// lambda_l1, ssim_variant).
void apply_config(const ConfigMap& cfg, TrainConfig* train, NetworkSpec* spec,
                  LossWeights* weights);

}  // namespace desmoke
