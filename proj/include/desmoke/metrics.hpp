#pragma once

#include <string>
#include <vector>

#include "desmoke/image.hpp"

namespace desmoke {

// Per-image values with mean and population standard deviation.
struct MetricResult {
    std::string name;
    std::vector<double> per_image;
    double mean = 0.0;
    double std_dev = 0.0;
};

// sqrt(mean squared difference) on the [0,1] scale.
double rmse(const Image& ref, const Image& test);

// 20*log10(max(ref)) - 10*log10(MSE); +inf when MSE is zero.
double psnr(const Image& ref, const Image& test);

MetricResult aggregate(const std::vector<double>& values, const std::string& name);

}  // namespace desmoke
