#include "desmoke/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "desmoke/kernels.hpp"

namespace desmoke {

double rmse(const Image& ref, const Image& test) {
    require_same_shape(ref, test, "rmse");
    double ss = kernels::sum_sq_diff(ref.size(), ref.data.data(), test.data.data());
    return std::sqrt(ss / ref.size());
}

double psnr(const Image& ref, const Image& test) {
    require_same_shape(ref, test, "psnr");
    double mse = kernels::sum_sq_diff(ref.size(), ref.data.data(), test.data.data()) /
                 static_cast<double>(ref.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    double peak = *std::max_element(ref.data.begin(), ref.data.end());
    return 20.0 * std::log10(peak) - 10.0 * std::log10(mse);
}

MetricResult aggregate(const std::vector<double>& values, const std::string& name) {
    require(!values.empty(), ErrorKind::argument, "aggregate: empty value list");
    MetricResult r;
    r.name = name;
    r.per_image = values;
    r.mean = kernels::sum(values.size(), values.data()) / values.size();
    double ss = 0.0;
    for (double v : values) {
        double d = v - r.mean;
        ss += d * d;
    }
    r.std_dev = std::sqrt(ss / values.size());  // population std
    return r;
}

}  // namespace desmoke
