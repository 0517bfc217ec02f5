#pragma once

#include <vector>

#include "desmoke/image.hpp"

namespace desmoke {

// CIEDE2000 color difference for a single Lab pair (kL = kC = kH = 1).
double ciede2000(double L1, double a1, double b1, double L2, double a2, double b2);

struct Ciede2000Result {
    std::vector<double> map;  // per-pixel dE00
    double mean = 0.0;
};

Ciede2000Result ciede2000(const LabImage& x, const LabImage& y);

}  // namespace desmoke
