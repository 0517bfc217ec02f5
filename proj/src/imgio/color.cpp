#include "desmoke/color.hpp"

#include <cmath>

namespace desmoke {

namespace {

inline double srgb_to_linear(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

// CIE f(t) with the linear toe below (6/29)^3.
inline double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

// sRGB -> XYZ (D65). The white point is the matrix applied to (1,1,1) so
// that neutral grays map to a = b = 0 exactly.
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kWhite[3] = {
    kM[0][0] + kM[0][1] + kM[0][2],
    kM[1][0] + kM[1][1] + kM[1][2],
    kM[2][0] + kM[2][1] + kM[2][2],
};

}  // namespace

LabImage rgb_to_lab(const Image& img) {
    require(img.channels == 3, ErrorKind::shape, "rgb_to_lab needs a 3-channel image");
    LabImage out(img.width, img.height);
    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    for (std::size_t i = 0; i < img.pixels(); ++i) {
        double lr = srgb_to_linear(r[i]);
        double lg = srgb_to_linear(g[i]);
        double lb = srgb_to_linear(b[i]);
        double fx = lab_f((kM[0][0] * lr + kM[0][1] * lg + kM[0][2] * lb) / kWhite[0]);
        double fy = lab_f((kM[1][0] * lr + kM[1][1] * lg + kM[1][2] * lb) / kWhite[1]);
        double fz = lab_f((kM[2][0] * lr + kM[2][1] * lg + kM[2][2] * lb) / kWhite[2]);
        out.L[i] = 116.0 * fy - 16.0;
        out.a[i] = 500.0 * (fx - fy);
        out.b[i] = 200.0 * (fy - fz);
    }
    return out;
}

}  // namespace desmoke
