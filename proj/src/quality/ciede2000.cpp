#include "desmoke/ciede2000.hpp"

#include <cmath>

#include "desmoke/common.hpp"

namespace desmoke {

namespace {

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace

double ciede2000(double L1, double a1, double b1, double L2, double a2, double b2) {
    const double C1 = std::hypot(a1, b1);
    const double C2 = std::hypot(a2, b2);
    const double Cbar = 0.5 * (C1 + C2);

    // G compensation shrinks a* for low-chroma colors.
    const double Cbar7 = std::pow(Cbar, 7.0);
    const double G = 0.5 * (1.0 - std::sqrt(Cbar7 / (Cbar7 + std::pow(25.0, 7.0))));
    const double ap1 = (1.0 + G) * a1;
    const double ap2 = (1.0 + G) * a2;
    const double Cp1 = std::hypot(ap1, b1);
    const double Cp2 = std::hypot(ap2, b2);

    double hp1 = (ap1 == 0.0 && b1 == 0.0) ? 0.0 : rad2deg(std::atan2(b1, ap1));
    double hp2 = (ap2 == 0.0 && b2 == 0.0) ? 0.0 : rad2deg(std::atan2(b2, ap2));
    if (hp1 < 0.0) hp1 += 360.0;
    if (hp2 < 0.0) hp2 += 360.0;

    const double dL = L2 - L1;
    const double dC = Cp2 - Cp1;

    double dhp;
    if (Cp1 * Cp2 == 0.0) {
        dhp = 0.0;
    } else {
        dhp = hp2 - hp1;
        if (dhp > 180.0) dhp -= 360.0;
        if (dhp < -180.0) dhp += 360.0;
    }
    const double dH = 2.0 * std::sqrt(Cp1 * Cp2) * std::sin(deg2rad(dhp) / 2.0);

    const double Lbar = 0.5 * (L1 + L2);
    const double Cpbar = 0.5 * (Cp1 + Cp2);

    double hpbar;
    if (Cp1 * Cp2 == 0.0) {
        hpbar = hp1 + hp2;
    } else {
        hpbar = 0.5 * (hp1 + hp2);
        if (std::fabs(hp1 - hp2) > 180.0) {
            hpbar += (hp1 + hp2) < 360.0 ? 180.0 : -180.0;
        }
    }

    const double T = 1.0 - 0.17 * std::cos(deg2rad(hpbar - 30.0)) +
                     0.24 * std::cos(deg2rad(2.0 * hpbar)) +
                     0.32 * std::cos(deg2rad(3.0 * hpbar + 6.0)) -
                     0.20 * std::cos(deg2rad(4.0 * hpbar - 63.0));

    const double Lterm = (Lbar - 50.0) * (Lbar - 50.0);
    const double SL = 1.0 + 0.015 * Lterm / std::sqrt(20.0 + Lterm);
    const double SC = 1.0 + 0.045 * Cpbar;
    const double SH = 1.0 + 0.015 * Cpbar * T;

    const double dtheta = 30.0 * std::exp(-((hpbar - 275.0) / 25.0) * ((hpbar - 275.0) / 25.0));
    const double Cpbar7 = std::pow(Cpbar, 7.0);
    const double RC = 2.0 * std::sqrt(Cpbar7 / (Cpbar7 + std::pow(25.0, 7.0)));
    const double RT = -RC * std::sin(deg2rad(2.0 * dtheta));

    const double tL = dL / SL;
    const double tC = dC / SC;
    const double tH = dH / SH;
    return std::sqrt(tL * tL + tC * tC + tH * tH + RT * tC * tH);
}

Ciede2000Result ciede2000(const LabImage& x, const LabImage& y) {
    require(x.width == y.width && x.height == y.height, ErrorKind::shape,
            "ciede2000: image shapes differ");
    Ciede2000Result r;
    r.map.resize(x.pixels());
    double total = 0.0;
    for (std::size_t i = 0; i < x.pixels(); ++i) {
        r.map[i] = ciede2000(x.L[i], x.a[i], x.b[i], y.L[i], y.a[i], y.b[i]);
        total += r.map[i];
    }
    r.mean = x.pixels() ? total / x.pixels() : 0.0;
    return r;
}

}  // namespace desmoke
