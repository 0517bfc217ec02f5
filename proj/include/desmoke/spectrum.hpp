#pragma once

#include <vector>

#include "desmoke/image.hpp"

namespace desmoke {

// DC-centered magnitude spectrum of the zero-mean luminance.
struct Spectrum {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;      // >= 0, DC at (height/2, width/2)
    std::vector<double> log_magnitude;  // log(1 + magnitude)

    double at(int v, int u) const { return magnitude[static_cast<std::size_t>(v) * width + u]; }
};

// Peak bin with frequency offsets (u horizontal, v vertical) relative to
// DC. Mirrors of a detected peak follow it in the list; self-symmetric
// bins (Nyquist rows/columns) appear once.
struct SpectralPeak {
    int u = 0;
    int v = 0;
    double magnitude = 0.0;
};

// Binary frequency mask, 1 = keep. Point-symmetric about DC; the DC bin
// and a protected low-frequency disk always pass.
struct NotchMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pass;

    static NotchMask all_pass(int w, int h);
    // Suppress a disk of bins around (u,v) and its mirror.
    void notch(int u, int v, double radius);

    double protect_radius() const;
};

// Radius of the protected low-frequency disk: min(W,H)/16.
double protect_radius(int w, int h);

Spectrum fft_magnitude(const Image& img);

// Local spectral maxima outside the protected disk whose magnitude
// exceeds min_prominence * median(off-disk magnitude), strongest first,
// reported in symmetric pairs.
std::vector<SpectralPeak> detect_periodic_peaks(const Spectrum& spec, double min_prominence);

struct GridScoreParams {
    double min_prominence = 10.0;  // see detect_periodic_peaks
    int dilate = 1;                // bins added around each peak
};

// Energy captured by detected periodic peaks (each dilated by one bin)
// over total off-disk spectral energy; 0 when nothing is detected.
double grid_artifact_score(const Image& img, const GridScoreParams& params = {});

// Per-channel DFT -> mask -> inverse DFT -> real part, clamped to [0,1].
Image notch_filter(const Image& img, const NotchMask& mask);

// Mask suppressing the given peaks (radius bins each, mirrored).
NotchMask make_notch_mask(int w, int h, const std::vector<SpectralPeak>& peaks, double radius);

// Grayscale visualization: log magnitude normalized by its maximum.
Image spectrum_to_image(const Spectrum& spec);

}  // namespace desmoke
