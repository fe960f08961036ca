#pragma once

#include <string>
#include <vector>

#include "adcsr/image.hpp"
#include "adcsr/tensor.hpp"

namespace adcsr {

// Centered log-magnitude 2-D spectrum plus a radial energy split. The
// high-frequency fraction is the |F|^2 energy at normalized radial frequency
// above rho * Nyquist (Nyquist = 0.5 per axis), DC excluded; complementary
// fractions sum to 1. A constant image has fraction 0 by convention.
struct SpectrumReport {
    int width = 0;
    int height = 0;
    std::vector<double> log_magnitude;  // fftshift-centered, height x width
    double hf_fraction = 0.0;
    double lf_fraction = 1.0;
    double rho = 0.25;
};

SpectrumReport spectrum(const std::vector<double>& plane, int width, int height,
                        double rho = 0.25);

// Y plane of an RGB image.
SpectrumReport spectrum_of_image(const ImageRGB& img, double rho = 0.25);

// Single-channel tensor, or the Y plane of a 3-channel tensor (values are
// treated as the [0,255] real domain and quantized the way metrics are).
SpectrumReport spectrum_of_tensor(const Tensor<float>& t, double rho = 0.25);

// Grayscale heatmap of the centered log-magnitude map.
void save_spectrum_png(const SpectrumReport& report, const std::string& path);

}  // namespace adcsr
