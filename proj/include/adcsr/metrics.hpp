#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adcsr/dataset.hpp"
#include "adcsr/image.hpp"

namespace adcsr {

// ITU-R BT.601 luma on 8-bit input: Y = 16 + (65.481 R + 128.553 G + 24.966 B)
// with R,G,B in [0,1]. Returned as a row-major double plane.
std::vector<double> rgb_to_y(const ImageRGB& img);

// 20*log10(255 / sqrt(MSE)) over the border-cropped region (Y plane when
// y_only, all three channels otherwise). +inf on exact equality.
double psnr(const ImageRGB& a, const ImageRGB& b, int border_crop, bool y_only);

// Mean local SSIM over valid 11x11 windows, Gaussian sigma 1.5,
// k1 = 0.01, k2 = 0.03, L = 255.
double ssim(const ImageRGB& a, const ImageRGB& b, int border_crop, bool y_only);

struct EvalRow {
    std::string name;
    double psnr = 0.0;
    double ssim = 0.0;
    bool ok = true;
    std::string error;
};

// Per-image metrics plus aggregate means, with the evaluation convention
// recorded alongside the numbers.
struct EvalReport {
    std::vector<EvalRow> rows;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    int scale = 1;
    int border_crop = 0;
    bool y_only = true;
    bool self_ensemble = false;
    std::string model_desc;
};

// LR -> HR in the real [0,255] tensor domain.
using SrFunction = std::function<Tensor<float>(const Tensor<float>&)>;

// Bicubic upscaling as a baseline "model".
SrFunction bicubic_sr(int scale);

// Runs sr over every item, quantizes to 8-bit, computes PSNR/SSIM with
// border_crop = scale (unless overridden) and Y-channel metrics by default.
// Per-image failures are recorded and evaluation continues.
EvalReport evaluate(const SrFunction& sr, const std::vector<EvalItem>& items, int scale,
                    bool y_only = true, int border_crop = -1);

void write_report_json(const EvalReport& report, const std::string& path);
void print_report(const EvalReport& report, std::ostream& os);

}  // namespace adcsr
