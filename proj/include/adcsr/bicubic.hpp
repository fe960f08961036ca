#pragma once

#include "adcsr/image.hpp"
#include "adcsr/tensor.hpp"

namespace adcsr {

// Keys cubic convolution kernel, a = -0.5, support [-2, 2].
double cubic_kernel(double x);

// Precomputed contribution table for one axis. For downscaling the kernel is
// stretched by 1/scale (antialiasing); weights are normalized to sum to 1 and
// source indices are clamped at the borders (replicate).
struct ResampleAxis {
    int taps = 0;
    std::vector<int> first;          // leftmost tap per output index, pre-clamp
    std::vector<double> weights;     // out_len * taps, normalized
    int in_len = 0;
};

ResampleAxis bicubic_axis(int in_len, int out_len);

// Real-domain separable resize of every (n, c) plane; no clamping or rounding.
template <typename T>
Tensor<T> bicubic_resize(const Tensor<T>& in, int out_h, int out_w);

// 8-bit domain: real arithmetic inside, single clamp+round at the end.
ImageRGB bicubic_resize(const ImageRGB& in, int out_w, int out_h);

// Antialiased downscale by an integer factor; dims must already be divisible.
ImageRGB make_lr(const ImageRGB& hr, int scale);

// Top-left crop to dimensions divisible by r.
ImageRGB crop_to_multiple(const ImageRGB& img, int r);

}  // namespace adcsr
