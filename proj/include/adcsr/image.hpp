#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "adcsr/tensor.hpp"

namespace adcsr {

// 8-bit interleaved RGB, row-major.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    ImageRGB() = default;
    ImageRGB(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(3) * w * h, 0) {}

    uint8_t& at(int x, int y, int ch) {
        return pixels[(static_cast<size_t>(y) * width + x) * 3 + ch];
    }
    uint8_t at(int x, int y, int ch) const {
        return pixels[(static_cast<size_t>(y) * width + x) * 3 + ch];
    }
};

// 8-bit RGB or grayscale (promoted to R=G=B); palette expanded, alpha dropped.
// 16-bit files are rejected.
ImageRGB load_png(const std::string& path);
void save_png(const ImageRGB& image, const std::string& path);

// Pixel range stays [0,255] in the real domain: PSNR uses peak 255 directly.
template <typename T>
Tensor<T> to_tensor(const ImageRGB& img) {
    Tensor<T> t(1, 3, img.height, img.width);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                t.at(0, c, y, x) = static_cast<T>(img.at(x, y, c));
    return t;
}

// Round half away from zero, clamp to [0,255].
template <typename T>
ImageRGB to_image(const Tensor<T>& t) {
    if (t.n() != 1 || t.c() != 3) throw ShapeError("to_image expects [1,3,h,w], got " + t.shape_str());
    ImageRGB img(t.w(), t.h());
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < t.h(); ++y)
            for (int x = 0; x < t.w(); ++x) {
                const double v = std::round(static_cast<double>(t.at(0, c, y, x)));
                img.at(x, y, c) = static_cast<uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
            }
    return img;
}

}  // namespace adcsr
