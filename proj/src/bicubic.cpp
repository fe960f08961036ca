#include "adcsr/bicubic.hpp"

#include <algorithm>
#include <cmath>

#include "adcsr/error.hpp"

namespace adcsr {

double cubic_kernel(double x) {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

ResampleAxis bicubic_axis(int in_len, int out_len) {
    if (in_len <= 0 || out_len <= 0) throw DataError("bicubic_axis: non-positive length");
    const double scale = static_cast<double>(out_len) / in_len;
    const bool shrink = scale < 1.0;
    const double kwidth = shrink ? 4.0 / scale : 4.0;

    ResampleAxis ax;
    ax.in_len = in_len;
    ax.taps = static_cast<int>(std::ceil(kwidth)) + 2;
    ax.first.resize(out_len);
    ax.weights.assign(static_cast<size_t>(out_len) * ax.taps, 0.0);

    for (int i = 0; i < out_len; ++i) {
        const double u = (i + 0.5) / scale - 0.5;
        const int left = static_cast<int>(std::floor(u - kwidth / 2.0));
        ax.first[i] = left;
        double sum = 0.0;
        double* w = &ax.weights[static_cast<size_t>(i) * ax.taps];
        for (int t = 0; t < ax.taps; ++t) {
            const double d = u - (left + t);
            w[t] = shrink ? scale * cubic_kernel(d * scale) : cubic_kernel(d);
            sum += w[t];
        }
        for (int t = 0; t < ax.taps; ++t) w[t] /= sum;
    }
    return ax;
}

namespace {

inline int clamp_index(int i, int len) { return i < 0 ? 0 : (i >= len ? len - 1 : i); }

// One separable pass along the row axis of a [h x w] double plane.
void resample_rows(const std::vector<double>& in, int h, int w, const ResampleAxis& ax,
                   std::vector<double>& out) {
    const int out_w = static_cast<int>(ax.first.size());
    out.resize(static_cast<size_t>(h) * out_w);
    for (int y = 0; y < h; ++y) {
        const double* src = &in[static_cast<size_t>(y) * w];
        double* dst = &out[static_cast<size_t>(y) * out_w];
        for (int x = 0; x < out_w; ++x) {
            const double* wt = &ax.weights[static_cast<size_t>(x) * ax.taps];
            double acc = 0.0;
            for (int t = 0; t < ax.taps; ++t)
                acc += wt[t] * src[clamp_index(ax.first[x] + t, w)];
            dst[x] = acc;
        }
    }
}

void transpose(const std::vector<double>& in, int h, int w, std::vector<double>& out) {
    out.resize(in.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out[static_cast<size_t>(x) * h + y] = in[static_cast<size_t>(y) * w + x];
}

// Vertical pass first, then horizontal (via transposes for contiguous rows).
void resize_plane(std::vector<double>& plane, int h, int w, const ResampleAxis& ay,
                  const ResampleAxis& ax) {
    std::vector<double> tmp, tmp2;
    transpose(plane, h, w, tmp);              // [w x h]
    resample_rows(tmp, w, h, ay, tmp2);       // [w x out_h]
    const int out_h = static_cast<int>(ay.first.size());
    transpose(tmp2, w, out_h, tmp);           // [out_h x w]
    resample_rows(tmp, out_h, w, ax, plane);  // [out_h x out_w]
}

}  // namespace

template <typename T>
Tensor<T> bicubic_resize(const Tensor<T>& in, int out_h, int out_w) {
    if (out_h <= 0 || out_w <= 0) throw DataError("bicubic_resize: non-positive target size");
    const ResampleAxis ay = bicubic_axis(in.h(), out_h);
    const ResampleAxis ax = bicubic_axis(in.w(), out_w);
    Tensor<T> out(in.n(), in.c(), out_h, out_w);
    std::vector<double> plane;
    for (int n = 0; n < in.n(); ++n)
        for (int c = 0; c < in.c(); ++c) {
            plane.assign(&in.at(n, c, 0, 0), &in.at(n, c, 0, 0) + static_cast<size_t>(in.h()) * in.w());
            resize_plane(plane, in.h(), in.w(), ay, ax);
            T* dst = &out.at(n, c, 0, 0);
            for (size_t i = 0; i < plane.size(); ++i) dst[i] = static_cast<T>(plane[i]);
        }
    return out;
}

template Tensor<float> bicubic_resize<float>(const Tensor<float>&, int, int);
template Tensor<double> bicubic_resize<double>(const Tensor<double>&, int, int);

ImageRGB bicubic_resize(const ImageRGB& in, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw DataError("bicubic_resize: non-positive target size");
    const ResampleAxis ay = bicubic_axis(in.height, out_h);
    const ResampleAxis ax = bicubic_axis(in.width, out_w);
    ImageRGB out(out_w, out_h);
    std::vector<double> plane(static_cast<size_t>(in.width) * in.height);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < in.height; ++y)
            for (int x = 0; x < in.width; ++x)
                plane[static_cast<size_t>(y) * in.width + x] = in.at(x, y, c);
        std::vector<double> p = plane;
        resize_plane(p, in.height, in.width, ay, ax);
        for (int y = 0; y < out_h; ++y)
            for (int x = 0; x < out_w; ++x) {
                const double v = std::round(p[static_cast<size_t>(y) * out_w + x]);
                out.at(x, y, c) = static_cast<uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
            }
    }
    return out;
}

ImageRGB make_lr(const ImageRGB& hr, int scale) {
    if (scale < 1) throw ConfigError("make_lr: scale must be >= 1");
    if (hr.width % scale != 0 || hr.height % scale != 0)
        throw DataError("make_lr: dimensions " + std::to_string(hr.width) + "x" +
                        std::to_string(hr.height) + " not divisible by " + std::to_string(scale) +
                        " (crop first)");
    return bicubic_resize(hr, hr.width / scale, hr.height / scale);
}

ImageRGB crop_to_multiple(const ImageRGB& img, int r) {
    const int w = img.width - img.width % r;
    const int h = img.height - img.height % r;
    if (w == img.width && h == img.height) return img;
    if (w == 0 || h == 0) throw DataError("crop_to_multiple: image smaller than factor");
    ImageRGB out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y, c);
    return out;
}

}  // namespace adcsr
