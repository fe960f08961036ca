#include "adcsr/spectrum.hpp"

#include <fftw3.h>

#include <cmath>

#include "adcsr/error.hpp"
#include "adcsr/metrics.hpp"

namespace adcsr {

SpectrumReport spectrum(const std::vector<double>& plane, int width, int height, double rho) {
    if (width <= 0 || height <= 0 ||
        plane.size() != static_cast<size_t>(width) * height)
        throw ShapeError("spectrum: plane size mismatch");
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("spectrum: rho must be in (0,1)");

    SpectrumReport report;
    report.width = width;
    report.height = height;
    report.rho = rho;

    fftw_complex* in = fftw_alloc_complex(plane.size());
    fftw_complex* out = fftw_alloc_complex(plane.size());
    for (size_t i = 0; i < plane.size(); ++i) {
        in[i][0] = plane[i];
        in[i][1] = 0.0;
    }
    fftw_plan plan = fftw_plan_dft_2d(height, width, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    report.log_magnitude.resize(plane.size());
    double hf = 0.0, lf = 0.0;
    const double cutoff = rho * 0.5;
    for (int ky = 0; ky < height; ++ky) {
        const double fy = (ky <= height / 2 ? ky : ky - height) / static_cast<double>(height);
        for (int kx = 0; kx < width; ++kx) {
            const double fx = (kx <= width / 2 ? kx : kx - width) / static_cast<double>(width);
            const size_t i = static_cast<size_t>(ky) * width + kx;
            const double energy = out[i][0] * out[i][0] + out[i][1] * out[i][1];
            // fftshift for the display map
            const int sy = (ky + height / 2) % height;
            const int sx = (kx + width / 2) % width;
            report.log_magnitude[static_cast<size_t>(sy) * width + sx] =
                std::log1p(std::sqrt(energy));
            if (kx == 0 && ky == 0) continue;  // DC excluded from the split
            if (std::sqrt(fx * fx + fy * fy) > cutoff)
                hf += energy;
            else
                lf += energy;
        }
    }
    fftw_free(in);
    fftw_free(out);

    const double total = hf + lf;
    if (total > 0.0) {
        report.hf_fraction = hf / total;
        report.lf_fraction = lf / total;
    } else {
        report.hf_fraction = 0.0;
        report.lf_fraction = 1.0;
    }
    return report;
}

SpectrumReport spectrum_of_image(const ImageRGB& img, double rho) {
    return spectrum(rgb_to_y(img), img.width, img.height, rho);
}

SpectrumReport spectrum_of_tensor(const Tensor<float>& t, double rho) {
    if (t.n() != 1 || (t.c() != 1 && t.c() != 3))
        throw ShapeError("spectrum_of_tensor expects [1,1,h,w] or [1,3,h,w], got " +
                         t.shape_str());
    if (t.c() == 3) return spectrum_of_image(to_image(t), rho);
    std::vector<double> plane(t.size());
    for (size_t i = 0; i < t.size(); ++i) plane[i] = static_cast<double>(t.data[i]);
    return spectrum(plane, t.w(), t.h(), rho);
}

void save_spectrum_png(const SpectrumReport& report, const std::string& path) {
    double maxv = 0.0;
    for (double v : report.log_magnitude) maxv = std::max(maxv, v);
    ImageRGB img(report.width, report.height);
    for (int y = 0; y < report.height; ++y)
        for (int x = 0; x < report.width; ++x) {
            const double v = report.log_magnitude[static_cast<size_t>(y) * report.width + x];
            const auto g = static_cast<uint8_t>(maxv > 0.0 ? std::round(255.0 * v / maxv) : 0.0);
            img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = g;
        }
    save_png(img, path);
}

}  // namespace adcsr
