#include "adcsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "adcsr/bicubic.hpp"
#include "adcsr/error.hpp"
#include "json.hpp"

namespace adcsr {

std::vector<double> rgb_to_y(const ImageRGB& img) {
    std::vector<double> y(static_cast<size_t>(img.width) * img.height);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) {
            const double R = img.at(c, r, 0) / 255.0;
            const double G = img.at(c, r, 1) / 255.0;
            const double B = img.at(c, r, 2) / 255.0;
            y[static_cast<size_t>(r) * img.width + c] =
                16.0 + 65.481 * R + 128.553 * G + 24.966 * B;
        }
    return y;
}

namespace {

void check_dims(const ImageRGB& a, const ImageRGB& b, int crop, const char* what) {
    if (a.width != b.width || a.height != b.height)
        throw ShapeError(std::string(what) + ": image size mismatch");
    if (2 * crop >= std::min(a.width, a.height))
        throw ShapeError(std::string(what) + ": border crop too large");
}

// Cropped planes to compare: one Y plane, or three channel planes.
std::vector<std::vector<double>> planes_for_metric(const ImageRGB& img, int crop, bool y_only) {
    const int w = img.width - 2 * crop, h = img.height - 2 * crop;
    std::vector<std::vector<double>> planes;
    if (y_only) {
        const auto y = rgb_to_y(img);
        std::vector<double> p(static_cast<size_t>(w) * h);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                p[static_cast<size_t>(r) * w + c] =
                    y[static_cast<size_t>(r + crop) * img.width + (c + crop)];
        planes.push_back(std::move(p));
    } else {
        for (int ch = 0; ch < 3; ++ch) {
            std::vector<double> p(static_cast<size_t>(w) * h);
            for (int r = 0; r < h; ++r)
                for (int c = 0; c < w; ++c)
                    p[static_cast<size_t>(r) * w + c] = img.at(c + crop, r + crop, ch);
            planes.push_back(std::move(p));
        }
    }
    return planes;
}

// Valid-mode separable filtering with a normalized 1-D window.
std::vector<double> filter_valid(const std::vector<double>& in, int h, int w,
                                 const std::vector<double>& win, int& oh, int& ow) {
    const int k = static_cast<int>(win.size());
    oh = h - k + 1;
    ow = w - k + 1;
    std::vector<double> tmp(static_cast<size_t>(h) * ow);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += win[t] * in[static_cast<size_t>(y) * w + x + t];
            tmp[static_cast<size_t>(y) * ow + x] = acc;
        }
    std::vector<double> out(static_cast<size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += win[t] * tmp[static_cast<size_t>(y + t) * ow + x];
            out[static_cast<size_t>(y) * ow + x] = acc;
        }
    return out;
}

double ssim_plane(const std::vector<double>& a, const std::vector<double>& b, int h, int w) {
    constexpr int kWin = 11;
    constexpr double kSigma = 1.5;
    constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
    constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
    if (h < kWin || w < kWin) throw ShapeError("ssim: image smaller than the 11x11 window");

    std::vector<double> win(kWin);
    double wsum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - (kWin - 1) / 2.0;
        win[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        wsum += win[i];
    }
    for (double& v : win) v /= wsum;

    const size_t n = a.size();
    std::vector<double> aa(n), bb(n), ab(n);
    for (size_t i = 0; i < n; ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    int oh = 0, ow = 0;
    const auto mu_a = filter_valid(a, h, w, win, oh, ow);
    const auto mu_b = filter_valid(b, h, w, win, oh, ow);
    const auto m_aa = filter_valid(aa, h, w, win, oh, ow);
    const auto m_bb = filter_valid(bb, h, w, win, oh, ow);
    const auto m_ab = filter_valid(ab, h, w, win, oh, ow);

    double total = 0.0;
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double va = m_aa[i] - mu_a[i] * mu_a[i];
        const double vb = m_bb[i] - mu_b[i] * mu_b[i];
        const double cab = m_ab[i] - mu_a[i] * mu_b[i];
        total += ((2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cab + kC2)) /
                 ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (va + vb + kC2));
    }
    return total / static_cast<double>(mu_a.size());
}

}  // namespace

double psnr(const ImageRGB& a, const ImageRGB& b, int border_crop, bool y_only) {
    check_dims(a, b, border_crop, "psnr");
    const auto pa = planes_for_metric(a, border_crop, y_only);
    const auto pb = planes_for_metric(b, border_crop, y_only);
    double se = 0.0;
    size_t count = 0;
    for (size_t p = 0; p < pa.size(); ++p) {
        for (size_t i = 0; i < pa[p].size(); ++i) {
            const double d = pa[p][i] - pb[p][i];
            se += d * d;
        }
        count += pa[p].size();
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = se / static_cast<double>(count);
    return 20.0 * std::log10(255.0 / std::sqrt(mse));
}

double ssim(const ImageRGB& a, const ImageRGB& b, int border_crop, bool y_only) {
    check_dims(a, b, border_crop, "ssim");
    const auto pa = planes_for_metric(a, border_crop, y_only);
    const auto pb = planes_for_metric(b, border_crop, y_only);
    const int h = a.height - 2 * border_crop, w = a.width - 2 * border_crop;
    double total = 0.0;
    for (size_t p = 0; p < pa.size(); ++p) total += ssim_plane(pa[p], pb[p], h, w);
    return total / static_cast<double>(pa.size());
}

SrFunction bicubic_sr(int scale) {
    return [scale](const Tensor<float>& lr) {
        return bicubic_resize(lr, lr.h() * scale, lr.w() * scale);
    };
}

EvalReport evaluate(const SrFunction& sr, const std::vector<EvalItem>& items, int scale,
                    bool y_only, int border_crop) {
    EvalReport report;
    report.scale = scale;
    report.border_crop = border_crop < 0 ? scale : border_crop;
    report.y_only = y_only;
    double sp = 0.0, ss = 0.0;
    int ok = 0;
    for (const auto& item : items) {
        EvalRow row;
        row.name = item.name;
        try {
            const Tensor<float> out = sr(to_tensor<float>(item.lr));
            const ImageRGB out_img = to_image(out);
            row.psnr = psnr(out_img, item.hr, report.border_crop, y_only);
            row.ssim = ssim(out_img, item.hr, report.border_crop, y_only);
            sp += row.psnr;
            ss += row.ssim;
            ++ok;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    report.mean_psnr = ok ? sp / ok : 0.0;
    report.mean_ssim = ok ? ss / ok : 0.0;
    return report;
}

void write_report_json(const EvalReport& report, const std::string& path) {
    nlohmann::json j;
    j["convention"] = {{"scale", report.scale},
                       {"border_crop", report.border_crop},
                       {"y_only", report.y_only},
                       {"self_ensemble", report.self_ensemble},
                       {"quantized_8bit", true}};
    j["model"] = report.model_desc;
    j["images"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r{{"name", row.name}, {"ok", row.ok}};
        if (row.ok) {
            r["psnr_db"] = std::isfinite(row.psnr) ? nlohmann::json(row.psnr)
                                                   : nlohmann::json("inf");
            r["ssim"] = row.ssim;
        } else {
            r["error"] = row.error;
        }
        j["images"].push_back(std::move(r));
    }
    j["mean_psnr_db"] = std::isfinite(report.mean_psnr) ? nlohmann::json(report.mean_psnr)
                                                        : nlohmann::json("inf");
    j["mean_ssim"] = report.mean_ssim;

    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot write report '" + path + "'");
    const std::string text = j.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

void print_report(const EvalReport& report, std::ostream& os) {
    os << "image                     PSNR(dB)    SSIM\n";
    for (const auto& row : report.rows) {
        if (!row.ok) {
            os << row.name << "  ERROR: " << row.error << "\n";
            continue;
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%-24s %8.3f  %6.4f\n", row.name.c_str(), row.psnr,
                      row.ssim);
        os << buf;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-24s %8.3f  %6.4f\n", "mean", report.mean_psnr,
                  report.mean_ssim);
    os << buf;
    os << "(scale x" << report.scale << ", crop " << report.border_crop << ", "
       << (report.y_only ? "Y-channel" : "RGB") << (report.self_ensemble ? ", self-ensemble" : "")
       << ")\n";
}

}  // namespace adcsr
