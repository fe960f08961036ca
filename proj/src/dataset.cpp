#include "adcsr/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "adcsr/error.hpp"

namespace fs = std::filesystem;

namespace adcsr {

const char* to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw ConfigError("unknown split '" + s + "' (expected train|val|test)");
}

std::string DatasetSpec::hr_dir() const {
    return (fs::path(root) / to_string(split) / "HR").string();
}

std::string DatasetSpec::lr_dir() const {
    return (fs::path(root) / to_string(split) / ("LR_x" + std::to_string(scale))).string();
}

DatasetSpec DatasetSpec::discover(const std::string& root, Split split, int scale) {
    DatasetSpec spec;
    spec.root = root;
    spec.split = split;
    spec.scale = scale;
    const fs::path dir = spec.hr_dir();
    if (!fs::is_directory(dir)) throw DataError("dataset HR directory not found: " + dir.string());
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (ext == ".png") spec.files.push_back(e.path().string());
    }
    std::sort(spec.files.begin(), spec.files.end());
    if (spec.files.empty()) throw DataError("no PNG files under " + dir.string());
    return spec;
}

LoadedImage load_pair(const std::string& hr_path, int scale, const std::string& lr_dir) {
    LoadedImage out;
    out.name = fs::path(hr_path).stem().string();
    ImageRGB hr = crop_to_multiple(load_png(hr_path), scale);
    const fs::path lr_path = fs::path(lr_dir) / fs::path(hr_path).filename();
    ImageRGB lr;
    if (fs::exists(lr_path)) {
        lr = load_png(lr_path.string());
        if (lr.width != hr.width / scale || lr.height != hr.height / scale)
            throw DataError("cached LR size mismatch for " + lr_path.string());
    } else {
        lr = make_lr(hr, scale);
    }
    out.hr = to_tensor<float>(hr);
    out.lr = to_tensor<float>(lr);
    return out;
}

PatchSampler::PatchSampler(const DatasetSpec& spec, int patch, uint64_t seed)
    : patch_(patch), scale_(spec.scale), rng_(seed) {
    if (patch < 1) throw ConfigError("patch size must be >= 1");
    for (const auto& f : spec.files) {
        LoadedImage img = load_pair(f, spec.scale, spec.lr_dir());
        if (img.lr.h() < patch || img.lr.w() < patch) {
            std::cerr << "warning: skipping '" << img.name << "' (" << img.lr.w() << "x"
                      << img.lr.h() << " LR smaller than patch " << patch << ")\n";
            continue;
        }
        images_.push_back(std::move(img));
    }
    if (images_.empty()) throw DataError("no images large enough for patch sampling");
}

SamplePair PatchSampler::next() {
    const int id = static_cast<int>(rng_.bounded(images_.size()));
    const LoadedImage& img = images_[id];
    const int max_x = img.lr.w() - patch_;
    const int max_y = img.lr.h() - patch_;
    const int x = static_cast<int>(rng_.bounded(static_cast<uint64_t>(max_x) + 1));
    const int y = static_cast<int>(rng_.bounded(static_cast<uint64_t>(max_y) + 1));

    SamplePair s;
    s.source_id = id;
    s.lr_x = x;
    s.lr_y = y;
    s.lr_patch = Tensor<float>(1, 3, patch_, patch_);
    s.hr_patch = Tensor<float>(1, 3, patch_ * scale_, patch_ * scale_);
    for (int c = 0; c < 3; ++c)
        for (int py = 0; py < patch_; ++py)
            for (int px = 0; px < patch_; ++px)
                s.lr_patch.at(0, c, py, px) = img.lr.at(0, c, y + py, x + px);
    const int hx = x * scale_, hy = y * scale_, hp = patch_ * scale_;
    for (int c = 0; c < 3; ++c)
        for (int py = 0; py < hp; ++py)
            for (int px = 0; px < hp; ++px)
                s.hr_patch.at(0, c, py, px) = img.hr.at(0, c, hy + py, hx + px);
    return s;
}

std::vector<SamplePair> PatchSampler::next_batch(int n) {
    std::vector<SamplePair> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(next());
    return out;
}

std::pair<Tensor<float>, Tensor<float>> stack_batch(const std::vector<SamplePair>& batch) {
    if (batch.empty()) throw DataError("stack_batch: empty batch");
    const auto& first = batch[0];
    Tensor<float> lr(static_cast<int>(batch.size()), 3, first.lr_patch.h(), first.lr_patch.w());
    Tensor<float> hr(static_cast<int>(batch.size()), 3, first.hr_patch.h(), first.hr_patch.w());
    const size_t lr_sz = first.lr_patch.size(), hr_sz = first.hr_patch.size();
    for (size_t i = 0; i < batch.size(); ++i) {
        std::copy_n(batch[i].lr_patch.data.data(), lr_sz, lr.data.data() + i * lr_sz);
        std::copy_n(batch[i].hr_patch.data.data(), hr_sz, hr.data.data() + i * hr_sz);
    }
    return {std::move(lr), std::move(hr)};
}

std::vector<EvalItem> load_eval_items(const DatasetSpec& spec) {
    std::vector<EvalItem> items;
    for (const auto& f : spec.files) {
        EvalItem item;
        item.name = fs::path(f).stem().string();
        item.hr = crop_to_multiple(load_png(f), spec.scale);
        const fs::path lr_path = fs::path(spec.lr_dir()) / fs::path(f).filename();
        if (fs::exists(lr_path)) {
            item.lr = load_png(lr_path.string());
            if (item.lr.width != item.hr.width / spec.scale ||
                item.lr.height != item.hr.height / spec.scale)
                throw DataError("cached LR size mismatch for " + lr_path.string());
        } else {
            item.lr = make_lr(item.hr, spec.scale);
        }
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace adcsr
