#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adcsr/bicubic.hpp"
#include "adcsr/image.hpp"
#include "adcsr/rng.hpp"

namespace adcsr {

enum class Split { train, val, test };

const char* to_string(Split s);
Split split_from_string(const std::string& s);

// Dataset layout: <root>/<split>/HR/*.png. LR images are taken from
// <root>/<split>/LR_x<r>/ when a matching file exists, otherwise generated by
// bicubic degradation (HR cropped to a multiple of r first).
struct DatasetSpec {
    std::string root;
    Split split = Split::train;
    int scale = 2;
    std::vector<std::string> files;  // HR paths, sorted by name

    static DatasetSpec discover(const std::string& root, Split split, int scale);
    std::string hr_dir() const;
    std::string lr_dir() const;
};

// Aligned LR/HR patch pair; hr corner = scale * lr corner.
struct SamplePair {
    Tensor<float> lr_patch;  // [1,3,p,p]
    Tensor<float> hr_patch;  // [1,3,p*r,p*r]
    int source_id = 0;
    int lr_x = 0;
    int lr_y = 0;
};

// One loaded LR/HR pair in the real [0,255] domain.
struct LoadedImage {
    std::string name;
    Tensor<float> lr;
    Tensor<float> hr;
};

// Loads every usable image up front and draws uniformly random aligned
// corners. Images smaller than the patch (LR domain) are skipped with a
// warning at load. The RNG stream is single-owner and snapshottable.
class PatchSampler {
public:
    PatchSampler(const DatasetSpec& spec, int patch, uint64_t seed);

    SamplePair next();
    std::vector<SamplePair> next_batch(int n);

    int image_count() const { return static_cast<int>(images_.size()); }
    int patch() const { return patch_; }
    int scale() const { return scale_; }
    const LoadedImage& image(int i) const { return images_[i]; }

    Rng& rng() { return rng_; }

private:
    std::vector<LoadedImage> images_;
    int patch_;
    int scale_;
    Rng rng_;
};

// [B,3,p,p] / [B,3,pr,pr] stacks in batch order.
std::pair<Tensor<float>, Tensor<float>> stack_batch(const std::vector<SamplePair>& batch);

// Full-image pairs for evaluation, in dataset (name-sorted) order.
struct EvalItem {
    std::string name;
    ImageRGB hr;  // cropped to a multiple of scale
    ImageRGB lr;
};
std::vector<EvalItem> load_eval_items(const DatasetSpec& spec);

// Loads one LR/HR pair the same way the sampler does.
LoadedImage load_pair(const std::string& hr_path, int scale, const std::string& lr_dir);

}  // namespace adcsr
