#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adcsr/model.hpp"

namespace adcsr {

// Binary layout: magic "ADCS", u32 version, u32 entry count, then per entry
// u16 name length, name bytes, u8 rank, u32 dims[rank], u8 dtype tag, raw
// little-endian payload. Tags: 0 = f32, 1 = f64, 2 = u8. Model parameters are
// plain entries; "meta/..." and "opt/..." names are reserved for config echo,
// training state and optimizer moments.
constexpr uint32_t kCheckpointVersion = 1;

struct CheckpointEntry {
    std::string name;
    std::vector<uint32_t> dims;
    uint8_t dtype = 0;
    std::vector<uint8_t> payload;

    size_t element_count() const {
        size_t n = 1;
        for (uint32_t d : dims) n *= d;
        return n;
    }
};

struct Checkpoint {
    uint32_t version = kCheckpointVersion;
    std::vector<CheckpointEntry> entries;

    bool has(const std::string& name) const { return find(name) != nullptr; }
    const CheckpointEntry* find(const std::string& name) const;

    void add_f32(const std::string& name, const Tensor<float>& t);
    void add_f64_scalar(const std::string& name, double v);
    void add_bytes(const std::string& name, const std::string& bytes);

    Tensor<float> get_f32(const std::string& name) const;
    double get_f64_scalar(const std::string& name) const;
    std::string get_bytes(const std::string& name) const;
};

// Atomic: writes "<path>.tmp" then renames.
void save_checkpoint_file(const Checkpoint& ckpt, const std::string& path);

// Full validation; truncation, bad magic/version or duplicate names raise
// DataError without partial effects.
Checkpoint load_checkpoint_file(const std::string& path);

// Parameters in registration order.
void add_model_params(Checkpoint& ckpt, const AdcsrModel<float>& model);

// Strict: every model parameter present with its exact shape; entries that
// match no parameter (and are not meta/opt) are rejected unless permissive.
void load_model_params(const Checkpoint& ckpt, AdcsrModel<float>& model,
                       bool permissive = false);

struct TransferEntry {
    std::string name;
    bool copied = false;
    std::string reason;  // for skipped names
};

struct TransferReport {
    std::vector<TransferEntry> entries;
    int copied = 0;
    int skipped = 0;
};

// Cross-scale transfer: copies every "body.*" parameter except the
// reconstruction head ("body.head.*"); SKIP parameters are scale-specific and
// skipped. A missing or shape-mismatched shared name is a hard error.
TransferReport transfer_scale_weights(const Checkpoint& src, AdcsrModel<float>& dst);

}  // namespace adcsr
