#include "adcsr/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "adcsr/error.hpp"

namespace adcsr {

namespace {

constexpr char kMagic[4] = {'A', 'D', 'C', 'S'};

template <typename T>
void put(std::vector<uint8_t>& out, T v) {
    uint8_t buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));  // x86: already little-endian
    out.insert(out.end(), buf, buf + sizeof(T));
}

struct Reader {
    const uint8_t* p;
    size_t left;
    const std::string& path;

    template <typename T>
    T take() {
        if (left < sizeof(T)) throw DataError("truncated checkpoint '" + path + "'");
        T v;
        std::memcpy(&v, p, sizeof(T));
        p += sizeof(T);
        left -= sizeof(T);
        return v;
    }

    void take_raw(void* dst, size_t n) {
        if (left < n) throw DataError("truncated checkpoint '" + path + "'");
        std::memcpy(dst, p, n);
        p += n;
        left -= n;
    }
};

size_t dtype_size(uint8_t tag) {
    switch (tag) {
        case 0: return 4;
        case 1: return 8;
        case 2: return 1;
    }
    throw DataError("unknown dtype tag " + std::to_string(tag));
}

}  // namespace

const CheckpointEntry* Checkpoint::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

void Checkpoint::add_f32(const std::string& name, const Tensor<float>& t) {
    CheckpointEntry e;
    e.name = name;
    e.dims = {static_cast<uint32_t>(t.shape[0]), static_cast<uint32_t>(t.shape[1]),
              static_cast<uint32_t>(t.shape[2]), static_cast<uint32_t>(t.shape[3])};
    e.dtype = 0;
    e.payload.resize(t.size() * 4);
    std::memcpy(e.payload.data(), t.data.data(), e.payload.size());
    entries.push_back(std::move(e));
}

void Checkpoint::add_f64_scalar(const std::string& name, double v) {
    CheckpointEntry e;
    e.name = name;
    e.dims = {1};
    e.dtype = 1;
    e.payload.resize(8);
    std::memcpy(e.payload.data(), &v, 8);
    entries.push_back(std::move(e));
}

void Checkpoint::add_bytes(const std::string& name, const std::string& bytes) {
    CheckpointEntry e;
    e.name = name;
    e.dims = {static_cast<uint32_t>(bytes.size())};
    e.dtype = 2;
    e.payload.assign(bytes.begin(), bytes.end());
    entries.push_back(std::move(e));
}

Tensor<float> Checkpoint::get_f32(const std::string& name) const {
    const CheckpointEntry* e = find(name);
    if (!e || e->dtype != 0 || e->dims.size() != 4)
        throw DataError("checkpoint entry '" + name + "' missing or not an f32 tensor");
    Tensor<float> t(static_cast<int>(e->dims[0]), static_cast<int>(e->dims[1]),
                    static_cast<int>(e->dims[2]), static_cast<int>(e->dims[3]));
    std::memcpy(t.data.data(), e->payload.data(), e->payload.size());
    return t;
}

double Checkpoint::get_f64_scalar(const std::string& name) const {
    const CheckpointEntry* e = find(name);
    if (!e || e->dtype != 1 || e->element_count() != 1)
        throw DataError("checkpoint entry '" + name + "' missing or not an f64 scalar");
    double v;
    std::memcpy(&v, e->payload.data(), 8);
    return v;
}

std::string Checkpoint::get_bytes(const std::string& name) const {
    const CheckpointEntry* e = find(name);
    if (!e || e->dtype != 2)
        throw DataError("checkpoint entry '" + name + "' missing or not a byte blob");
    return std::string(e->payload.begin(), e->payload.end());
}

void save_checkpoint_file(const Checkpoint& ckpt, const std::string& path) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put<uint32_t>(out, ckpt.version);
    put<uint32_t>(out, static_cast<uint32_t>(ckpt.entries.size()));
    for (const auto& e : ckpt.entries) {
        if (e.name.size() > 0xffff) throw DataError("checkpoint name too long: " + e.name);
        if (e.payload.size() != e.element_count() * dtype_size(e.dtype))
            throw DataError("checkpoint entry '" + e.name + "' has inconsistent payload");
        put<uint16_t>(out, static_cast<uint16_t>(e.name.size()));
        out.insert(out.end(), e.name.begin(), e.name.end());
        put<uint8_t>(out, static_cast<uint8_t>(e.dims.size()));
        for (uint32_t d : e.dims) put<uint32_t>(out, d);
        put<uint8_t>(out, e.dtype);
        out.insert(out.end(), e.payload.begin(), e.payload.end());
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("cannot write checkpoint '" + path + "'");
        f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
        if (!f) throw DataError("short write for checkpoint '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open checkpoint '" + path + "'");
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    Reader rd{buf.data(), buf.size(), path};

    char magic[4];
    rd.take_raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("'" + path + "' is not an ADCS checkpoint (bad magic)");
    Checkpoint ckpt;
    ckpt.version = rd.take<uint32_t>();
    if (ckpt.version != kCheckpointVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(ckpt.version));
    const uint32_t count = rd.take<uint32_t>();
    ckpt.entries.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        CheckpointEntry e;
        const uint16_t name_len = rd.take<uint16_t>();
        e.name.resize(name_len);
        rd.take_raw(e.name.data(), name_len);
        const uint8_t rank = rd.take<uint8_t>();
        e.dims.resize(rank);
        for (int d = 0; d < rank; ++d) e.dims[d] = rd.take<uint32_t>();
        e.dtype = rd.take<uint8_t>();
        const size_t bytes = e.element_count() * dtype_size(e.dtype);
        e.payload.resize(bytes);
        rd.take_raw(e.payload.data(), bytes);
        if (ckpt.has(e.name)) throw DataError("duplicate checkpoint entry '" + e.name + "'");
        ckpt.entries.push_back(std::move(e));
    }
    if (rd.left != 0) throw DataError("trailing bytes in checkpoint '" + path + "'");
    return ckpt;
}

void add_model_params(Checkpoint& ckpt, const AdcsrModel<float>& model) {
    for (const auto* p : model.parameters()) ckpt.add_f32(p->name, p->value);
}

void load_model_params(const Checkpoint& ckpt, AdcsrModel<float>& model, bool permissive) {
    // Validate everything first; only then mutate the model.
    std::vector<std::pair<Parameter<float>*, const CheckpointEntry*>> plan;
    for (auto* p : model.parameters()) {
        const CheckpointEntry* e = ckpt.find(p->name);
        if (!e) throw DataError("checkpoint is missing parameter '" + p->name + "'");
        if (e->dtype != 0 || e->dims.size() != 4)
            throw DataError("checkpoint entry '" + p->name + "' is not an f32 tensor");
        for (int d = 0; d < 4; ++d)
            if (static_cast<int>(e->dims[d]) != p->value.shape[d])
                throw DataError("shape mismatch for '" + p->name + "' (checkpoint " +
                                std::to_string(e->dims[0]) + "x" + std::to_string(e->dims[1]) +
                                "x" + std::to_string(e->dims[2]) + "x" +
                                std::to_string(e->dims[3]) + " vs model " +
                                p->value.shape_str() + ")");
        plan.emplace_back(p, e);
    }
    if (!permissive) {
        for (const auto& e : ckpt.entries) {
            if (e.name.rfind("meta/", 0) == 0 || e.name.rfind("opt/", 0) == 0) continue;
            if (!model.find(e.name))
                throw DataError("checkpoint contains unknown parameter '" + e.name +
                                "' (use permissive load to ignore)");
        }
    }
    for (auto& [p, e] : plan) std::memcpy(p->value.data.data(), e->payload.data(), e->payload.size());
}

TransferReport transfer_scale_weights(const Checkpoint& src, AdcsrModel<float>& dst) {
    TransferReport report;
    for (auto* p : dst.parameters()) {
        TransferEntry te;
        te.name = p->name;
        const bool is_body = p->name.rfind("body.", 0) == 0;
        const bool is_head = p->name.rfind("body.head.", 0) == 0;
        if (is_body && !is_head) {
            const CheckpointEntry* e = src.find(p->name);
            if (!e)
                throw DataError("transfer: source checkpoint lacks shared BODY parameter '" +
                                p->name + "'");
            if (e->dtype != 0 || e->payload.size() != p->value.size() * 4)
                throw DataError("transfer: shape mismatch on shared parameter '" + p->name + "'");
            std::memcpy(p->value.data.data(), e->payload.data(), e->payload.size());
            te.copied = true;
            ++report.copied;
        } else {
            te.reason = is_head ? "reconstruction head (scale-specific)"
                                : "skip branch (scale-specific)";
            ++report.skipped;
        }
        report.entries.push_back(std::move(te));
    }
    return report;
}

}  // namespace adcsr
