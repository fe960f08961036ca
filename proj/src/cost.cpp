#include "adcsr/cost.hpp"

namespace adcsr {

namespace {

struct Acc {
    CostReport r;
    bool adaptive = true;

    void conv(int in_ch, int out_ch, int k, long long hw) {
        const long long w = static_cast<long long>(k) * k * in_ch * out_ch;
        r.params += w + out_ch;
        r.params_no_bias += w;
        r.trainable_params += w + out_ch;
        r.flops += w * hw;
    }

    void scalar(bool trainable) {
        r.params += 1;
        r.params_no_bias += 1;
        if (trainable) r.trainable_params += 1;
    }
};

long long block_edges(int m, bool dense) {
    // Stage i has 1 a-edge plus i b-edges (dense) or 1 b-edge (chain).
    return dense ? m + static_cast<long long>(m) * (m + 1) / 2 : 2LL * m;
}

void add_block(Acc& acc, const ModelConfig& cfg, int m, long long unit_convs_hw,
               bool unit_is_adrb) {
    for (int i = 0; i < m; ++i) {
        if (unit_is_adrb) {
            add_block(acc, cfg, cfg.n_units_per_adrb, unit_convs_hw, false);
        } else {
            acc.conv(cfg.feats, cfg.expansion * cfg.feats, 3, unit_convs_hw);
            acc.conv(cfg.expansion * cfg.feats, cfg.feats, 3, unit_convs_hw);
        }
    }
    const long long edges = block_edges(m, cfg.dense_connections);
    for (long long i = 0; i < edges; ++i) acc.scalar(cfg.adaptive_weights);
    const int lff_in = cfg.dense_connections ? (m + 1) * cfg.feats : cfg.feats;
    acc.conv(lff_in, cfg.feats, 1, unit_convs_hw);
}

void add_head(Acc& acc, const ModelConfig& cfg, long long hw_lr, long long hw_hr) {
    const int out_ch = 3 * cfg.scale * cfg.scale;
    const std::vector<int> kernels =
        (cfg.head_variant == HeadVariant::subpixel) ? std::vector<int>{3} : cfg.afsl_kernels;
    for (int k : kernels) acc.conv(cfg.feats, out_ch, k, hw_lr);
    if (cfg.head_variant == HeadVariant::afsl) {
        acc.conv(3 * static_cast<int>(kernels.size()), 3, 1, hw_hr);
    } else if (cfg.head_variant == HeadVariant::awms) {
        for (size_t i = 0; i < kernels.size(); ++i) acc.scalar(true);
    }
}

void add_skip(Acc& acc, const ModelConfig& cfg, long long h, long long w) {
    if (cfg.scale == 4) {
        acc.conv(3, 12, cfg.skip_kernel, h * w);
        acc.conv(3, 12, cfg.skip_kernel, 4 * h * w);
    } else {
        acc.conv(3, 3 * cfg.scale * cfg.scale, cfg.skip_kernel, h * w);
    }
}

}  // namespace

long long coeff_edge_count(const ModelConfig& cfg) {
    const long long per_adru = cfg.n_adrb_per_adru * block_edges(cfg.n_units_per_adrb,
                                                                 cfg.dense_connections) +
                               block_edges(cfg.n_adrb_per_adru, cfg.dense_connections);
    return cfg.n_adru * per_adru + 2LL * cfg.n_adru;
}

CostReport count_cost(const ModelConfig& cfg, int h, int w) {
    cfg.validate();
    Acc acc;
    const long long hw = static_cast<long long>(h) * w;
    const long long hw_hr = hw * cfg.scale * cfg.scale;

    acc.conv(3, cfg.feats, 3, hw);  // feature extraction
    for (int k = 0; k < cfg.n_adru; ++k) {
        add_block(acc, cfg, cfg.n_adrb_per_adru, hw, true);
        acc.scalar(cfg.adaptive_weights);  // chain a_k
        acc.scalar(cfg.adaptive_weights);  // chain b_k
    }
    acc.conv(cfg.n_adru * cfg.feats, cfg.feats, 1, hw);  // GFF 1x1
    acc.conv(cfg.feats, cfg.feats, 3, hw);               // GFF 3x3
    add_head(acc, cfg, hw, hw_hr);
    add_skip(acc, cfg, h, w);
    return acc.r;
}

CostReport head_cost(const ModelConfig& cfg, int h, int w) {
    cfg.validate();
    Acc acc;
    const long long hw = static_cast<long long>(h) * w;
    add_head(acc, cfg, hw, hw * cfg.scale * cfg.scale);
    return acc.r;
}

CostReport skip_cost(const ModelConfig& cfg, int h, int w) {
    cfg.validate();
    Acc acc;
    add_skip(acc, cfg, h, w);
    return acc.r;
}

}  // namespace adcsr
