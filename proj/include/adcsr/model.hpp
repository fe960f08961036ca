#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adcsr/ops.hpp"
#include "adcsr/rng.hpp"

namespace adcsr {

enum class HeadVariant { subpixel, awms, afsl };

inline const char* to_string(HeadVariant v) {
    switch (v) {
        case HeadVariant::subpixel: return "subpixel";
        case HeadVariant::awms: return "awms";
        case HeadVariant::afsl: return "afsl";
    }
    return "?";
}

inline HeadVariant head_variant_from_string(const std::string& s) {
    if (s == "subpixel") return HeadVariant::subpixel;
    if (s == "awms") return HeadVariant::awms;
    if (s == "afsl") return HeadVariant::afsl;
    throw ConfigError("unknown head_variant '" + s + "' (expected subpixel|awms|afsl)");
}

// Full architectural hyperparameter record. Defaults are the paper-scale
// network; desk-scale runs shrink n_adru/feats via config.
struct ModelConfig {
    int scale = 2;
    int n_adru = 4;
    int n_adrb_per_adru = 4;
    int n_units_per_adrb = 4;
    int feats = 128;
    int expansion = 3;
    int skip_kernel = 5;
    std::vector<int> afsl_kernels{3, 5, 7, 9};
    double leaky_slope = 0.2;  // unstated in the source material; config value
    HeadVariant head_variant = HeadVariant::afsl;
    bool dense_connections = true;
    bool adaptive_weights = true;
    double adaptive_init = 1.0;

    void validate() const {
        if (scale < 2 || scale > 4)
            throw ConfigError("model.scale must be 2, 3 or 4, got " + std::to_string(scale));
        if (n_adru < 1 || n_adrb_per_adru < 1 || n_units_per_adrb < 1)
            throw ConfigError("model block counts must be >= 1");
        if (feats < 1 || expansion < 1) throw ConfigError("model.feats/expansion must be >= 1");
        if (skip_kernel < 1 || skip_kernel % 2 == 0)
            throw ConfigError("model.skip_kernel must be odd");
        if (afsl_kernels.empty()) throw ConfigError("model.afsl_kernels must be non-empty");
        for (int k : afsl_kernels)
            if (k < 1 || k % 2 == 0) throw ConfigError("model.afsl_kernels must all be odd");
        if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
            throw ConfigError("model.leaky_slope must be in (0,1)");
        // Adaptivity is defined on the dense topology.
        if (!dense_connections && adaptive_weights)
            throw ConfigError("adaptive_weights requires dense_connections");
        if (!std::isfinite(adaptive_init)) throw ConfigError("model.adaptive_init must be finite");
    }
};

template <typename T>
struct Conv2dLayer {
    Parameter<T> weight, bias;

    Conv2dLayer() = default;
    Conv2dLayer(const std::string& name, int in_ch, int out_ch, int k, Rng& rng,
                double slope = 0.2)
        : weight(name + ".weight", Tensor<T>(out_ch, in_ch, k, k)),
          bias(name + ".bias", Tensor<T>(1, out_ch, 1, 1)) {
        // He-uniform for leaky activations; biases start at zero.
        const double gain = std::sqrt(2.0 / (1.0 + slope * slope));
        const double bound = gain * std::sqrt(3.0 / (static_cast<double>(in_ch) * k * k));
        for (T& v : weight.value.data) v = static_cast<T>(rng.uniform(-bound, bound));
    }

    Var<T> forward(Graph<T>& g, const Var<T>& x) { return conv2d(g, x, weight, bias); }

    void collect(std::vector<Parameter<T>*>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }
};

// Wide-activation conv unit: expand feats -> expansion*feats, LeakyReLU,
// contract back to feats. Kernel 3 both sides, stride 1.
template <typename T>
struct ConvUnit {
    Conv2dLayer<T> expand, contract;
    T slope;

    ConvUnit(const std::string& name, int feats, int expansion, T slope_, Rng& rng)
        : expand(name + ".expand", feats, expansion * feats, 3, rng, slope_),
          contract(name + ".contract", expansion * feats, feats, 3, rng, slope_),
          slope(slope_) {}

    Var<T> forward(Graph<T>& g, const Var<T>& x) {
        return contract.forward(g, leaky_relu(g, expand.forward(g, x), slope));
    }

    void collect(std::vector<Parameter<T>*>& out) {
        expand.collect(out);
        contract.collect(out);
    }
};

// Scalar edge weights of one adaptive dense block with m stages.
// Stage i (1-based) owns a_{i-1,i} plus b_{j,i}: j = i-1..0 when dense,
// j = i-1 only when the block is wired as a plain residual chain.
template <typename T>
struct AdaptiveCoeffs {
    std::vector<Parameter<T>> a;               // a[i-1] = a_{i-1,i}
    std::vector<std::vector<Parameter<T>>> b;  // b[i-1][j] = b_{j,i}
    bool dense = true;

    AdaptiveCoeffs() = default;
    AdaptiveCoeffs(const std::string& prefix, int m, bool dense_, bool trainable, T init)
        : dense(dense_) {
        for (int i = 1; i <= m; ++i) {
            a.emplace_back(prefix + ".a" + std::to_string(i - 1) + "_" + std::to_string(i),
                           Tensor<T>::scalar(init), trainable);
            std::vector<Parameter<T>> bi;
            if (dense) {
                for (int j = 0; j < i; ++j)
                    bi.emplace_back(prefix + ".b" + std::to_string(j) + "_" + std::to_string(i),
                                    Tensor<T>::scalar(init), trainable);
            } else {
                bi.emplace_back(
                    prefix + ".b" + std::to_string(i - 1) + "_" + std::to_string(i),
                    Tensor<T>::scalar(init), trainable);
            }
            b.push_back(std::move(bi));
        }
    }

    Parameter<T>& a_edge(int i) { return a[i - 1]; }
    Parameter<T>& b_edge(int j, int i) { return dense ? b[i - 1][j] : b[i - 1][0]; }

    void collect(std::vector<Parameter<T>*>& out) {
        for (size_t i = 0; i < a.size(); ++i) {
            out.push_back(&a[i]);
            for (auto& p : b[i]) out.push_back(&p);
        }
    }
};

// Shared wiring of ADRB (units = conv units) and ADRU (units = ADRBs):
//   Y_i = f_i(X_{i-1}),  X_i = a_{i-1,i} Y_i + sum_j b_{j,i} Y_j + b_{0,i} x
// with the last stage feeding a concat + 1x1 fusion conv and an outer skip.
// Chain mode drops the dense edges: X_i = a Y_i + b X_{i-1}, LFF on X_m.
template <typename T, typename UnitT>
struct AdaptiveDenseBlock {
    std::vector<UnitT> units;
    AdaptiveCoeffs<T> coeffs;
    Conv2dLayer<T> lff;
    bool dense;

    template <typename MakeUnit>
    AdaptiveDenseBlock(const std::string& name, int m, int feats, bool dense_, bool adaptive,
                       T adaptive_init, Rng& rng, double slope, MakeUnit make_unit)
        : dense(dense_) {
        units.reserve(m);
        for (int i = 0; i < m; ++i) units.push_back(make_unit(name + ".unit" + std::to_string(i)));
        coeffs = AdaptiveCoeffs<T>(name + ".mix", m, dense_, adaptive, adaptive_init);
        const int lff_in = dense_ ? (m + 1) * feats : feats;
        lff = Conv2dLayer<T>(name + ".lff", lff_in, feats, 1, rng, slope);
    }

    Var<T> forward(Graph<T>& g, const Var<T>& x) {
        const int m = static_cast<int>(units.size());
        std::vector<Var<T>> ys;
        ys.reserve(m);
        Var<T> cur = x;
        for (int i = 1; i <= m; ++i) {
            Var<T> y = units[i - 1].forward(g, cur);
            ys.push_back(y);
            if (i == m) break;
            std::vector<std::pair<Parameter<T>*, Var<T>>> terms;
            terms.emplace_back(&coeffs.a_edge(i), y);
            if (dense) {
                for (int j = i - 1; j >= 1; --j) terms.emplace_back(&coeffs.b_edge(j, i), ys[j - 1]);
                terms.emplace_back(&coeffs.b_edge(0, i), x);
            } else {
                terms.emplace_back(&coeffs.b_edge(i - 1, i), cur);
            }
            cur = weighted_sum(g, terms);
        }
        Var<T> fused;
        if (dense) {
            std::vector<Var<T>> cat;
            cat.push_back(scale_channels(g, ys[m - 1], coeffs.a_edge(m)));
            for (int j = m - 1; j >= 1; --j)
                cat.push_back(scale_channels(g, ys[j - 1], coeffs.b_edge(j, m)));
            cat.push_back(scale_channels(g, x, coeffs.b_edge(0, m)));
            fused = lff.forward(g, concat_channels(g, cat));
        } else {
            std::vector<std::pair<Parameter<T>*, Var<T>>> terms;
            terms.emplace_back(&coeffs.a_edge(m), ys[m - 1]);
            terms.emplace_back(&coeffs.b_edge(m - 1, m), cur);
            fused = lff.forward(g, weighted_sum(g, terms));
        }
        return add(g, fused, x);
    }

    void collect(std::vector<Parameter<T>*>& out) {
        for (auto& u : units) u.collect(out);
        coeffs.collect(out);
        lff.collect(out);
    }
};

template <typename T>
using Adrb = AdaptiveDenseBlock<T, ConvUnit<T>>;

template <typename T>
using Adru = AdaptiveDenseBlock<T, Adrb<T>>;

template <typename T>
Adrb<T> make_adrb(const std::string& name, const ModelConfig& cfg, Rng& rng) {
    return Adrb<T>(name, cfg.n_units_per_adrb, cfg.feats, cfg.dense_connections,
                   cfg.adaptive_weights, static_cast<T>(cfg.adaptive_init), rng, cfg.leaky_slope,
                   [&](const std::string& uname) {
                       return ConvUnit<T>(uname, cfg.feats, cfg.expansion,
                                          static_cast<T>(cfg.leaky_slope), rng);
                   });
}

// Sub-pixel branches of the three reconstruction heads. Every branch is
// conv(k, feats -> 3*r^2) + pixel shuffle; variants differ in how branches
// are fused (single branch, trainable weighted sum, concat + 1x1 conv).
template <typename T>
struct ReconstructionHead {
    HeadVariant variant;
    int scale = 2;
    std::vector<int> kernels;
    std::vector<Conv2dLayer<T>> branches;
    std::vector<Parameter<T>> branch_weights;  // awms
    Conv2dLayer<T> fuse;                       // afsl

    ReconstructionHead() = default;
    ReconstructionHead(const std::string& name, const ModelConfig& cfg, Rng& rng)
        : variant(cfg.head_variant), scale(cfg.scale) {
        const int out_ch = 3 * scale * scale;
        kernels = (variant == HeadVariant::subpixel) ? std::vector<int>{3} : cfg.afsl_kernels;
        for (int k : kernels)
            branches.emplace_back(name + ".k" + std::to_string(k), cfg.feats, out_ch, k, rng,
                                  cfg.leaky_slope);
        if (variant == HeadVariant::awms) {
            for (int k : kernels)
                branch_weights.emplace_back(name + ".wk" + std::to_string(k),
                                            Tensor<T>::scalar(T(1)), true);
        } else if (variant == HeadVariant::afsl) {
            fuse = Conv2dLayer<T>(name + ".fuse", 3 * static_cast<int>(kernels.size()), 3, 1, rng,
                                  cfg.leaky_slope);
        }
    }

    Var<T> forward(Graph<T>& g, const Var<T>& x) {
        std::vector<Var<T>> outs;
        outs.reserve(branches.size());
        for (auto& br : branches) outs.push_back(pixel_shuffle(g, br.forward(g, x), scale));
        switch (variant) {
            case HeadVariant::subpixel: return outs[0];
            case HeadVariant::afsl: return fuse.forward(g, concat_channels(g, outs));
            case HeadVariant::awms: {
                std::vector<std::pair<Parameter<T>*, Var<T>>> terms;
                for (size_t i = 0; i < outs.size(); ++i)
                    terms.emplace_back(&branch_weights[i], outs[i]);
                return weighted_sum(g, terms);
            }
        }
        throw ConfigError("unreachable head variant");
    }

    void collect(std::vector<Parameter<T>*>& out) {
        for (auto& br : branches) br.collect(out);
        for (auto& w : branch_weights) out.push_back(&w);
        if (variant == HeadVariant::afsl) fuse.collect(out);
    }
};

// Shallow branch: sub-pixel convolution(s), kernel size skip_kernel.
// x2/x3 use a single stage; x4 chains two x2 stages.
template <typename T>
struct SkipBranch {
    std::vector<Conv2dLayer<T>> stages;
    std::vector<int> stage_scales;

    SkipBranch() = default;
    SkipBranch(const std::string& name, const ModelConfig& cfg, Rng& rng) {
        stage_scales = (cfg.scale == 4) ? std::vector<int>{2, 2} : std::vector<int>{cfg.scale};
        for (size_t i = 0; i < stage_scales.size(); ++i) {
            const int s = stage_scales[i];
            stages.emplace_back(name + ".stage" + std::to_string(i), 3, 3 * s * s,
                                cfg.skip_kernel, rng, cfg.leaky_slope);
        }
    }

    Var<T> forward(Graph<T>& g, Var<T> x) {
        for (size_t i = 0; i < stages.size(); ++i)
            x = pixel_shuffle(g, stages[i].forward(g, x), stage_scales[i]);
        return x;
    }

    void collect(std::vector<Parameter<T>*>& out) {
        for (auto& s : stages) s.collect(out);
    }
};

// Deep branch: feature conv, weighted-residual chain of ADRUs, GFF
// (1x1 then 3x3 over the concatenated ADRU outputs), reconstruction head.
// Only the last chain output keeps the b_k X_k skip term.
template <typename T>
struct BodyBranch {
    Conv2dLayer<T> feat;
    std::vector<Adru<T>> adrus;
    std::vector<Parameter<T>> chain_a, chain_b;
    Conv2dLayer<T> gff_pointwise, gff_spatial;
    ReconstructionHead<T> head;

    BodyBranch() = default;
    BodyBranch(const std::string& name, const ModelConfig& cfg, Rng& rng)
        : feat(name + ".feat", 3, cfg.feats, 3, rng, cfg.leaky_slope) {
        adrus.reserve(cfg.n_adru);
        for (int k = 0; k < cfg.n_adru; ++k) {
            const std::string aname = name + ".adru" + std::to_string(k);
            adrus.push_back(Adru<T>(
                aname, cfg.n_adrb_per_adru, cfg.feats, cfg.dense_connections,
                cfg.adaptive_weights, static_cast<T>(cfg.adaptive_init), rng, cfg.leaky_slope,
                [&](const std::string& bname) { return make_adrb<T>(bname, cfg, rng); }));
            chain_a.emplace_back(name + ".chain.a" + std::to_string(k + 1),
                                 Tensor<T>::scalar(static_cast<T>(cfg.adaptive_init)),
                                 cfg.adaptive_weights);
            chain_b.emplace_back(name + ".chain.b" + std::to_string(k + 1),
                                 Tensor<T>::scalar(static_cast<T>(cfg.adaptive_init)),
                                 cfg.adaptive_weights);
        }
        gff_pointwise =
            Conv2dLayer<T>(name + ".gff1", cfg.n_adru * cfg.feats, cfg.feats, 1, rng,
                           cfg.leaky_slope);
        gff_spatial = Conv2dLayer<T>(name + ".gff3", cfg.feats, cfg.feats, 3, rng,
                                     cfg.leaky_slope);
        head = ReconstructionHead<T>(name + ".head", cfg, rng);
    }

    Var<T> forward(Graph<T>& g, const Var<T>& x) {
        Var<T> cur = feat.forward(g, x);
        const int n = static_cast<int>(adrus.size());
        std::vector<Var<T>> ys;
        ys.reserve(n);
        for (int k = 0; k < n; ++k) {
            Var<T> t = scale_channels(g, adrus[k].forward(g, cur), chain_a[k]);
            Var<T> next = add(g, scale_channels(g, cur, chain_b[k]), t);
            ys.push_back(k + 1 < n ? t : next);
            cur = next;
        }
        Var<T> fused = gff_spatial.forward(g, gff_pointwise.forward(g, concat_channels(g, ys)));
        return head.forward(g, fused);
    }

    void collect(std::vector<Parameter<T>*>& out) {
        feat.collect(out);
        for (int k = 0; k < static_cast<int>(adrus.size()); ++k) {
            adrus[k].collect(out);
            out.push_back(&chain_a[k]);
            out.push_back(&chain_b[k]);
        }
        gff_pointwise.collect(out);
        gff_spatial.collect(out);
        head.collect(out);
    }
};

// HR = HR_BODY + HR_SKIP. Owns every Parameter; not movable so the collected
// pointer registry stays valid for the model's lifetime.
template <typename T>
class AdcsrModel {
public:
    explicit AdcsrModel(const ModelConfig& cfg, uint64_t seed = 0) : cfg_(cfg) {
        cfg_.validate();
        Rng rng(seed ^ 0xadc5ULL);
        body_ = BodyBranch<T>("body", cfg_, rng);
        skip_ = SkipBranch<T>("skip", cfg_, rng);
        body_.collect(params_);
        skip_.collect(params_);
    }

    AdcsrModel(const AdcsrModel&) = delete;
    AdcsrModel& operator=(const AdcsrModel&) = delete;

    const ModelConfig& config() const { return cfg_; }

    Var<T> forward(Graph<T>& g, const Var<T>& lr) {
        check_input(lr->value);
        return add(g, body_.forward(g, lr), skip_.forward(g, lr));
    }

    Var<T> forward_body(Graph<T>& g, const Var<T>& lr) {
        check_input(lr->value);
        return body_.forward(g, lr);
    }

    Var<T> forward_skip(Graph<T>& g, const Var<T>& lr) {
        check_input(lr->value);
        return skip_.forward(g, lr);
    }

    Tensor<T> infer(const Tensor<T>& lr) {
        Graph<T> g(false);
        return forward(g, g.leaf(lr))->value;
    }
    Tensor<T> infer_body(const Tensor<T>& lr) {
        Graph<T> g(false);
        return forward_body(g, g.leaf(lr))->value;
    }
    Tensor<T> infer_skip(const Tensor<T>& lr) {
        Graph<T> g(false);
        return forward_skip(g, g.leaf(lr))->value;
    }

    const std::vector<Parameter<T>*>& parameters() const { return params_; }

    std::vector<Parameter<T>*> skip_parameters() const { return filter_prefix("skip."); }
    std::vector<Parameter<T>*> body_parameters() const { return filter_prefix("body."); }

    std::vector<Parameter<T>*> trainable_parameters() const {
        std::vector<Parameter<T>*> out;
        for (auto* p : params_)
            if (p->trainable) out.push_back(p);
        return out;
    }

    Parameter<T>* find(const std::string& name) const {
        for (auto* p : params_)
            if (p->name == name) return p;
        return nullptr;
    }

    BodyBranch<T>& body() { return body_; }
    SkipBranch<T>& skip() { return skip_; }

private:
    static void check_input(const Tensor<T>& lr) {
        if (lr.c() != 3)
            throw ShapeError("ADCSR expects 3-channel input, got " + lr.shape_str());
    }

    std::vector<Parameter<T>*> filter_prefix(const std::string& prefix) const {
        std::vector<Parameter<T>*> out;
        for (auto* p : params_)
            if (p->name.rfind(prefix, 0) == 0) out.push_back(p);
        return out;
    }

    ModelConfig cfg_;
    BodyBranch<T> body_;
    SkipBranch<T> skip_;
    std::vector<Parameter<T>*> params_;
};

}  // namespace adcsr
