#pragma once

#include "adcsr/model.hpp"

namespace adcsr {

// Analytic parameter / multiply-accumulate counts, mirrored off the builder.
// count_params must equal the instantiated model's parameter-element sum.
struct CostReport {
    long long params = 0;          // weights + biases + scalar coefficients
    long long params_no_bias = 0;  // biases excluded
    long long trainable_params = 0;
    long long flops = 0;  // conv multiply-accumulates at a given input size
};

// Number of scalar coefficient edges in the whole model (block mixing
// stages plus the inter-ADRU chain).
long long coeff_edge_count(const ModelConfig& cfg);

// Full model at an h x w LR input (flops = 0 if h or w is 0).
CostReport count_cost(const ModelConfig& cfg, int h = 0, int w = 0);

inline CostReport count_params(const ModelConfig& cfg) { return count_cost(cfg); }
inline CostReport count_flops(const ModelConfig& cfg, int h, int w) {
    return count_cost(cfg, h, w);
}

// Reconstruction head taken alone (the Table-1-style comparison unit).
CostReport head_cost(const ModelConfig& cfg, int h = 0, int w = 0);

// SKIP branch taken alone.
CostReport skip_cost(const ModelConfig& cfg, int h = 0, int w = 0);

}  // namespace adcsr
