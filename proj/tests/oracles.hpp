#pragma once

// Independent reference implementations used as test oracles. These stay
// deliberately naive (straight loops, no im2col, no graph machinery) and are
// the permanent second route for the library's fast paths.

#include <functional>
#include <vector>

#include "adcsr/rng.hpp"
#include "adcsr/tensor.hpp"

namespace oracles {

using adcsr::Rng;
using adcsr::Tensor;

template <typename T>
Tensor<T> random_tensor(Rng& rng, int n, int c, int h, int w, double lo = -1.0, double hi = 1.0) {
    Tensor<T> t(n, c, h, w);
    for (T& v : t.data) v = static_cast<T>(rng.uniform(lo, hi));
    return t;
}

// Direct 7-loop convolution: stride 1, zero padding (k-1)/2, square odd kernel.
template <typename T>
Tensor<T> naive_conv2d(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias) {
    const int n = in.n(), ci = in.c(), h = in.h(), w = in.w();
    const int co = weight.shape[0], k = weight.shape[2];
    const int pad = (k - 1) / 2;
    Tensor<T> out(n, co, h, w);
    for (int b = 0; b < n; ++b)
        for (int oc = 0; oc < co; ++oc)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    T acc = bias.data.empty() ? T(0) : bias.data[oc];
                    for (int ic = 0; ic < ci; ++ic)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int sy = y + ky - pad;
                                const int sx = x + kx - pad;
                                if (sy < 0 || sy >= h || sx < 0 || sx >= w) continue;
                                acc += in.at(b, ic, sy, sx) * weight.at(oc, ic, ky, kx);
                            }
                    out.at(b, oc, y, x) = acc;
                }
    return out;
}

template <typename T>
Tensor<T> naive_leaky_relu(const Tensor<T>& in, T slope) {
    Tensor<T> out = in;
    for (T& v : out.data)
        if (v < T(0)) v *= slope;
    return out;
}

template <typename T>
Tensor<T> tensor_sum(const std::vector<Tensor<T>>& terms) {
    Tensor<T> out = terms.at(0);
    for (size_t i = 1; i < terms.size(); ++i)
        for (size_t j = 0; j < out.size(); ++j) out.data[j] += terms[i].data[j];
    return out;
}

template <typename T>
Tensor<T> channel_concat(const std::vector<Tensor<T>>& xs) {
    int ctot = 0;
    for (const auto& t : xs) ctot += t.c();
    Tensor<T> out(xs[0].n(), ctot, xs[0].h(), xs[0].w());
    for (int b = 0; b < out.n(); ++b) {
        int co = 0;
        for (const auto& t : xs)
            for (int c = 0; c < t.c(); ++c, ++co)
                for (int y = 0; y < t.h(); ++y)
                    for (int x = 0; x < t.w(); ++x) out.at(b, co, y, x) = t.at(b, c, y, x);
    }
    return out;
}

// Wide-activation unit via the naive conv: contract(leaky(expand(x))).
template <typename T>
Tensor<T> conv_unit_oracle(const Tensor<T>& x, const Tensor<T>& w1, const Tensor<T>& b1,
                           const Tensor<T>& w2, const Tensor<T>& b2, T slope) {
    return naive_conv2d(naive_leaky_relu(naive_conv2d(x, w1, b1), slope), w2, b2);
}

template <typename T>
using UnitFn = std::function<Tensor<T>(const Tensor<T>&)>;

// Plain densely-connected block, every coefficient 1, no weighting machinery:
//   Y_i = f_i(X_{i-1}),  X_i = Y_i + ... + Y_1 + x,
//   out = lff(concat(Y_m, ..., Y_1, x)) + x
template <typename T>
Tensor<T> dense_block_oracle(const Tensor<T>& x, const std::vector<UnitFn<T>>& units,
                             const Tensor<T>& lff_w, const Tensor<T>& lff_b) {
    std::vector<Tensor<T>> ys;
    Tensor<T> cur = x;
    for (size_t i = 0; i < units.size(); ++i) {
        ys.push_back(units[i](cur));
        if (i + 1 == units.size()) break;
        std::vector<Tensor<T>> terms(ys.begin(), ys.end());
        terms.push_back(x);
        cur = tensor_sum(terms);
    }
    std::vector<Tensor<T>> cat;
    for (auto it = ys.rbegin(); it != ys.rend(); ++it) cat.push_back(*it);
    cat.push_back(x);
    Tensor<T> fused = naive_conv2d(channel_concat(cat), lff_w, lff_b);
    return tensor_sum<T>({fused, x});
}

// Residual chain: X_i = Y_i + X_{i-1}, out = lff(X_m) + x.
template <typename T>
Tensor<T> chain_block_oracle(const Tensor<T>& x, const std::vector<UnitFn<T>>& units,
                             const Tensor<T>& lff_w, const Tensor<T>& lff_b) {
    Tensor<T> cur = x;
    for (const auto& f : units) cur = tensor_sum<T>({f(cur), cur});
    Tensor<T> fused = naive_conv2d(cur, lff_w, lff_b);
    return tensor_sum<T>({fused, x});
}

template <typename T>
double max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(static_cast<double>(a.data[i]) - static_cast<double>(b.data[i])));
    return m;
}

}  // namespace oracles
