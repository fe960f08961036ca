#pragma once

#include <functional>

#include "adcsr/tensor.hpp"

namespace adcsr {

// The 8 dihedral transforms: k = f*4 + j applies rot90 (counterclockwise)
// j times, then a horizontal flip when f = 1.
template <typename T>
Tensor<T> dihedral(const Tensor<T>& t, int k) {
    Tensor<T> out = t;
    for (int i = 0; i < k % 4; ++i) out = rot90(out);
    if (k >= 4) out = flip_w(out);
    return out;
}

template <typename T>
Tensor<T> dihedral_inverse(const Tensor<T>& t, int k) {
    Tensor<T> out = t;
    if (k >= 4) out = flip_w(out);
    for (int i = 0; i < (4 - k % 4) % 4; ++i) out = rot90(out);
    return out;
}

// Geometric self-ensemble: average the model over all 8 transforms, each
// output mapped back through the inverse transform.
template <typename T>
Tensor<T> self_ensemble(const std::function<Tensor<T>(const Tensor<T>&)>& model,
                        const Tensor<T>& input) {
    Tensor<T> acc;
    for (int k = 0; k < 8; ++k) {
        Tensor<T> out = dihedral_inverse(model(dihedral(input, k)), k);
        if (acc.empty())
            acc = std::move(out);
        else {
            require_same_shape(acc, out, "self_ensemble");
            for (size_t i = 0; i < acc.size(); ++i) acc.data[i] += out.data[i];
        }
    }
    for (T& v : acc.data) v /= T(8);
    return acc;
}

}  // namespace adcsr
