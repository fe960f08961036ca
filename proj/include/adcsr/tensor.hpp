#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "adcsr/error.hpp"

namespace adcsr {

// Rank-4 NCHW array, row-major with w fastest. The one value type of the
// engine; scalars are [1,1,1,1]. T is float for training/inference and
// double for gradient checking.
template <typename T>
struct Tensor {
    std::array<int, 4> shape{0, 0, 0, 0};
    std::vector<T> data;

    Tensor() = default;
    Tensor(int n, int c, int h, int w)
        : shape{n, c, h, w}, data(static_cast<size_t>(n) * c * h * w, T(0)) {
        if (n < 0 || c < 0 || h < 0 || w < 0) throw ShapeError("Tensor: negative dimension");
    }

    static Tensor scalar(T v) {
        Tensor t(1, 1, 1, 1);
        t.data[0] = v;
        return t;
    }

    static Tensor full(int n, int c, int h, int w, T v) {
        Tensor t(n, c, h, w);
        std::fill(t.data.begin(), t.data.end(), v);
        return t;
    }

    int n() const { return shape[0]; }
    int c() const { return shape[1]; }
    int h() const { return shape[2]; }
    int w() const { return shape[3]; }
    size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    T& at(int n_, int c_, int y, int x) {
        return data[((static_cast<size_t>(n_) * shape[1] + c_) * shape[2] + y) * shape[3] + x];
    }
    const T& at(int n_, int c_, int y, int x) const {
        return data[((static_cast<size_t>(n_) * shape[1] + c_) * shape[2] + y) * shape[3] + x];
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    bool all_finite() const {
        for (const T& v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    std::string shape_str() const {
        return "[" + std::to_string(shape[0]) + "," + std::to_string(shape[1]) + "," +
               std::to_string(shape[2]) + "," + std::to_string(shape[3]) + "]";
    }
};

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_str() + " vs " +
                         b.shape_str());
}

// Dihedral-group spatial transforms, used by self-ensemble and its tests.
// rot90 is counterclockwise; all are exact element permutations.
template <typename T>
Tensor<T> rot90(const Tensor<T>& t) {
    Tensor<T> out(t.n(), t.c(), t.w(), t.h());
    for (int n = 0; n < t.n(); ++n)
        for (int c = 0; c < t.c(); ++c)
            for (int y = 0; y < t.h(); ++y)
                for (int x = 0; x < t.w(); ++x) out.at(n, c, t.w() - 1 - x, y) = t.at(n, c, y, x);
    return out;
}

template <typename T>
Tensor<T> flip_w(const Tensor<T>& t) {
    Tensor<T> out(t.n(), t.c(), t.h(), t.w());
    for (int n = 0; n < t.n(); ++n)
        for (int c = 0; c < t.c(); ++c)
            for (int y = 0; y < t.h(); ++y)
                for (int x = 0; x < t.w(); ++x) out.at(n, c, y, t.w() - 1 - x) = t.at(n, c, y, x);
    return out;
}

}  // namespace adcsr
