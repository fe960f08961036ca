#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "adcsr/gemm.hpp"
#include "adcsr/graph.hpp"

namespace adcsr {

namespace detail {

// Unrolls K x K patches around every output position into a
// [Cin*K*K, H*W] matrix, zero outside the border. Stride 1, same padding.
template <typename T>
void im2col(const Tensor<T>& in, int n, int k, Tensor<T>& cols) {
    const int ci = in.c(), h = in.h(), w = in.w();
    const int pad = (k - 1) / 2;
    T* out = cols.data.data();
    for (int c = 0; c < ci; ++c) {
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const int dy = ky - pad, dx = kx - pad;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + dy;
                    if (sy < 0 || sy >= h) {
                        for (int x = 0; x < w; ++x) *out++ = T(0);
                        continue;
                    }
                    const T* src = &in.at(n, c, sy, 0);
                    for (int x = 0; x < w; ++x) {
                        const int sx = x + dx;
                        *out++ = (sx < 0 || sx >= w) ? T(0) : src[sx];
                    }
                }
            }
        }
    }
}

// Scatter-add of the column matrix back into image layout; exact adjoint of im2col.
template <typename T>
void col2im_add(const Tensor<T>& cols, int n, int k, Tensor<T>& out) {
    const int ci = out.c(), h = out.h(), w = out.w();
    const int pad = (k - 1) / 2;
    const T* src = cols.data.data();
    for (int c = 0; c < ci; ++c) {
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const int dy = ky - pad, dx = kx - pad;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + dy;
                    if (sy < 0 || sy >= h) {
                        src += w;
                        continue;
                    }
                    T* dst = &out.at(n, c, sy, 0);
                    for (int x = 0; x < w; ++x) {
                        const int sx = x + dx;
                        if (sx >= 0 && sx < w) dst[sx] += src[x];
                    }
                    src += w;
                }
            }
        }
    }
}

}  // namespace detail

// Stride-1 same-padding convolution, im2col + GEMM. weight [out_ch,in_ch,k,k],
// bias [1,out_ch,1,1]; k must be odd.
template <typename T>
Var<T> conv2d(Graph<T>& g, const Var<T>& x, Parameter<T>& weight, Parameter<T>& bias) {
    const Tensor<T>& in = x->value;
    const int co = weight.value.n(), ci = weight.value.c(), k = weight.value.h();
    if (weight.value.w() != k) throw ShapeError("conv2d: non-square kernel in " + weight.name);
    if (k % 2 == 0) throw ConfigError("conv2d: even kernel size " + std::to_string(k));
    if (in.c() != ci)
        throw ShapeError("conv2d: input channels " + std::to_string(in.c()) + " != weight in_ch " +
                         std::to_string(ci) + " (" + weight.name + ")");
    if (bias.value.c() != co || bias.value.size() != static_cast<size_t>(co))
        throw ShapeError("conv2d: bias shape " + bias.value.shape_str());

    const int n = in.n(), h = in.h(), w = in.w();
    const int hw = h * w, kk = ci * k * k;

    Tensor<T> out(n, co, h, w);
    Tensor<T> cols;
    if (k > 1) cols = Tensor<T>(1, 1, kk, hw);
    for (int b = 0; b < n; ++b) {
        const T* m;
        if (k > 1) {
            detail::im2col(in, b, k, cols);
            m = cols.data.data();
        } else {
            m = &in.at(b, 0, 0, 0);  // 1x1: the input plane is the column matrix
        }
        gemm(co, hw, kk, T(1), weight.value.data.data(), m, T(0), &out.at(b, 0, 0, 0));
        for (int c = 0; c < co; ++c) {
            const T bv = bias.value.data[c];
            T* dst = &out.at(b, c, 0, 0);
            for (int i = 0; i < hw; ++i) dst[i] += bv;
        }
    }

    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = true;
        Parameter<T>* wp = &weight;
        Parameter<T>* bp = &bias;
        node->backprop = [x, wp, bp, k, kk](const Tensor<T>& grad) {
            const Tensor<T>& in = x->value;
            const int n = in.n(), h = in.h(), w = in.w(), hw = h * w;
            const int co = wp->value.n();
            Tensor<T> cols;
            if (k > 1) cols = Tensor<T>(1, 1, kk, hw);
            Tensor<T> dcols;
            if (x->requires_grad && k > 1) dcols = Tensor<T>(1, 1, kk, hw);
            for (int b = 0; b < n; ++b) {
                const T* gb = &grad.at(b, 0, 0, 0);
                const T* m;
                if (k > 1) {
                    detail::im2col(in, b, k, cols);
                    m = cols.data.data();
                } else {
                    m = &in.at(b, 0, 0, 0);
                }
                // dW += g * M^T, db += row sums of g
                gemm_bt(co, kk, hw, T(1), gb, m, T(1), wp->grad.data.data());
                for (int c = 0; c < co; ++c) {
                    T s = T(0);
                    const T* row = &grad.at(b, c, 0, 0);
                    for (int i = 0; i < hw; ++i) s += row[i];
                    bp->grad.data[c] += s;
                }
                if (x->requires_grad) {
                    Tensor<T>& dx = Graph<T>::ensure_grad(x);
                    if (k > 1) {
                        gemm_at(kk, hw, co, T(1), wp->value.data.data(), gb, T(0),
                                dcols.data.data());
                        detail::col2im_add(dcols, b, k, dx);
                    } else {
                        gemm_at(kk, hw, co, T(1), wp->value.data.data(), gb, T(1),
                                &dx.at(b, 0, 0, 0));
                    }
                }
            }
        };
        g.record(node);
    }
    return node;
}

template <typename T>
Var<T> leaky_relu(Graph<T>& g, const Var<T>& x, T slope) {
    if (!(slope > T(0) && slope < T(1)))
        throw ConfigError("leaky_relu: slope must be in (0,1), got " + std::to_string(slope));
    Tensor<T> out = x->value;
    for (T& v : out.data)
        if (v < T(0)) v *= slope;
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = x->requires_grad;
        if (node->requires_grad) {
            node->backprop = [x, slope](const Tensor<T>& grad) {
                Tensor<T>& dx = Graph<T>::ensure_grad(x);
                const size_t sz = grad.size();
                for (size_t i = 0; i < sz; ++i)
                    dx.data[i] += grad.data[i] * (x->value.data[i] >= T(0) ? T(1) : slope);
            };
            g.record(node);
        }
    }
    return node;
}

// out[n, c, y, x] = in[n, c*r^2 + r*(y%r) + (x%r), y/r, x/r]. A pure element
// permutation; backward is the inverse scatter.
template <typename T>
Var<T> pixel_shuffle(Graph<T>& g, const Var<T>& x, int r) {
    const Tensor<T>& in = x->value;
    if (r < 1) throw ConfigError("pixel_shuffle: r must be >= 1");
    if (in.c() % (r * r) != 0)
        throw ShapeError("pixel_shuffle: channels " + std::to_string(in.c()) +
                         " not divisible by r^2 = " + std::to_string(r * r));
    const int n = in.n(), co = in.c() / (r * r), ho = in.h() * r, wo = in.w() * r;
    Tensor<T> out(n, co, ho, wo);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < co; ++c)
            for (int y = 0; y < ho; ++y)
                for (int xx = 0; xx < wo; ++xx)
                    out.at(b, c, y, xx) =
                        in.at(b, c * r * r + r * (y % r) + (xx % r), y / r, xx / r);
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = x->requires_grad;
        if (node->requires_grad) {
            node->backprop = [x, r, co](const Tensor<T>& grad) {
                Tensor<T>& dx = Graph<T>::ensure_grad(x);
                const int ho = grad.shape[2], wo = grad.shape[3];
                for (int b = 0; b < grad.shape[0]; ++b)
                    for (int c = 0; c < co; ++c)
                        for (int y = 0; y < ho; ++y)
                            for (int xx = 0; xx < wo; ++xx)
                                dx.at(b, c * r * r + r * (y % r) + (xx % r), y / r, xx / r) +=
                                    grad.at(b, c, y, xx);
            };
            g.record(node);
        }
    }
    return node;
}

// Inverse of pixel_shuffle: space-to-depth with the same channel ordering.
template <typename T>
Var<T> pixel_unshuffle(Graph<T>& g, const Var<T>& x, int r) {
    const Tensor<T>& in = x->value;
    if (r < 1) throw ConfigError("pixel_unshuffle: r must be >= 1");
    if (in.h() % r != 0 || in.w() % r != 0)
        throw ShapeError("pixel_unshuffle: spatial dims not divisible by r");
    const int n = in.n(), co = in.c() * r * r, ho = in.h() / r, wo = in.w() / r;
    Tensor<T> out(n, co, ho, wo);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < in.c(); ++c)
            for (int y = 0; y < in.h(); ++y)
                for (int xx = 0; xx < in.w(); ++xx)
                    out.at(b, c * r * r + r * (y % r) + (xx % r), y / r, xx / r) =
                        in.at(b, c, y, xx);
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = x->requires_grad;
        if (node->requires_grad) {
            const int cin = in.c();
            node->backprop = [x, r, cin](const Tensor<T>& grad) {
                Tensor<T>& dx = Graph<T>::ensure_grad(x);
                const int hi = dx.shape[2], wi = dx.shape[3];
                for (int b = 0; b < dx.shape[0]; ++b)
                    for (int c = 0; c < cin; ++c)
                        for (int y = 0; y < hi; ++y)
                            for (int xx = 0; xx < wi; ++xx)
                                dx.at(b, c, y, xx) +=
                                    grad.at(b, c * r * r + r * (y % r) + (xx % r), y / r, xx / r);
            };
            g.record(node);
        }
    }
    return node;
}

template <typename T>
Var<T> concat_channels(Graph<T>& g, const std::vector<Var<T>>& xs) {
    if (xs.empty()) throw ShapeError("concat_channels: no inputs");
    const int n = xs[0]->value.n(), h = xs[0]->value.h(), w = xs[0]->value.w();
    int ctot = 0;
    for (const auto& x : xs) {
        const Tensor<T>& t = x->value;
        if (t.n() != n || t.h() != h || t.w() != w)
            throw ShapeError("concat_channels: spatial mismatch " + t.shape_str() + " vs " +
                             xs[0]->value.shape_str());
        ctot += t.c();
    }
    Tensor<T> out(n, ctot, h, w);
    const size_t plane = static_cast<size_t>(h) * w;
    for (int b = 0; b < n; ++b) {
        size_t off = 0;
        for (const auto& x : xs) {
            const Tensor<T>& t = x->value;
            const size_t chunk = static_cast<size_t>(t.c()) * plane;
            std::copy_n(&t.at(b, 0, 0, 0), chunk, &out.at(b, 0, 0, 0) + off);
            off += chunk;
        }
    }
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        bool any = false;
        for (const auto& x : xs) any = any || x->requires_grad;
        node->requires_grad = any;
        if (any) {
            node->backprop = [xs, plane](const Tensor<T>& grad) {
                for (int b = 0; b < grad.shape[0]; ++b) {
                    size_t off = 0;
                    for (const auto& x : xs) {
                        const size_t chunk = static_cast<size_t>(x->value.c()) * plane;
                        if (x->requires_grad) {
                            Tensor<T>& dx = Graph<T>::ensure_grad(x);
                            const T* src = &grad.at(b, 0, 0, 0) + off;
                            T* dst = &dx.at(b, 0, 0, 0);
                            for (size_t i = 0; i < chunk; ++i) dst[i] += src[i];
                        }
                        off += chunk;
                    }
                }
            };
            g.record(node);
        }
    }
    return node;
}

// sum_i coeff_i * tensor_i with scalar Parameter coefficients.
// d coeff_i = <grad, tensor_i>, d tensor_i = coeff_i * grad.
template <typename T>
Var<T> weighted_sum(Graph<T>& g, const std::vector<std::pair<Parameter<T>*, Var<T>>>& terms) {
    if (terms.empty()) throw ShapeError("weighted_sum: no terms");
    for (const auto& [c, t] : terms) {
        if (!c->is_scalar()) throw ShapeError("weighted_sum: coeff " + c->name + " not scalar");
        require_same_shape(terms[0].second->value, t->value, "weighted_sum");
    }
    const Tensor<T>& first = terms[0].second->value;
    Tensor<T> out(first.n(), first.c(), first.h(), first.w());
    for (const auto& [c, t] : terms) {
        const T cv = c->value.data[0];
        const size_t sz = out.size();
        for (size_t i = 0; i < sz; ++i) out.data[i] += cv * t->value.data[i];
    }
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = true;
        node->backprop = [terms](const Tensor<T>& grad) {
            const size_t sz = grad.size();
            for (const auto& [c, t] : terms) {
                T dot = T(0);
                for (size_t i = 0; i < sz; ++i) dot += grad.data[i] * t->value.data[i];
                c->grad.data[0] += dot;
                if (t->requires_grad) {
                    Tensor<T>& dt = Graph<T>::ensure_grad(t);
                    const T cv = c->value.data[0];
                    for (size_t i = 0; i < sz; ++i) dt.data[i] += cv * grad.data[i];
                }
            }
        };
        g.record(node);
    }
    return node;
}

// coeff * input for a scalar Parameter; differentiable in both.
template <typename T>
Var<T> scale_channels(Graph<T>& g, const Var<T>& x, Parameter<T>& coeff) {
    if (!coeff.is_scalar()) throw ShapeError("scale_channels: coeff " + coeff.name + " not scalar");
    Tensor<T> out = x->value;
    const T cv = coeff.value.data[0];
    for (T& v : out.data) v *= cv;
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = true;
        Parameter<T>* cp = &coeff;
        node->backprop = [x, cp](const Tensor<T>& grad) {
            const size_t sz = grad.size();
            T dot = T(0);
            for (size_t i = 0; i < sz; ++i) dot += grad.data[i] * x->value.data[i];
            cp->grad.data[0] += dot;
            if (x->requires_grad) {
                Tensor<T>& dx = Graph<T>::ensure_grad(x);
                const T cv = cp->value.data[0];
                for (size_t i = 0; i < sz; ++i) dx.data[i] += cv * grad.data[i];
            }
        };
        g.record(node);
    }
    return node;
}

template <typename T>
Var<T> add(Graph<T>& g, const Var<T>& a, const Var<T>& b) {
    require_same_shape(a->value, b->value, "add");
    Tensor<T> out = a->value;
    const size_t sz = out.size();
    for (size_t i = 0; i < sz; ++i) out.data[i] += b->value.data[i];
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = a->requires_grad || b->requires_grad;
        if (node->requires_grad) {
            node->backprop = [a, b](const Tensor<T>& grad) {
                const size_t sz = grad.size();
                for (const Var<T>& v : {a, b}) {
                    if (!v->requires_grad) continue;
                    Tensor<T>& dv = Graph<T>::ensure_grad(v);
                    for (size_t i = 0; i < sz; ++i) dv.data[i] += grad.data[i];
                }
            };
            g.record(node);
        }
    }
    return node;
}

// Mean absolute error against a constant target. Subgradient 0 at exact ties.
template <typename T>
Var<T> l1_loss(Graph<T>& g, const Var<T>& pred, const Tensor<T>& target) {
    require_same_shape(pred->value, target, "l1_loss");
    const size_t sz = pred->value.size();
    T acc = T(0);
    for (size_t i = 0; i < sz; ++i) acc += std::abs(pred->value.data[i] - target.data[i]);
    Tensor<T> out = Tensor<T>::scalar(acc / static_cast<T>(sz));
    auto node = g.leaf(std::move(out));
    if (g.recording()) {
        node->requires_grad = pred->requires_grad;
        if (node->requires_grad) {
            Tensor<T> tgt = target;  // keep alive for the backward pass
            node->backprop = [pred, tgt = std::move(tgt), sz](const Tensor<T>& grad) {
                Tensor<T>& dp = Graph<T>::ensure_grad(pred);
                const T scale = grad.data[0] / static_cast<T>(sz);
                for (size_t i = 0; i < sz; ++i) {
                    const T d = pred->value.data[i] - tgt.data[i];
                    dp.data[i] += d > T(0) ? scale : (d < T(0) ? -scale : T(0));
                }
            };
            g.record(node);
        }
    }
    return node;
}

}  // namespace adcsr
