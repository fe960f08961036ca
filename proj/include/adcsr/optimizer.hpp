#pragma once

#include <cmath>
#include <vector>

#include "adcsr/graph.hpp"

namespace adcsr {

// Adam with bias correction (beta1 0.9, beta2 0.999, eps 1e-8). Operates on
// the parameter set it was built over; non-trainable parameters are never
// registered. Deterministic: plain loops, fixed order.
template <typename T>
class AdamOptimizer {
public:
    explicit AdamOptimizer(std::vector<Parameter<T>*> params, T beta1 = T(0.9),
                           T beta2 = T(0.999), T eps = T(1e-8))
        : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
        for (auto* p : params_) {
            m_.emplace_back(p->value.shape[0], p->value.shape[1], p->value.shape[2],
                            p->value.shape[3]);
            v_.emplace_back(p->value.shape[0], p->value.shape[1], p->value.shape[2],
                            p->value.shape[3]);
        }
    }

    void step(T lr) {
        ++t_;
        const T bc1 = T(1) - std::pow(beta1_, static_cast<T>(t_));
        const T bc2 = T(1) - std::pow(beta2_, static_cast<T>(t_));
        for (size_t i = 0; i < params_.size(); ++i) {
            Parameter<T>& p = *params_[i];
            if (!p.trainable) continue;
            for (size_t j = 0; j < p.value.size(); ++j) {
                const T g = p.grad.data[j];
                if (!std::isfinite(static_cast<double>(g)))
                    throw NumericError("non-finite gradient in parameter '" + p.name + "'");
                T& m = m_[i].data[j];
                T& v = v_[i].data[j];
                m = beta1_ * m + (T(1) - beta1_) * g;
                v = beta2_ * v + (T(1) - beta2_) * g * g;
                p.value.data[j] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps_);
            }
        }
    }

    const std::vector<Parameter<T>*>& params() const { return params_; }
    long step_count() const { return t_; }
    Tensor<T>& moment1(size_t i) { return m_[i]; }
    Tensor<T>& moment2(size_t i) { return v_[i]; }
    void set_step_count(long t) { t_ = t; }

private:
    std::vector<Parameter<T>*> params_;
    std::vector<Tensor<T>> m_, v_;
    T beta1_, beta2_, eps_;
    long t_ = 0;
};

}  // namespace adcsr
