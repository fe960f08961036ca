#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adcsr/tensor.hpp"

namespace adcsr {

// Named trainable tensor. grad always has the value's shape and accumulates
// additively across backward calls until zero_grad.
template <typename T>
struct Parameter {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;
    bool trainable = true;

    Parameter() = default;
    Parameter(std::string name_, Tensor<T> value_, bool trainable_ = true)
        : name(std::move(name_)),
          value(std::move(value_)),
          grad(value.shape[0], value.shape[1], value.shape[2], value.shape[3]),
          trainable(trainable_) {}

    void zero_grad() { grad.fill(T(0)); }
    bool is_scalar() const { return value.size() == 1; }
};

template <typename T>
void zero_grads(const std::vector<Parameter<T>*>& params) {
    for (auto* p : params) p->zero_grad();
}

// One recorded op application. `backprop` reads this node's grad and
// accumulates into the input nodes' grads and into Parameter grads; it is
// empty for leaves and in no-grad mode.
template <typename T>
struct Node {
    Tensor<T> value;
    Tensor<T> grad;  // allocated lazily during backward
    std::function<void(const Tensor<T>&)> backprop;
    bool requires_grad = false;
};

template <typename T>
using Var = std::shared_ptr<Node<T>>;

// Reverse-mode tape. Ops append their output node in application order;
// backward walks the tape in exact reverse order. With recording off, ops
// compute values only and intermediates free as their handles drop.
template <typename T>
class Graph {
public:
    explicit Graph(bool recording = true) : recording_(recording) {}

    bool recording() const { return recording_; }

    Var<T> leaf(Tensor<T> v, bool requires_grad = false) {
        auto node = std::make_shared<Node<T>>();
        node->value = std::move(v);
        node->requires_grad = recording_ && requires_grad;
        return node;
    }

    void record(const Var<T>& node) {
        if (recording_) tape_.push_back(node);
    }

    // Seeds d(loss)/d(loss) = 1 and propagates. loss must be scalar.
    void backward(const Var<T>& loss) {
        if (loss->value.size() != 1)
            throw ShapeError("backward: loss must be scalar, got " + loss->value.shape_str());
        ensure_grad(loss);
        loss->grad.data[0] += T(1);
        for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) {
            Node<T>& node = **it;
            if (node.backprop && !node.grad.empty()) node.backprop(node.grad);
            node.grad = Tensor<T>();  // released; consumers have already run
        }
    }

    void clear() { tape_.clear(); }
    size_t tape_size() const { return tape_.size(); }

    static Tensor<T>& ensure_grad(const Var<T>& v) {
        if (v->grad.empty())
            v->grad = Tensor<T>(v->value.shape[0], v->value.shape[1], v->value.shape[2],
                                v->value.shape[3]);
        return v->grad;
    }

private:
    bool recording_;
    std::vector<Var<T>> tape_;
};

}  // namespace adcsr
