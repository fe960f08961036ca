#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "adcsr/graph.hpp"
#include "adcsr/rng.hpp"

namespace adcsr {

// Central finite differences vs analytic grads. Intended for the 64-bit mode;
// finite differences are unreliable in 32-bit.
struct GradCheckReport {
    struct Entry {
        std::string name;
        double max_rel = 0.0;
        double max_abs = 0.0;
        int checked = 0;
    };
    std::vector<Entry> per_param;
    double max_rel = 0.0;

    bool pass(double tol) const { return max_rel < tol; }
};

// build_loss records a fresh forward pass and returns the scalar loss node.
// Per parameter, up to max_samples elements are probed (deterministic choice).
template <typename T>
GradCheckReport gradient_check(const std::function<Var<T>(Graph<T>&)>& build_loss,
                               const std::vector<Parameter<T>*>& params, T eps = T(1e-4),
                               int max_samples = 16, uint64_t seed = 7) {
    auto eval = [&]() -> T {
        Graph<T> g(false);
        Var<T> loss = build_loss(g);
        const T v = loss->value.data[0];
        if (!std::isfinite(static_cast<double>(v)))
            throw NumericError("gradient_check: non-finite loss");
        return v;
    };

    zero_grads(params);
    {
        Graph<T> g(true);
        Var<T> loss = build_loss(g);
        if (!std::isfinite(static_cast<double>(loss->value.data[0])))
            throw NumericError("gradient_check: non-finite loss");
        g.backward(loss);
    }

    GradCheckReport report;
    Rng rng(seed);
    for (Parameter<T>* p : params) {
        GradCheckReport::Entry entry;
        entry.name = p->name;
        const size_t count = p->value.size();
        std::vector<size_t> idx;
        if (static_cast<int>(count) <= max_samples) {
            for (size_t i = 0; i < count; ++i) idx.push_back(i);
        } else {
            for (int i = 0; i < max_samples; ++i) idx.push_back(rng.bounded(count));
            std::sort(idx.begin(), idx.end());
            idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        }
        for (size_t i : idx) {
            const T saved = p->value.data[i];
            p->value.data[i] = saved + eps;
            const T fp = eval();
            p->value.data[i] = saved - eps;
            const T fm = eval();
            p->value.data[i] = saved;
            const double fd = (static_cast<double>(fp) - static_cast<double>(fm)) /
                              (2.0 * static_cast<double>(eps));
            const double an = static_cast<double>(p->grad.data[i]);
            const double abs_err = std::abs(an - fd);
            const double denom = std::max(std::abs(an), std::abs(fd));
            // Tiny matching grads are compared absolutely; FD noise floor.
            const double rel = (abs_err < 1e-9) ? 0.0 : abs_err / std::max(denom, 1e-12);
            entry.max_abs = std::max(entry.max_abs, abs_err);
            entry.max_rel = std::max(entry.max_rel, rel);
            ++entry.checked;
        }
        report.max_rel = std::max(report.max_rel, entry.max_rel);
        report.per_param.push_back(std::move(entry));
    }
    return report;
}

}  // namespace adcsr
