#include "adcsr/gradcheck.hpp"
#include "adcsr/ops.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adcsr;

namespace {

// sum(x) as an op composition: l1 distance to a large negative constant has
// gradient 1/N everywhere, so scale by N via a coeff of N... simpler: use
// weighted_sum against a zero tensor and l1 against far-below target.
template <typename T>
Var<T> mean_vs(Graph<T>& g, const Var<T>& v, T target_value) {
    return l1_loss(g, v, Tensor<T>::full(v->value.n(), v->value.c(), v->value.h(), v->value.w(),
                                         target_value));
}

}  // namespace

TEST_SUITE_BEGIN("autograd");

TEST_CASE("backward: linear case, d(sum(w*x))/dw = sum(x)") {
    Rng rng(41);
    auto xt = oracles::random_tensor<double>(rng, 1, 1, 3, 3, 0.5, 1.5);
    Parameter<double> w("w", Tensor<double>::scalar(2.0));

    Graph<double> g;
    auto scaled = scale_channels(g, g.leaf(xt), w);
    // all values >= 0.5*2... target far below keeps |.| = value - target, so the
    // loss is mean(w*x) + const and dL/dw = mean(x).
    auto loss = mean_vs(g, scaled, -100.0);
    g.backward(loss);

    double mean_x = 0;
    for (double v : xt.data) mean_x += v;
    mean_x /= static_cast<double>(xt.size());
    CHECK(w.grad.data[0] == doctest::Approx(mean_x).epsilon(1e-12));
}

TEST_CASE("backward: accumulation is additive, second pass doubles grads") {
    Rng rng(43);
    auto xt = oracles::random_tensor<double>(rng, 1, 2, 4, 4, 0.5, 1.5);
    Parameter<double> w("w", oracles::random_tensor<double>(rng, 3, 2, 3, 3));
    Parameter<double> b("b", Tensor<double>(1, 3, 1, 1));

    auto run_backward = [&]() {
        Graph<double> g;
        auto loss = mean_vs(g, conv2d(g, g.leaf(xt), w, b), -100.0);
        g.backward(loss);
    };
    run_backward();
    auto once_w = w.grad.data;
    auto once_b = b.grad.data;
    run_backward();
    for (size_t i = 0; i < once_w.size(); ++i)
        CHECK(w.grad.data[i] == doctest::Approx(2.0 * once_w[i]).epsilon(1e-12));
    for (size_t i = 0; i < once_b.size(); ++i)
        CHECK(b.grad.data[i] == doctest::Approx(2.0 * once_b[i]).epsilon(1e-12));

    zero_grads<double>({&w, &b});
    for (double v : w.grad.data) CHECK(v == 0.0);
}

TEST_CASE("backward: rejects non-scalar loss") {
    Graph<float> g;
    Parameter<float> w("w", Tensor<float>::full(1, 1, 1, 1, 1.f));
    auto y = scale_channels(g, g.leaf(Tensor<float>(1, 1, 2, 2)), w);
    CHECK_THROWS_AS(g.backward(y), ShapeError);
}

TEST_CASE("gradient_check: conv2d") {
    Rng rng(47);
    auto xt = oracles::random_tensor<double>(rng, 1, 3, 5, 5);
    Parameter<double> w("w", oracles::random_tensor<double>(rng, 2, 3, 3, 3));
    Parameter<double> b("b", oracles::random_tensor<double>(rng, 1, 2, 1, 1, -0.1, 0.1));
    Rng trng(48);
    auto target = oracles::random_tensor<double>(trng, 1, 2, 5, 5, 3.0, 4.0);
    auto build = [&](Graph<double>& g) {
        return l1_loss(g, conv2d(g, g.leaf(xt), w, b), target);
    };
    auto report = gradient_check<double>(build, {&w, &b}, 1e-4, 64);
    CHECK(report.max_rel < 1e-6);
}

TEST_CASE("gradient_check: leaky_relu bounded away from zero is exact") {
    Rng rng(53);
    auto xt = oracles::random_tensor<double>(rng, 1, 2, 4, 4, 0.5, 1.5);
    for (auto& v : xt.data)
        if (Rng(static_cast<uint64_t>(v * 1e6)).next_double() < 0.5) v = -v;
    Parameter<double> w("w", Tensor<double>::scalar(1.3));
    auto build = [&](Graph<double>& g) {
        auto y = leaky_relu(g, scale_channels(g, g.leaf(xt), w), 0.2);
        return mean_vs(g, y, -50.0);
    };
    auto report = gradient_check<double>(build, {&w}, 1e-4, 8);
    CHECK(report.max_rel < 1e-9);
}

TEST_CASE("gradient_check: pixel_shuffle, concat, add composition") {
    Rng rng(59);
    auto xt = oracles::random_tensor<double>(rng, 1, 3, 4, 4);
    Parameter<double> w("w", oracles::random_tensor<double>(rng, 8, 3, 3, 3));
    Parameter<double> b("b", oracles::random_tensor<double>(rng, 1, 8, 1, 1, -0.1, 0.1));
    Parameter<double> c("c", Tensor<double>::scalar(0.7));
    Rng trng(60);
    auto target = oracles::random_tensor<double>(trng, 1, 4, 8, 8, 3.0, 4.0);
    auto build = [&](Graph<double>& g) {
        auto x = g.leaf(xt);
        auto y = pixel_shuffle(g, conv2d(g, x, w, b), 2);          // [1,2,8,8]
        auto z = concat_channels(g, {y, scale_channels(g, y, c)}); // [1,4,8,8]
        return l1_loss(g, z, target);
    };
    auto report = gradient_check<double>(build, {&w, &b, &c}, 1e-4, 24);
    CHECK(report.max_rel < 1e-6);
}

TEST_CASE("gradient_check: weighted_sum coefficient grad matches finite differences") {
    Rng rng(61);
    auto t1 = oracles::random_tensor<double>(rng, 1, 2, 3, 3);
    auto t2 = oracles::random_tensor<double>(rng, 1, 2, 3, 3);
    Parameter<double> c1("c1", Tensor<double>::scalar(0.8));
    Parameter<double> c2("c2", Tensor<double>::scalar(-0.3));
    Rng trng(62);
    auto target = oracles::random_tensor<double>(trng, 1, 2, 3, 3, 5.0, 6.0);
    auto build = [&](Graph<double>& g) {
        auto y = weighted_sum(g, {{&c1, g.leaf(t1)}, {&c2, g.leaf(t2)}});
        return l1_loss(g, y, target);
    };
    auto report = gradient_check<double>(build, {&c1, &c2}, 1e-4, 4);
    CHECK(report.max_rel < 1e-8);

    // and explicitly: d/dc of l1 vs far target is -mean(t_i) ... sign from |.|
    zero_grads<double>({&c1, &c2});
    Graph<double> g;
    auto y = weighted_sum(g, {{&c1, g.leaf(t1)}, {&c2, g.leaf(t2)}});
    auto loss = l1_loss(g, y, target);
    g.backward(loss);
    double want = 0;  // pred < target everywhere -> d loss / d pred = -1/N
    for (double v : t1.data) want -= v / static_cast<double>(t1.size());
    CHECK(c1.grad.data[0] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("gradient_check: l1_loss away from ties") {
    Rng rng(67);
    auto xt = oracles::random_tensor<double>(rng, 1, 2, 4, 4, 1.0, 2.0);
    Parameter<double> w("w", Tensor<double>::scalar(1.1));
    Rng trng(68);
    auto target = oracles::random_tensor<double>(trng, 1, 2, 4, 4, -2.0, -1.0);
    auto build = [&](Graph<double>& g) {
        return l1_loss(g, scale_channels(g, g.leaf(xt), w), target);
    };
    auto report = gradient_check<double>(build, {&w}, 1e-4, 4);
    CHECK(report.max_rel < 1e-9);
}

TEST_SUITE_END();
