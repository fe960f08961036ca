#include "adcsr/cost.hpp"
#include "adcsr/model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adcsr;

namespace {

ModelConfig tiny_cfg(int feats = 6, int scale = 2) {
    ModelConfig cfg;
    cfg.scale = scale;
    cfg.n_adru = 1;
    cfg.n_adrb_per_adru = 2;
    cfg.n_units_per_adrb = 4;
    cfg.feats = feats;
    cfg.expansion = 2;
    return cfg;
}

template <typename T>
void randomize(std::vector<Parameter<T>*> params, Rng& rng, double lo = -0.5, double hi = 0.5) {
    for (auto* p : params)
        if (p->value.size() > 1)  // leave scalar coefficients at their init
            for (T& v : p->value.data) v = static_cast<T>(rng.uniform(lo, hi));
}

std::vector<oracles::UnitFn<double>> unit_fns(Adrb<double>& block, double slope) {
    std::vector<oracles::UnitFn<double>> fns;
    for (auto& u : block.units)
        fns.push_back([&u, slope](const Tensor<double>& x) {
            return oracles::conv_unit_oracle<double>(x, u.expand.weight.value,
                                                     u.expand.bias.value, u.contract.weight.value,
                                                     u.contract.bias.value, slope);
        });
    return fns;
}

long long param_element_sum(const std::vector<Parameter<float>*>& params) {
    long long total = 0;
    for (auto* p : params) total += static_cast<long long>(p->value.size());
    return total;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("conv unit: zero weights give zero output, shape preserved") {
    ModelConfig cfg = tiny_cfg(8);
    Rng rng(1);
    ConvUnit<float> unit("u", cfg.feats, cfg.expansion, 0.2f, rng);
    for (auto& v : unit.expand.weight.value.data) v = 0.f;
    for (auto& v : unit.contract.weight.value.data) v = 0.f;

    Graph<float> g(false);
    Rng drng(2);
    auto x = oracles::random_tensor<float>(drng, 1, 8, 5, 7);
    auto y = unit.forward(g, g.leaf(x));
    CHECK(y->value.shape == x.shape);
    for (float v : y->value.data) CHECK(v == 0.f);
}

TEST_CASE("conv unit: parameter count for feats=8, expansion=3 is 3488") {
    Rng rng(1);
    ConvUnit<float> unit("u", 8, 3, 0.2f, rng);
    long long total = 0;
    std::vector<Parameter<float>*> ps;
    unit.collect(ps);
    for (auto* p : ps) total += static_cast<long long>(p->value.size());
    CHECK(total == 3488);
}

TEST_CASE("ADRB with unit coefficients matches the dense-connection oracle") {
    for (uint64_t seed = 0; seed < 8; ++seed) {
        ModelConfig cfg = tiny_cfg(4 + static_cast<int>(seed % 3));
        Rng rng(seed * 101 + 5);
        Adrb<double> block = make_adrb<double>("adrb", cfg, rng);

        Rng drng(seed + 77);
        auto x = oracles::random_tensor<double>(drng, 1, cfg.feats, 5, 6);
        Graph<double> g(false);
        auto got = block.forward(g, g.leaf(x))->value;

        auto want = oracles::dense_block_oracle<double>(x, unit_fns(block, cfg.leaky_slope),
                                                        block.lff.weight.value,
                                                        block.lff.bias.value);
        CHECK(oracles::max_abs_diff(got, want) < 1e-6);
    }
}

TEST_CASE("ADRB with zero convs and zero LFF reduces to the outer skip") {
    ModelConfig cfg = tiny_cfg(5);
    Rng rng(9);
    Adrb<double> block = make_adrb<double>("adrb", cfg, rng);
    std::vector<Parameter<double>*> ps;
    block.collect(ps);
    for (auto* p : ps)
        if (p->value.size() > 1) p->value.fill(0.0);

    Rng drng(10);
    auto x = oracles::random_tensor<double>(drng, 1, cfg.feats, 4, 4);
    Graph<double> g(false);
    auto y = block.forward(g, g.leaf(x))->value;
    CHECK(oracles::max_abs_diff(y, x) == 0.0);
}

TEST_CASE("ADRB chain topology (dense off) matches the chain oracle") {
    ModelConfig cfg = tiny_cfg(5);
    cfg.dense_connections = false;
    cfg.adaptive_weights = false;
    for (uint64_t seed = 0; seed < 4; ++seed) {
        Rng rng(seed * 31 + 3);
        Adrb<double> block = make_adrb<double>("adrb", cfg, rng);

        Rng drng(seed + 200);
        auto x = oracles::random_tensor<double>(drng, 1, cfg.feats, 6, 5);
        Graph<double> g(false);
        auto got = block.forward(g, g.leaf(x))->value;
        auto want = oracles::chain_block_oracle<double>(x, unit_fns(block, cfg.leaky_slope),
                                                        block.lff.weight.value,
                                                        block.lff.bias.value);
        CHECK(oracles::max_abs_diff(got, want) < 1e-6);
    }
}

TEST_CASE("ADRU with unit coefficients matches the dense oracle built from ADRB oracles") {
    ModelConfig cfg = tiny_cfg(4);
    cfg.n_adrb_per_adru = 3;
    for (uint64_t seed = 0; seed < 3; ++seed) {
        Rng rng(seed * 7 + 1);
        Adru<double> adru("adru", cfg.n_adrb_per_adru, cfg.feats, cfg.dense_connections,
                          cfg.adaptive_weights, 1.0, rng, cfg.leaky_slope,
                          [&](const std::string& bname) { return make_adrb<double>(bname, cfg, rng); });

        std::vector<oracles::UnitFn<double>> fns;
        for (auto& adrb : adru.units)
            fns.push_back([&adrb, &cfg](const Tensor<double>& x) {
                return oracles::dense_block_oracle<double>(x, unit_fns(adrb, cfg.leaky_slope),
                                                           adrb.lff.weight.value,
                                                           adrb.lff.bias.value);
            });

        Rng drng(seed + 500);
        auto x = oracles::random_tensor<double>(drng, 1, cfg.feats, 5, 5);
        Graph<double> g(false);
        auto got = adru.forward(g, g.leaf(x))->value;
        auto want =
            oracles::dense_block_oracle<double>(x, fns, adru.lff.weight.value,
                                                adru.lff.bias.value);
        CHECK(oracles::max_abs_diff(got, want) < 1e-6);
    }
}

TEST_CASE("model config validation") {
    ModelConfig cfg;
    cfg.scale = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ModelConfig{};
    cfg.dense_connections = false;  // adaptive on dense-off is rejected
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.adaptive_weights = false;
    CHECK_NOTHROW(cfg.validate());
    cfg = ModelConfig{};
    cfg.afsl_kernels = {3, 4};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ModelConfig{};
    cfg.n_adru = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("output spatial shape is exactly r x input for every head and scale") {
    for (int scale : {2, 3, 4}) {
        for (auto head : {HeadVariant::subpixel, HeadVariant::awms, HeadVariant::afsl}) {
            ModelConfig cfg = tiny_cfg(4, scale);
            cfg.head_variant = head;
            AdcsrModel<float> model(cfg, 42);
            Rng drng(7);
            auto lr = oracles::random_tensor<float>(drng, 1, 3, 6, 5);
            auto hr = model.infer(lr);
            CHECK(hr.shape == std::array<int, 4>{1, 3, 6 * scale, 5 * scale});
            auto sk = model.infer_skip(lr);
            CHECK(sk.shape == hr.shape);
            auto body = model.infer_body(lr);
            CHECK(body.shape == hr.shape);
        }
    }
}

TEST_CASE("skip branch: zero weights with bias beta gives a constant image") {
    ModelConfig cfg = tiny_cfg(4, 2);
    AdcsrModel<float> model(cfg, 3);
    for (auto* p : model.skip_parameters()) {
        if (p->name.ends_with(".weight")) p->value.fill(0.f);
        if (p->name.ends_with(".bias")) p->value.fill(0.25f);
    }
    auto lr = Tensor<float>::full(1, 3, 4, 4, 0.9f);
    auto out = model.infer_skip(lr);
    for (float v : out.data) CHECK(v == doctest::Approx(0.25f));
}

TEST_CASE("skip branch: x4 uses exactly two x2 stages with the spec'd param count") {
    ModelConfig cfg = tiny_cfg(4, 4);
    AdcsrModel<float> model(cfg, 3);
    auto skips = model.skip_parameters();
    CHECK(skips.size() == 4);  // two stages, weight+bias each
    long long total = 0;
    for (auto* p : skips) total += static_cast<long long>(p->value.size());
    CHECK(total == 2 * (25 * 3 * 12 + 12));
    CHECK(skip_cost(cfg).params == total);
}

TEST_CASE("adcsr: zeroed BODY leaves SKIP output; zeroed SKIP leaves BODY output") {
    ModelConfig cfg = tiny_cfg(4, 2);
    Rng drng(70);
    auto lr = oracles::random_tensor<float>(drng, 1, 3, 5, 5, 0.0, 1.0);

    AdcsrModel<float> m1(cfg, 11);
    for (auto* p : m1.body_parameters()) p->value.fill(p->value.size() == 1 ? 1.f : 0.f);
    auto skip_out = m1.infer_skip(lr);
    CHECK(oracles::max_abs_diff(m1.infer(lr), skip_out) == 0.0);

    AdcsrModel<float> m2(cfg, 11);
    for (auto* p : m2.skip_parameters()) p->value.fill(0.f);
    auto body_out = m2.infer_body(lr);
    CHECK(oracles::max_abs_diff(m2.infer(lr), body_out) == 0.0);
}

TEST_CASE("adcsr linearity: SKIP weights never affect BODY output and vice versa") {
    ModelConfig cfg = tiny_cfg(4, 2);
    AdcsrModel<float> model(cfg, 13);
    Rng drng(71);
    auto lr = oracles::random_tensor<float>(drng, 1, 3, 5, 5, 0.0, 1.0);
    auto body_before = model.infer_body(lr);
    auto skip_before = model.infer_skip(lr);
    for (auto* p : model.skip_parameters())
        for (auto& v : p->value.data) v += 0.37f;
    CHECK(oracles::max_abs_diff(model.infer_body(lr), body_before) == 0.0);
    for (auto* p : model.body_parameters())
        for (auto& v : p->value.data) v += 0.11f;
    CHECK(oracles::max_abs_diff(model.infer_skip(lr), skip_before) > 0.0);  // skip did change
    auto body_after = model.infer_body(lr);
    CHECK(oracles::max_abs_diff(body_after, body_before) > 0.0);
}

TEST_CASE("cost counter equals instantiated parameter sums across configs") {
    for (int scale : {2, 3, 4}) {
        for (auto head : {HeadVariant::subpixel, HeadVariant::awms, HeadVariant::afsl}) {
            for (bool dense : {true, false}) {
                ModelConfig cfg = tiny_cfg(5, scale);
                cfg.head_variant = head;
                cfg.dense_connections = dense;
                cfg.adaptive_weights = dense;  // adaptive requires dense
                AdcsrModel<float> model(cfg, 1);
                auto report = count_params(cfg);
                CHECK(report.params == param_element_sum(model.parameters()));
                long long trainable = 0;
                for (auto* p : model.parameters())
                    if (p->trainable) trainable += static_cast<long long>(p->value.size());
                CHECK(report.trainable_params == trainable);
            }
        }
    }
}

TEST_CASE("freezing adaptive scalars removes exactly the coefficient edges") {
    ModelConfig c_adaptive = tiny_cfg(5, 2);
    ModelConfig c_frozen = c_adaptive;
    c_frozen.adaptive_weights = false;
    auto ra = count_params(c_adaptive);
    auto rf = count_params(c_frozen);
    CHECK(ra.params == rf.params);
    CHECK(ra.trainable_params - rf.trainable_params == coeff_edge_count(c_adaptive));

    // default-shape block: 4 units dense = 14 edges per block
    ModelConfig dflt;
    CHECK(coeff_edge_count(dflt) == dflt.n_adru * (dflt.n_adrb_per_adru * 14 + 14 + 2));
}

TEST_CASE("head costs: AFSL vs AWMS near-equal, subpixel much smaller (Table-1 shape)") {
    ModelConfig cfg;
    cfg.feats = 64;
    cfg.scale = 2;

    cfg.head_variant = HeadVariant::afsl;
    auto afsl = head_cost(cfg);
    CHECK(afsl.params_no_bias == 125988);  // (9+25+49+81)*64*12 + 12*3

    cfg.head_variant = HeadVariant::subpixel;
    auto sub = head_cost(cfg);
    CHECK(sub.params_no_bias == 6912);  // 9*64*12

    cfg.head_variant = HeadVariant::awms;
    auto awms = head_cost(cfg);
    const double rel =
        std::abs(static_cast<double>(afsl.params - awms.params)) / static_cast<double>(afsl.params);
    CHECK(rel < 0.005);
    CHECK(sub.params * 10 < afsl.params);

    // doubling feats doubles head conv params (linear in input channels)
    ModelConfig cfg2 = cfg;
    cfg2.feats = 128;
    cfg2.head_variant = HeadVariant::subpixel;
    cfg.head_variant = HeadVariant::subpixel;
    CHECK(head_cost(cfg2).params_no_bias == 2 * head_cost(cfg).params_no_bias);
}

TEST_CASE("flop counter scales with input area and is positive") {
    ModelConfig cfg = tiny_cfg(4, 2);
    auto r1 = count_flops(cfg, 8, 8);
    auto r2 = count_flops(cfg, 16, 8);
    CHECK(r1.flops > 0);
    CHECK(r2.flops == 2 * r1.flops);
}

TEST_CASE("n_adru=1 degenerates GFF concat to a single Y (forward runs, shape ok)") {
    ModelConfig cfg = tiny_cfg(4, 2);
    cfg.n_adru = 1;
    AdcsrModel<float> model(cfg, 2);
    Rng drng(8);
    auto lr = oracles::random_tensor<float>(drng, 1, 3, 4, 4);
    CHECK(model.infer(lr).shape == std::array<int, 4>{1, 3, 8, 8});
    CHECK_THROWS_AS(model.infer(Tensor<float>(1, 4, 4, 4)), ShapeError);
}

TEST_SUITE_END();
