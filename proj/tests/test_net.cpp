#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "testutil.hpp"
#include "xgate/gradcheck.hpp"
#include "xgate/net.hpp"
#include "xgate/optim.hpp"
#include "xgate/train.hpp"

using xgate::BlockType;
using xgate::GateKind;
using xgate::GluOrder;
using xgate::Model;
using xgate::NetConfig;
using xgate::RangeKind;

namespace {

NetConfig tiny_config() {
    NetConfig cfg;
    cfg.depth = 1;
    cfg.model_dim = 16;
    cfg.head_dim = 8;
    cfg.seq_len = 4;
    cfg.vocab_size = 32;
    cfg.batch_size = 2;
    cfg.iterations = 10;
    return cfg;
}

xgate::Batch random_batch(const NetConfig& cfg, std::uint64_t seed) {
    xgate::Batch b;
    b.batch_size = cfg.batch_size;
    b.seq_len = cfg.seq_len;
    xgate::Xoshiro256 rng(seed);
    b.inputs.resize(b.batch_size * b.seq_len);
    b.targets.resize(b.batch_size * b.seq_len);
    for (auto& t : b.inputs) t = static_cast<std::uint8_t>(rng.below(cfg.vocab_size));
    for (auto& t : b.targets) t = static_cast<std::uint8_t>(rng.below(cfg.vocab_size));
    return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// schedule / optimizer / clipping

TEST_CASE("cosine_lr hits the documented anchor points") {
    NetConfig cfg;
    cfg.iterations = 1000;
    cfg.lr_peak = 0.002;
    cfg.warmup_frac = 0.02;
    cfg.min_lr_ratio = 0.1;
    const std::size_t warmup = 20;
    CHECK(xgate::cosine_lr(0, cfg) == 0.0);
    CHECK(xgate::cosine_lr(warmup / 2, cfg) == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(xgate::cosine_lr(warmup, cfg) == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(xgate::cosine_lr(cfg.iterations, cfg) ==
          doctest::Approx(0.1 * 0.002).epsilon(1e-12));
    // decay midpoint: min + (1-min)/2 = 0.55 of peak
    CHECK(xgate::cosine_lr(warmup + (cfg.iterations - warmup) / 2, cfg) ==
          doctest::Approx(0.55 * 0.002).epsilon(1e-12));
    // monotone nonincreasing after warmup
    double prev = 1.0;
    for (std::size_t s = warmup; s <= cfg.iterations; ++s) {
        const double lr = xgate::cosine_lr(s, cfg);
        CHECK(lr <= prev + 1e-18);
        prev = lr;
    }
}

TEST_CASE("adamw_step single-parameter hand values") {
    NetConfig cfg;  // beta 0.9/0.95, eps 1e-8, wd 0.1
    double p = 0.0, g = 1.0;
    std::vector<xgate::ParamRef> params = {{"p", &p, 1, {1}, false}};
    std::vector<xgate::ParamRef> grads = {{"g", &g, 1, {1}, false}};
    xgate::AdamWState state(params);

    SUBCASE("first step moves by -lr/(1+eps) when g=1, wd=0") {
        xgate::adamw_step(params, grads, state, 0.001, cfg);
        CHECK(p == doctest::Approx(-0.001 / (1.0 + 1e-8)).epsilon(1e-12));
    }

    SUBCASE("zero gradient with zero state leaves the value (no decay entry)") {
        g = 0.0;
        p = 1.0;
        xgate::adamw_step(params, grads, state, 0.001, cfg);
        CHECK(p == 1.0);
    }

    SUBCASE("decoupled decay on a matrix weight with zero gradient") {
        params[0].decay = true;
        g = 0.0;
        p = 1.0;
        xgate::adamw_step(params, grads, state, 0.001, cfg);
        CHECK(p == doctest::Approx(0.9999).epsilon(1e-12));
    }
}

TEST_CASE("clip_gradients scales by max_norm/norm, 0 disables") {
    double a = 1.2, b = -1.6;  // norm 2.0
    std::vector<xgate::ParamRef> grads = {{"a", &a, 1, {1}, false}, {"b", &b, 1, {1}, false}};
    SUBCASE("norm above the cap is scaled") {
        const double norm = xgate::clip_gradients(grads, 0.1);
        CHECK(norm == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(a == doctest::Approx(1.2 * 0.05).epsilon(1e-12));
        CHECK(b == doctest::Approx(-1.6 * 0.05).epsilon(1e-12));
    }
    SUBCASE("zero max_norm is the identity") {
        xgate::clip_gradients(grads, 0.0);
        CHECK(a == 1.2);
        CHECK(b == -1.6);
    }
    SUBCASE("norm under the cap is untouched") {
        xgate::clip_gradients(grads, 5.0);
        CHECK(a == 1.2);
        CHECK(b == -1.6);
    }
}

// ---------------------------------------------------------------------------
// MLP block

TEST_CASE("mlp block: zero weights give zero output") {
    NetConfig cfg = tiny_config();
    xgate::LayerParams layer;
    const std::size_t dim = cfg.model_dim, hidden = cfg.hidden_dim();
    layer.w_in = xgate::Tensor::zeros({dim, hidden});
    layer.w_out = xgate::Tensor::zeros({hidden, dim});
    layer.alpha = cfg.make_range(hidden);

    xgate::Tensor x({3, dim});
    for (std::size_t i = 0; i < x.numel(); ++i) x.data[i] = 0.1 * static_cast<double>(i % 7);
    xgate::MlpCache cache;
    xgate::Tensor out;
    xgate::mlp_forward(layer, cfg, x, cache, out);
    for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("mlp block: stale cache is rejected") {
    NetConfig cfg = tiny_config();
    cfg.range = RangeKind::Symmetric;
    xgate::Xoshiro256 rng(3);
    const std::size_t dim = cfg.model_dim, hidden = cfg.hidden_dim();
    xgate::LayerParams layer, grads;
    layer.w_in = xgate::Tensor::randn({dim, hidden}, 0.5, rng);
    layer.w_out = xgate::Tensor::randn({hidden, dim}, 0.5, rng);
    layer.alpha = cfg.make_range(hidden);
    grads.w_in = xgate::Tensor::zeros({dim, hidden});
    grads.w_out = xgate::Tensor::zeros({hidden, dim});
    grads.alpha = xgate::alpha_init(layer.alpha);

    xgate::Tensor x = xgate::Tensor::randn({2, dim}, 1.0, rng);
    xgate::MlpCache c1, c2;
    xgate::Tensor out, grad_in;
    xgate::mlp_forward(layer, cfg, x, c1, out);
    xgate::mlp_forward(layer, cfg, x, c2, out);  // invalidates c1
    xgate::Tensor gout = xgate::Tensor::full({2, dim}, 1.0);
    CHECK_THROWS_AS(xgate::mlp_backward(layer, grads, cfg, c1, gout, grad_in), std::logic_error);
    CHECK_NOTHROW(xgate::mlp_backward(layer, grads, cfg, c2, gout, grad_in));
}

TEST_CASE("mlp block: alpha gradient matches finite differences on a toy block") {
    // 1x1x4 toy block with the expanded arctan activation
    NetConfig cfg;
    cfg.depth = 1;
    cfg.model_dim = 4;
    cfg.head_dim = 4;
    cfg.seq_len = 1;
    cfg.vocab_size = 8;
    cfg.gate = GateKind::Arctan;
    cfg.range = RangeKind::Symmetric;
    cfg.alpha_start = 0.17;
    xgate::Xoshiro256 rng(11);
    const std::size_t dim = 4, hidden = cfg.hidden_dim();
    xgate::LayerParams layer, grads;
    layer.w_in = xgate::Tensor::randn({dim, hidden}, 0.6, rng);
    layer.w_out = xgate::Tensor::randn({hidden, dim}, 0.6, rng);
    layer.alpha = cfg.make_range(hidden);
    grads.w_in = xgate::Tensor::zeros({dim, hidden});
    grads.w_out = xgate::Tensor::zeros({hidden, dim});
    grads.alpha = xgate::alpha_init(layer.alpha);

    xgate::Tensor x = xgate::Tensor::randn({1, dim}, 1.0, rng);
    // scalar loss: sum of outputs -> grad_out of ones
    auto loss_at = [&](double alpha_value) {
        xgate::LayerParams probe;
        probe.w_in = layer.w_in;
        probe.w_out = layer.w_out;
        probe.alpha = xgate::RangeParam::symmetric(alpha_value);
        xgate::MlpCache cache;
        xgate::Tensor out;
        xgate::mlp_forward(probe, cfg, x, cache, out);
        double s = 0.0;
        for (double v : out.data) s += v;
        return s;
    };

    xgate::MlpCache cache;
    xgate::Tensor out, grad_in;
    xgate::mlp_forward(layer, cfg, x, cache, out);
    xgate::Tensor gout = xgate::Tensor::full({1, dim}, 1.0);
    xgate::mlp_backward(layer, grads, cfg, cache, gout, grad_in);

    const double fd = xgate::central_diff(loss_at, cfg.alpha_start, 1e-5);
    CHECK(grads.alpha.alpha[0] == doctest::Approx(fd).epsilon(1e-6));

    // zero upstream gradient -> all grads zero
    grads.alpha.alpha[0] = 0.0;
    grads.w_in.fill(0.0);
    grads.w_out.fill(0.0);
    xgate::mlp_forward(layer, cfg, x, cache, out);
    gout.fill(0.0);
    xgate::mlp_backward(layer, grads, cfg, cache, gout, grad_in);
    for (double v : grad_in.data) CHECK(v == 0.0);
    for (double v : grads.w_in.data) CHECK(v == 0.0);
    CHECK(grads.alpha.alpha[0] == 0.0);
}

TEST_CASE("gated second-order block with unit y-path equals the self-gated block") {
    // x rows sum to 1 and the y-projection is all ones, so y == 1 and
    // g(x)*x*y collapses to the self-gated activation.
    NetConfig gated;
    gated.model_dim = 8;
    gated.head_dim = 8;
    gated.block_type = BlockType::Gated;
    gated.gate = GateKind::GaussCdf;
    gated.range = RangeKind::Symmetric;
    gated.alpha_start = 0.32;
    gated.glu_order = GluOrder::Second;

    const std::size_t dim = 8;
    const std::size_t hidden = gated.hidden_dim();
    xgate::Xoshiro256 rng(5);

    xgate::LayerParams gl;
    gl.w_in = xgate::Tensor::randn({dim, hidden}, 0.7, rng);
    gl.w_in2 = xgate::Tensor::full({dim, hidden}, 1.0);
    gl.w_out = xgate::Tensor::randn({hidden, dim}, 0.7, rng);
    gl.alpha = gated.make_range(hidden);

    // rows with entries 1/dim sum to one, so the all-ones y-projection
    // produces y == 1 exactly up to rounding
    xgate::Tensor x = xgate::Tensor::full({3, dim}, 1.0 / static_cast<double>(dim));

    xgate::MlpCache gc;
    xgate::Tensor gated_out;
    xgate::mlp_forward(gl, gated, x, gc, gated_out);
    REQUIRE(gc.u.numel() == 3 * hidden);
    const xgate::ActivationSpec aspec{gated.gate, gl.alpha};
    for (std::size_t i = 0; i < gc.u.numel(); ++i) {
        CHECK(gc.u2.data[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gc.a.data[i] ==
              doctest::Approx(xgate::act_forward(aspec, gc.u.data[i], i % hidden))
                  .epsilon(1e-12));
    }

    // whole-block output equals projecting the self-gated activations
    xgate::Tensor expected({3, dim});
    xgate::Tensor acts({3, hidden});
    for (std::size_t i = 0; i < gc.u.numel(); ++i)
        acts.data[i] = xgate::act_forward(aspec, gc.u.data[i], i % hidden);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < hidden; ++k)
                s += acts.data[r * hidden + k] * gl.w_out.data[k * dim + c];
            expected.data[r * dim + c] = s;
        }
    for (std::size_t i = 0; i < expected.numel(); ++i)
        CHECK(gated_out.data[i] == doctest::Approx(expected.data[i]).epsilon(1e-10));
}

TEST_CASE("iso-parameter design: gated and self-gated blocks match within rounding") {
    for (std::size_t dim : {64, 128, 256}) {
        NetConfig sg;
        sg.model_dim = dim;
        sg.head_dim = 64;
        sg.block_type = BlockType::SelfGated;
        NetConfig gt = sg;
        gt.block_type = BlockType::Gated;

        const std::size_t sg_params = dim * sg.hidden_dim() + sg.hidden_dim() * dim;
        const std::size_t gt_params = 2 * dim * gt.hidden_dim() + gt.hidden_dim() * dim;
        const double rel_gap = std::fabs(static_cast<double>(sg_params) -
                                         static_cast<double>(gt_params)) /
                               static_cast<double>(sg_params);
        // hidden width rounded to a multiple of 8 moves the count by at most
        // 3*4*dim of 8*dim^2
        CHECK(rel_gap <= 12.0 / (8.0 * static_cast<double>(dim)) + 1e-12);
    }
}

// ---------------------------------------------------------------------------
// whole model

TEST_CASE("loss at init is ln(vocab) with the zero-initialized head") {
    NetConfig cfg = tiny_config();
    Model model(cfg, 1);
    const double loss = model.loss(random_batch(cfg, 2));
    CHECK(loss == doctest::Approx(std::log(static_cast<double>(cfg.vocab_size))).epsilon(0.01));
}

TEST_CASE("token out of vocabulary range is a data error") {
    NetConfig cfg = tiny_config();
    Model model(cfg, 1);
    xgate::Batch b = random_batch(cfg, 3);
    b.inputs[0] = static_cast<std::uint8_t>(cfg.vocab_size);  // one past the end
    CHECK_THROWS_AS(model.loss(b), std::out_of_range);
}

TEST_CASE("whole-model gradients match finite differences (tiny config)") {
    for (auto setup : {std::pair{BlockType::SelfGated, RangeKind::Symmetric},
                       std::pair{BlockType::Gated, RangeKind::Symmetric},
                       std::pair{BlockType::SelfGated, RangeKind::PerChannel},
                       std::pair{BlockType::SelfGated, RangeKind::Asymmetric}}) {
        NetConfig cfg = tiny_config();
        cfg.block_type = setup.first;
        cfg.range = setup.second;
        cfg.gate = setup.first == BlockType::Gated ? GateKind::Sigmoid : GateKind::Arctan;
        cfg.alpha_start = 0.11;
        Model model(cfg, 7);
        // the zero-initialized head blocks gradient flow into the body; give
        // it values so every parameter is exercised
        {
            xgate::Xoshiro256 hr(99);
            for (double& v : model.params().head.data) v = 0.05 * hr.gauss();
        }
        xgate::Batch batch = random_batch(cfg, 8);

        const double base_loss = model.loss_and_grads(batch);
        CHECK(std::isfinite(base_loss));
        auto params = model.param_refs();
        auto grads = model.grad_refs();
        REQUIRE(params.size() == grads.size());

        xgate::Xoshiro256 pick(21);
        const double h = 1e-5;
        int checked = 0;
        for (int probe = 0; probe < 25; ++probe) {
            const std::size_t e = pick.below(params.size());
            const std::size_t i = pick.below(params[e].size);
            double* slot = params[e].data + i;
            const double saved = *slot;
            *slot = saved + h;
            const double up = model.loss(batch);
            *slot = saved - h;
            const double down = model.loss(batch);
            *slot = saved;
            const double fd = (up - down) / (2.0 * h);
            const double an = grads[e].data[i];
            CHECK(std::fabs(an - fd) / std::max({std::fabs(an), std::fabs(fd), 1e-4}) < 1e-4);
            checked += 1;
        }
        CHECK(checked == 25);

        // alpha entries specifically
        for (std::size_t e = 0; e < params.size(); ++e) {
            if (params[e].name.find("alpha") == std::string::npos) continue;
            for (std::size_t i = 0; i < std::min<std::size_t>(params[e].size, 3); ++i) {
                double* slot = params[e].data + i;
                const double saved = *slot;
                *slot = saved + h;
                const double up = model.loss(batch);
                *slot = saved - h;
                const double down = model.loss(batch);
                *slot = saved;
                const double fd = (up - down) / (2.0 * h);
                const double an = grads[e].data[i];
                CHECK(std::fabs(an - fd) / std::max({std::fabs(an), std::fabs(fd), 1e-4}) < 1e-4);
            }
        }
    }
}

TEST_CASE("identical seeds give bit-identical losses and parameters") {
    testutil::ScratchDir dir("net_determinism");
    testutil::write_corpus(dir.path / "c.txt", 30000);
    const xgate::Corpus corpus = xgate::load_corpus(dir.path / "c.txt", 0.1);

    NetConfig cfg = tiny_config();
    cfg.iterations = 8;
    cfg.vocab_size = 256;
    cfg.seed = 42;
    std::vector<double> losses_a, losses_b;
    Model ma(cfg, cfg.seed), mb(cfg, cfg.seed);
    xgate::train(cfg, corpus, ma, [&](const xgate::TrainRecord& r) { losses_a.push_back(r.loss); });
    xgate::train(cfg, corpus, mb, [&](const xgate::TrainRecord& r) { losses_b.push_back(r.loss); });
    REQUIRE(losses_a.size() == losses_b.size());
    for (std::size_t i = 0; i < losses_a.size(); ++i) {
        CHECK(std::memcmp(&losses_a[i], &losses_b[i], sizeof(double)) == 0);
    }
    auto ra = ma.param_refs(), rb = mb.param_refs();
    REQUIRE(ra.size() == rb.size());
    for (std::size_t e = 0; e < ra.size(); ++e)
        CHECK(std::memcmp(ra[e].data, rb[e].data, ra[e].size * sizeof(double)) == 0);
}

TEST_CASE("frozen alpha at zero reproduces the Standard training run bit-exactly") {
    testutil::ScratchDir dir("net_frozen");
    testutil::write_corpus(dir.path / "c.txt", 30000);
    const xgate::Corpus corpus = xgate::load_corpus(dir.path / "c.txt", 0.1);

    NetConfig frozen = tiny_config();
    frozen.iterations = 8;
    frozen.vocab_size = 256;
    frozen.gate = GateKind::Arctan;
    frozen.range = RangeKind::Symmetric;
    frozen.train_alpha = false;
    frozen.alpha_start = 0.0;

    NetConfig standard = frozen;
    standard.range = RangeKind::Standard;
    standard.train_alpha = true;  // Standard has no alpha either way

    std::vector<double> la, lb;
    xgate::train(frozen, corpus, [&](const xgate::TrainRecord& r) { la.push_back(r.loss); });
    xgate::train(standard, corpus, [&](const xgate::TrainRecord& r) { lb.push_back(r.loss); });
    REQUIRE(la.size() == lb.size());
    for (std::size_t i = 0; i < la.size(); ++i)
        CHECK(std::memcmp(&la[i], &lb[i], sizeof(double)) == 0);
}

TEST_CASE("training smoke: loss decreases on a small corpus") {
    testutil::ScratchDir dir("net_smoke");
    testutil::write_corpus(dir.path / "c.txt", 10240);  // 10 KiB
    const xgate::Corpus corpus = xgate::load_corpus(dir.path / "c.txt", 0.1);

    NetConfig cfg;
    cfg.depth = 2;
    cfg.model_dim = 64;
    cfg.head_dim = 64;
    cfg.seq_len = 32;
    cfg.batch_size = 8;
    cfg.iterations = 50;
    cfg.gate = GateKind::Arctan;
    cfg.range = RangeKind::Symmetric;
    cfg.seed = 3;

    const auto result = xgate::train(cfg, corpus, nullptr);
    CHECK(result.final_loss < result.initial_loss);
    for (double a : result.final_alpha_per_block) CHECK(std::isfinite(a));
}

TEST_CASE("alpha moves only through the optimizer") {
    testutil::ScratchDir dir("net_alpha_only");
    testutil::write_corpus(dir.path / "c.txt", 20000);
    const xgate::Corpus corpus = xgate::load_corpus(dir.path / "c.txt", 0.1);

    NetConfig cfg = tiny_config();
    cfg.iterations = 6;
    cfg.vocab_size = 256;
    cfg.range = RangeKind::Symmetric;

    SUBCASE("trainable alpha changes") {
        cfg.train_alpha = true;
        const auto r = xgate::train(cfg, corpus, nullptr);
        bool moved = false;
        for (double a : r.final_alpha_per_block)
            if (a != 0.0) moved = true;
        CHECK(moved);
    }
    SUBCASE("frozen alpha stays put") {
        cfg.train_alpha = false;
        cfg.alpha_start = 0.25;
        const auto r = xgate::train(cfg, corpus, nullptr);
        for (double a : r.final_alpha_per_block) CHECK(a == 0.25);
    }
}

TEST_CASE("NaN loss aborts with the iteration in the message") {
    testutil::ScratchDir dir("net_nan");
    testutil::write_corpus(dir.path / "c.txt", 20000);
    const xgate::Corpus corpus = xgate::load_corpus(dir.path / "c.txt", 0.1);
    NetConfig cfg = tiny_config();
    cfg.iterations = 40;
    cfg.vocab_size = 256;
    cfg.lr_peak = 1e6;  // guaranteed blow-up
    cfg.warmup_frac = 0.02;
    bool threw = false;
    try {
        xgate::train(cfg, corpus, nullptr);
    } catch (const xgate::TrainDiverged& e) {
        threw = true;
        CHECK(std::string(e.what()).find("iteration") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("NetConfig validation") {
    NetConfig cfg = tiny_config();
    cfg.model_dim = 20;  // not a multiple of head_dim=8
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_config();
    cfg.warmup_frac = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_config();
    cfg.min_lr_ratio = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_config();
    CHECK_NOTHROW(cfg.validate());
}
