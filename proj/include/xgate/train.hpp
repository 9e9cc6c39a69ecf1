#pragma once

// Deterministic training loop: sample batch -> forward -> backward -> clip
// -> AdamW with the cosine schedule. One TrainRecord per iteration goes to
// the sink; the trained model comes back to the caller.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xgate/data.hpp"
#include "xgate/net.hpp"
#include "xgate/optim.hpp"

namespace xgate {

struct TrainRecord {
    std::size_t iteration = 0;
    double loss = 0.0;  // nats per token
    double lr = 0.0;
    std::vector<double> alpha_snapshot;  // one value per block (mean of its alphas)
    double wall_ms = 0.0;  // informational only; never written to CSV outputs
};

struct TrainDiverged : std::runtime_error {
    std::size_t iteration;
    explicit TrainDiverged(std::size_t it)
        : std::runtime_error("training diverged: non-finite loss at iteration " +
                             std::to_string(it)),
          iteration(it) {}
};

namespace detail {

inline double mean_alpha(const RangeParam& r) {
    if (r.alpha.empty()) return 0.0;
    double s = 0.0;
    for (double a : r.alpha) s += a;
    return s / static_cast<double>(r.alpha.size());
}

}  // namespace detail

using TrainSink = std::function<void(const TrainRecord&)>;

struct TrainResult {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::vector<double> final_alpha_per_block;
};

// Runs cfg.iterations optimizer steps on the train split of `corpus`.
// Deterministic given cfg.seed: the sampler stream is derived from the seed,
// model init from a fixed offset of it.
inline TrainResult train(const NetConfig& cfg, const Corpus& corpus, Model& model,
                         const TrainSink& sink) {
    cfg.validate();
    Xoshiro256 sampler(cfg.seed ^ 0x5DEECE66DULL);
    auto params = model.param_refs();
    auto grads = model.grad_refs();
    AdamWState state(params);

    TrainResult result;
    Batch batch;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        sample_batch(corpus, Split::Train, cfg.batch_size, cfg.seq_len, sampler, batch);
        double loss;
        try {
            loss = model.loss_and_grads(batch);
        } catch (const std::domain_error&) {
            // parameters already blew up; a gate saw a non-finite input
            throw TrainDiverged(it);
        }
        if (!std::isfinite(loss)) throw TrainDiverged(it);
        clip_gradients(grads, cfg.grad_clip);
        const double lr = cosine_lr(it, cfg);
        adamw_step(params, grads, state, lr, cfg);
        const auto t1 = std::chrono::steady_clock::now();

        TrainRecord rec;
        rec.iteration = it;
        rec.loss = loss;
        rec.lr = lr;
        rec.alpha_snapshot.reserve(cfg.depth);
        for (const auto& layer : model.params().layers)
            rec.alpha_snapshot.push_back(detail::mean_alpha(layer.alpha));
        rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (sink) sink(rec);

        if (it == 0) result.initial_loss = loss;
        result.final_loss = loss;
    }
    result.final_alpha_per_block.reserve(cfg.depth);
    for (const auto& layer : model.params().layers)
        result.final_alpha_per_block.push_back(detail::mean_alpha(layer.alpha));
    return result;
}

inline TrainResult train(const NetConfig& cfg, const Corpus& corpus, const TrainSink& sink) {
    Model model(cfg, cfg.seed);
    return train(cfg, corpus, model, sink);
}

}  // namespace xgate
