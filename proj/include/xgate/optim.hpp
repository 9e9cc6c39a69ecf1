#pragma once

// AdamW with decoupled weight decay, the warmup + cosine learning-rate
// schedule, and global-norm gradient clipping.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "xgate/net.hpp"

namespace xgate {

// Linear warmup from 0 to lr_peak over warmup_frac * iterations steps, then
// cosine decay down to min_lr_ratio * lr_peak at the final iteration.
inline double cosine_lr(std::size_t step, const NetConfig& cfg) {
    if (step > cfg.iterations) throw std::invalid_argument("cosine_lr: step past end of schedule");
    const std::size_t warmup =
        static_cast<std::size_t>(cfg.warmup_frac * static_cast<double>(cfg.iterations));
    if (warmup > 0 && step < warmup)
        return cfg.lr_peak * static_cast<double>(step) / static_cast<double>(warmup);
    if (cfg.iterations == warmup) return cfg.lr_peak;
    const double progress =
        static_cast<double>(step - warmup) / static_cast<double>(cfg.iterations - warmup);
    const double cosine = 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
    return cfg.lr_peak * (cfg.min_lr_ratio + (1.0 - cfg.min_lr_ratio) * cosine);
}

// Global L2-norm clipping across every gradient entry. max_norm of 0
// disables clipping. Returns the pre-clip norm.
inline double clip_gradients(std::vector<ParamRef>& grads, double max_norm) {
    double sq = 0.0;
    for (const auto& g : grads)
        for (std::size_t i = 0; i < g.size; ++i) sq += g.data[i] * g.data[i];
    const double norm = std::sqrt(sq);
    if (max_norm <= 0.0 || norm <= max_norm) return norm;
    const double scale = max_norm / norm;
    for (auto& g : grads)
        for (std::size_t i = 0; i < g.size; ++i) g.data[i] *= scale;
    return norm;
}

struct AdamWState {
    std::vector<std::vector<double>> m, v;
    std::size_t t = 0;

    explicit AdamWState(const std::vector<ParamRef>& params) {
        m.reserve(params.size());
        v.reserve(params.size());
        for (const auto& p : params) {
            m.emplace_back(p.size, 0.0);
            v.emplace_back(p.size, 0.0);
        }
    }
};

// One decoupled-weight-decay Adam step with bias correction. Weight decay is
// applied to matrix weights only (ParamRef::decay); alpha and layer-norm
// gains are exempt.
inline void adamw_step(std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
                       AdamWState& state, double lr, const NetConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw std::invalid_argument("adamw_step: params/grads/state shape mismatch");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t e = 0; e < params.size(); ++e) {
        ParamRef& p = params[e];
        const ParamRef& g = grads[e];
        if (p.size != g.size) throw std::invalid_argument("adamw_step: entry size mismatch");
        std::vector<double>& m = state.m[e];
        std::vector<double>& v = state.v[e];
        const double decay_mul = p.decay ? 1.0 - lr * cfg.weight_decay : 1.0;
        for (std::size_t i = 0; i < p.size; ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g.data[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g.data[i] * g.data[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p.data[i] = p.data[i] * decay_mul - lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
        }
    }
}

}  // namespace xgate
