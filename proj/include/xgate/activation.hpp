#pragma once

// Self-gated activations a(x) = g(x) * x over every gate kind, with the
// expanded-gating-range parameterizations and analytic gradients with
// respect to both the input and the range parameters.
//
// A range variant turns the canonical gate g into an affine image
// g_hat = scale * g + offset:
//
//   Standard          (0, 1)            scale = 1            offset = 0
//   Symmetric(a)      (-a, 1+a)         scale = 1 + 2a       offset = -a
//   MinOnly(a)        (-a, 1)           scale = 1 + a        offset = -a
//   MaxOnly(a)        (0, 1+a)          scale = 1 + a        offset = 0
//   Asymmetric(a1,a2) (-a1, 1+a2)       scale = 1 + a1 + a2  offset = -a1
//   PerChannel(a_c)   (-a_c, 1+a_c)     per-channel Symmetric
//
// Alpha values are unrestricted; negative values shrink the range.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "xgate/gate.hpp"

namespace xgate {

enum class RangeKind { Standard, Symmetric, MinOnly, MaxOnly, Asymmetric, PerChannel };

// Range parameterization plus its trainable parameters. `alpha` holds the
// free parameters: none for Standard, one scalar for Symmetric/MinOnly/
// MaxOnly, two for Asymmetric, one per channel for PerChannel.
struct RangeParam {
    RangeKind kind = RangeKind::Standard;
    std::vector<double> alpha;

    static RangeParam standard() { return {}; }
    static RangeParam symmetric(double a) { return {RangeKind::Symmetric, {a}}; }
    static RangeParam min_only(double a) { return {RangeKind::MinOnly, {a}}; }
    static RangeParam max_only(double a) { return {RangeKind::MaxOnly, {a}}; }
    static RangeParam asymmetric(double a1, double a2) { return {RangeKind::Asymmetric, {a1, a2}}; }
    static RangeParam per_channel(std::vector<double> a) {
        return {RangeKind::PerChannel, std::move(a)};
    }

    std::size_t free_params() const { return alpha.size(); }

    void validate() const {
        const std::size_t n = alpha.size();
        switch (kind) {
            case RangeKind::Standard:
                if (n != 0) throw std::invalid_argument("RangeParam: Standard carries no alpha");
                return;
            case RangeKind::Symmetric:
            case RangeKind::MinOnly:
            case RangeKind::MaxOnly:
                if (n != 1) throw std::invalid_argument("RangeParam: variant needs one alpha");
                return;
            case RangeKind::Asymmetric:
                if (n != 2) throw std::invalid_argument("RangeParam: Asymmetric needs two alphas");
                return;
            case RangeKind::PerChannel:
                return;  // length is fixed by the channel dimension at call time
        }
        throw std::logic_error("RangeParam: unknown kind");
    }
};

// Returns the variant with all alpha parameters set to 0, preserving the
// shape (kind and per-channel length).
inline RangeParam alpha_init(RangeParam shape) {
    for (double& a : shape.alpha) a = 0.0;
    return shape;
}

struct ActivationSpec {
    GateKind gate = GateKind::Arctan;
    RangeParam range;
};

// g_hat(x) = scale * g(x) + offset for one channel.
struct GateAffine {
    double scale;
    double offset;
};

inline GateAffine range_affine(const RangeParam& range, std::size_t channel) {
    switch (range.kind) {
        case RangeKind::Standard:
            return {1.0, 0.0};
        case RangeKind::Symmetric: {
            const double a = range.alpha[0];
            return {1.0 + 2.0 * a, -a};
        }
        case RangeKind::MinOnly: {
            const double a = range.alpha[0];
            return {1.0 + a, -a};
        }
        case RangeKind::MaxOnly:
            return {1.0 + range.alpha[0], 0.0};
        case RangeKind::Asymmetric:
            return {1.0 + range.alpha[0] + range.alpha[1], -range.alpha[0]};
        case RangeKind::PerChannel: {
            if (channel >= range.alpha.size())
                throw std::out_of_range("range_affine: channel " + std::to_string(channel) +
                                        " out of bounds for " + std::to_string(range.alpha.size()) +
                                        " per-channel alphas");
            const double a = range.alpha[channel];
            return {1.0 + 2.0 * a, -a};
        }
    }
    throw std::logic_error("range_affine: unknown range kind");
}

// Gate remapped to the variant's range.
inline double effective_gate(const ActivationSpec& spec, double x, std::size_t channel = 0) {
    const GateAffine aff = range_affine(spec.range, channel);
    return gate_eval(spec.gate, x) * aff.scale + aff.offset;
}

// a(x) = x * g_hat(x). Standard range recovers ReLU/GELU/SiLU/ATLU.
inline double act_forward(const ActivationSpec& spec, double x, std::size_t channel = 0) {
    return x * effective_gate(spec, x, channel);
}

// Gradients of act_forward. d_alpha has one entry per free range parameter
// (empty for Standard; for PerChannel only the active channel's slot is
// nonzero).
struct ActGrad {
    double d_input = 0.0;
    std::vector<double> d_alpha;
};

namespace detail {

// Flat gradient bundle used on hot paths; d_a1/d_a2 are the derivatives with
// respect to the variant's (first, second) free parameter. For PerChannel,
// d_a1 belongs to the active channel's slot.
struct ActPartials {
    double d_input = 0.0;
    double d_a1 = 0.0;
    double d_a2 = 0.0;
};

inline ActPartials act_partials(const ActivationSpec& spec, double x, std::size_t channel) {
    const GateAffine aff = range_affine(spec.range, channel);
    const double g = gate_eval(spec.gate, x);
    const double gp = gate_deriv(spec.gate, x);
    ActPartials out;
    out.d_input = aff.scale * (g + x * gp) + aff.offset;
    switch (spec.range.kind) {
        case RangeKind::Standard:
            break;
        case RangeKind::Symmetric:
        case RangeKind::PerChannel:
            out.d_a1 = x * (2.0 * g - 1.0);
            break;
        case RangeKind::MinOnly:
            out.d_a1 = x * (g - 1.0);
            break;
        case RangeKind::MaxOnly:
            out.d_a1 = x * g;
            break;
        case RangeKind::Asymmetric:
            out.d_a1 = x * (g - 1.0);
            out.d_a2 = x * g;
            break;
    }
    return out;
}

}  // namespace detail

inline ActGrad act_backward(const ActivationSpec& spec, double x, std::size_t channel = 0) {
    const detail::ActPartials p = detail::act_partials(spec, x, channel);
    ActGrad grad;
    grad.d_input = p.d_input;
    switch (spec.range.kind) {
        case RangeKind::Standard:
            break;
        case RangeKind::Symmetric:
        case RangeKind::MinOnly:
        case RangeKind::MaxOnly:
            grad.d_alpha = {p.d_a1};
            break;
        case RangeKind::Asymmetric:
            grad.d_alpha = {p.d_a1, p.d_a2};
            break;
        case RangeKind::PerChannel:
            grad.d_alpha.assign(spec.range.alpha.size(), 0.0);
            grad.d_alpha[channel] = p.d_a1;
            break;
    }
    return grad;
}

}  // namespace xgate
