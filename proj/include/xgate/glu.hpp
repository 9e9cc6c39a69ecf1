#pragma once

// Gated linear units over two pre-split inputs:
//   first order   a(x, y) = g_hat(x) * y
//   second order  a(x, y) = g_hat(x) * x * y
// g_hat is the range-remapped gate from activation.hpp, so every gate kind
// and range variant is available here as well. The projections that produce
// (x, y) live in the network's gated MLP block, not here.

#include <cstddef>
#include <vector>

#include "xgate/activation.hpp"

namespace xgate {

enum class GluOrder { First, Second };

struct GluSpec {
    GateKind gate = GateKind::Sigmoid;
    RangeParam range;
    GluOrder order = GluOrder::Second;
};

inline double glu_forward(const GluSpec& spec, double x, double y, std::size_t channel = 0) {
    const GateAffine aff = range_affine(spec.range, channel);
    const double ghat = gate_eval(spec.gate, x) * aff.scale + aff.offset;
    return spec.order == GluOrder::First ? ghat * y : ghat * x * y;
}

struct GluGrad {
    double d_x = 0.0;
    double d_y = 0.0;
    std::vector<double> d_alpha;
};

namespace detail {

struct GluPartials {
    double d_x = 0.0;
    double d_y = 0.0;
    double d_a1 = 0.0;
    double d_a2 = 0.0;
};

inline GluPartials glu_partials(const GluSpec& spec, double x, double y, std::size_t channel) {
    const GateAffine aff = range_affine(spec.range, channel);
    const double g = gate_eval(spec.gate, x);
    const double gp = gate_deriv(spec.gate, x);
    const double ghat = g * aff.scale + aff.offset;

    GluPartials out;
    double dg_da1 = 0.0, dg_da2 = 0.0;  // d g_hat / d alpha_k
    switch (spec.range.kind) {
        case RangeKind::Standard:
            break;
        case RangeKind::Symmetric:
        case RangeKind::PerChannel:
            dg_da1 = 2.0 * g - 1.0;
            break;
        case RangeKind::MinOnly:
            dg_da1 = g - 1.0;
            break;
        case RangeKind::MaxOnly:
            dg_da1 = g;
            break;
        case RangeKind::Asymmetric:
            dg_da1 = g - 1.0;
            dg_da2 = g;
            break;
    }
    if (spec.order == GluOrder::First) {
        out.d_x = aff.scale * gp * y;
        out.d_y = ghat;
        out.d_a1 = dg_da1 * y;
        out.d_a2 = dg_da2 * y;
    } else {
        out.d_x = (ghat + x * aff.scale * gp) * y;
        out.d_y = ghat * x;
        out.d_a1 = dg_da1 * x * y;
        out.d_a2 = dg_da2 * x * y;
    }
    return out;
}

}  // namespace detail

inline GluGrad glu_backward(const GluSpec& spec, double x, double y, std::size_t channel = 0) {
    const detail::GluPartials p = detail::glu_partials(spec, x, y, channel);
    GluGrad grad;
    grad.d_x = p.d_x;
    grad.d_y = p.d_y;
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
