#pragma once

// Bounded gating primitives in their canonical (0,1) range, their exact
// derivatives, and the affine range-rescaling transform. Everything here is
// pure, stateless and double precision.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "xgate/erf.hpp"

namespace xgate {

enum class GateKind { Arctan, GaussCdf, Sigmoid, Threshold };

struct Interval {
    double lo;
    double hi;
};

namespace detail {

inline void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(who) + ": non-finite input");
}

}  // namespace detail

// Canonical gate g(x) with range inside [0,1]:
//   Arctan    -> (arctan(x) + pi/2) / pi
//   GaussCdf  -> standard normal CDF, (erf(x/sqrt(2)) + 1) * 0.5
//   Sigmoid   -> 1 / (1 + exp(-x))
//   Threshold -> 1 if x > 0 else 0
inline double gate_eval(GateKind kind, double x) {
    detail::require_finite(x, "gate_eval");
    switch (kind) {
        case GateKind::Arctan:
            return (std::atan(x) + std::numbers::pi / 2.0) / std::numbers::pi;
        case GateKind::GaussCdf:
            return (erf_core(x / std::numbers::sqrt2) + 1.0) * 0.5;
        case GateKind::Sigmoid: {
            // evaluate on the side that avoids overflow of exp
            if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
            const double e = std::exp(x);
            return e / (1.0 + e);
        }
        case GateKind::Threshold:
            return x > 0.0 ? 1.0 : 0.0;
    }
    throw std::logic_error("gate_eval: unknown gate kind");
}

// Exact derivative of gate_eval. The Threshold derivative is defined as 0
// everywhere, including x = 0 (subgradient convention); this only matters
// for the ReLU/ReGLU baselines.
inline double gate_deriv(GateKind kind, double x) {
    detail::require_finite(x, "gate_deriv");
    switch (kind) {
        case GateKind::Arctan:
            return 1.0 / (std::numbers::pi * (1.0 + x * x));
        case GateKind::GaussCdf: {
            static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
            return std::exp(-0.5 * x * x) * inv_sqrt_2pi;
        }
        case GateKind::Sigmoid: {
            const double s = gate_eval(GateKind::Sigmoid, x);
            return s * (1.0 - s);
        }
        case GateKind::Threshold:
            return 0.0;
    }
    throw std::logic_error("gate_deriv: unknown gate kind");
}

// Affine remap of `value` from interval `old_r` onto `new_r`; maps the old
// endpoints onto the new ones exactly and preserves order.
inline double rescale(double value, Interval old_r, Interval new_r) {
    detail::require_finite(value, "rescale");
    if (!(old_r.lo < old_r.hi)) throw std::domain_error("rescale: degenerate source interval");
    if (!(new_r.lo < new_r.hi)) throw std::domain_error("rescale: degenerate target interval");
    return (value - old_r.lo) * (new_r.hi - new_r.lo) / (old_r.hi - old_r.lo) + new_r.lo;
}

}  // namespace xgate
