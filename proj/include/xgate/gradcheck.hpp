#pragma once

// Finite-difference oracle for every analytic derivative in the library.
// Central differences with h = 1e-5 by default (the f64 sweet spot); the
// pass criterion is relative error where the analytic value is comfortably
// nonzero and absolute error near zero crossings, which avoids false alarms
// where a derivative changes sign.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "xgate/activation.hpp"
#include "xgate/glu.hpp"
#include "xgate/names.hpp"

namespace xgate {

template <class F>
double central_diff(F&& f, double x, double h) {
    if (!(h > 0.0)) throw std::domain_error("central_diff: h must be positive");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct GradReport {
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    double worst_x = 0.0;
    double worst_param = 0.0;  // alpha value at the worst point
    std::size_t n_points = 0;
    bool passed = true;
    std::string detail;  // diagnostic on hard failure (non-finite gradient, first bad point)
};

struct GradCheckOptions {
    double h = 1e-5;
    double tol_rel = 1e-6;
    // Relative error is measured against max(|analytic|, abs_floor), which
    // degrades to an absolute comparison near derivative zero crossings.
    // The floor sits above the f64 noise of central differences (~2e-10 for
    // function values of order ten), so a 1e-6 relative certificate stays
    // achievable on the full grid.
    double abs_floor = 1e-3;
    double corrupt = 0.0;  // added to every analytic component (negative control)
};

namespace detail {

// Records one comparison; flips `passed` and freezes `detail` at the first
// failing point.
inline void record_comparison(GradReport& rep, const GradCheckOptions& opt, double analytic,
                              double numeric, double x, double param, const std::string& label) {
    rep.n_points += 1;
    if (!std::isfinite(analytic)) {
        rep.passed = false;
        if (rep.detail.empty()) {
            std::ostringstream os;
            os << "non-finite analytic gradient: " << label << " at x=" << x
               << ", alpha=" << param;
            rep.detail = os.str();
        }
        return;
    }
    const double abs_err = std::fabs(analytic - numeric);
    const double measure = abs_err / std::max(std::fabs(analytic), opt.abs_floor);
    if (abs_err > rep.max_abs_error) rep.max_abs_error = abs_err;
    if (measure > rep.max_rel_error) {
        rep.max_rel_error = measure;
        rep.worst_x = x;
        rep.worst_param = param;
    }
    if (measure >= opt.tol_rel) {
        rep.passed = false;
        if (rep.detail.empty()) {
            std::ostringstream os;
            os << label << " mismatch at x=" << x << ", alpha=" << param
               << ": analytic=" << analytic << " numeric=" << numeric << " error=" << measure;
            rep.detail = os.str();
        }
    }
}

inline double first_alpha(const RangeParam& r) { return r.alpha.empty() ? 0.0 : r.alpha[0]; }

}  // namespace detail

// Checks d_input and every d_alpha component of act_backward against central
// differences over spec_grid x x_grid. Threshold specs are skipped (the gate
// is not differentiable), contributing zero points.
inline GradReport check_activation_grads(const std::vector<ActivationSpec>& spec_grid,
                                         const std::vector<double>& x_grid,
                                         const GradCheckOptions& opt = {}) {
    GradReport rep;
    for (const ActivationSpec& spec : spec_grid) {
        if (spec.gate == GateKind::Threshold) continue;
        const std::size_t channel = spec.range.kind == RangeKind::PerChannel
                                        ? spec.range.alpha.size() / 2
                                        : 0;
        const std::string label = format_activation_name(spec);
        for (double x : x_grid) {
            const ActGrad grad = act_backward(spec, x, channel);
            const double a0 = detail::first_alpha(spec.range);

            const double fd_input = central_diff(
                [&](double v) { return act_forward(spec, v, channel); }, x, opt.h);
            detail::record_comparison(rep, opt, grad.d_input + opt.corrupt, fd_input, x, a0,
                                      label + " d_input");
            if (!std::isfinite(grad.d_input)) return rep;

            for (std::size_t k = 0; k < grad.d_alpha.size(); ++k) {
                const double fd_alpha = central_diff(
                    [&](double v) {
                        ActivationSpec bumped = spec;
                        bumped.range.alpha[k] = v;
                        return act_forward(bumped, x, channel);
                    },
                    spec.range.alpha[k], opt.h);
                detail::record_comparison(rep, opt, grad.d_alpha[k] + opt.corrupt, fd_alpha, x,
                                          spec.range.alpha[k],
                                          label + " d_alpha[" + std::to_string(k) + "]");
                if (!std::isfinite(grad.d_alpha[k])) return rep;
            }
        }
    }
    return rep;
}

// Same check for glu_backward over a grid of (x, y) pairs.
inline GradReport check_glu_grads(const std::vector<GluSpec>& spec_grid,
                                  const std::vector<std::pair<double, double>>& xy_grid,
                                  const GradCheckOptions& opt = {}) {
    GradReport rep;
    for (const GluSpec& spec : spec_grid) {
        if (spec.gate == GateKind::Threshold) continue;
        const std::size_t channel = spec.range.kind == RangeKind::PerChannel
                                        ? spec.range.alpha.size() / 2
                                        : 0;
        const std::string label = format_glu_name(spec);
        for (const auto& [x, y] : xy_grid) {
            const GluGrad grad = glu_backward(spec, x, y, channel);
            const double a0 = detail::first_alpha(spec.range);

            const double fd_x = central_diff(
                [&](double v) { return glu_forward(spec, v, y, channel); }, x, opt.h);
            detail::record_comparison(rep, opt, grad.d_x + opt.corrupt, fd_x, x, a0,
                                      label + " d_x");
            if (!std::isfinite(grad.d_x)) return rep;

            const double fd_y = central_diff(
                [&](double v) { return glu_forward(spec, x, v, channel); }, y, opt.h);
            detail::record_comparison(rep, opt, grad.d_y + opt.corrupt, fd_y, x, a0,
                                      label + " d_y");
            if (!std::isfinite(grad.d_y)) return rep;

            for (std::size_t k = 0; k < grad.d_alpha.size(); ++k) {
                const double fd_alpha = central_diff(
                    [&](double v) {
                        GluSpec bumped = spec;
                        bumped.range.alpha[k] = v;
                        return glu_forward(bumped, x, y, channel);
                    },
                    spec.range.alpha[k], opt.h);
                detail::record_comparison(rep, opt, grad.d_alpha[k] + opt.corrupt, fd_alpha, x,
                                          spec.range.alpha[k],
                                          label + " d_alpha[" + std::to_string(k) + "]");
                if (!rep.passed && !std::isfinite(grad.d_alpha[k])) return rep;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Default grids: every gate kind x every range variant x 201 x-points x the
// alpha values used throughout the experiments. Completes well under the
// five-second budget.

inline std::vector<double> default_alpha_grid() { return {-0.4, 0.0, 0.32, 1.0, 2.0}; }

inline std::vector<double> default_x_grid(double lo = -10.0, double hi = 10.0,
                                          std::size_t n = 201) {
    std::vector<double> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return xs;
}

namespace detail {

inline std::vector<RangeParam> range_variants_for_alpha(double a, std::size_t channels = 4) {
    std::vector<RangeParam> out;
    out.push_back(RangeParam::standard());
    out.push_back(RangeParam::symmetric(a));
    out.push_back(RangeParam::min_only(a));
    out.push_back(RangeParam::max_only(a));
    out.push_back(RangeParam::asymmetric(a, 1.0 - a));
    out.push_back(RangeParam::per_channel(std::vector<double>(channels, a)));
    return out;
}

}  // namespace detail

inline std::vector<ActivationSpec> default_activation_specs(
    const std::vector<GateKind>& kinds = {GateKind::Arctan, GateKind::GaussCdf, GateKind::Sigmoid,
                                          GateKind::Threshold}) {
    std::vector<ActivationSpec> specs;
    for (GateKind kind : kinds)
        for (double a : default_alpha_grid())
            for (RangeParam& r : detail::range_variants_for_alpha(a))
                specs.push_back(ActivationSpec{kind, std::move(r)});
    return specs;
}

inline std::vector<GluSpec> default_glu_specs(
    const std::vector<GateKind>& kinds = {GateKind::Arctan, GateKind::GaussCdf, GateKind::Sigmoid,
                                          GateKind::Threshold}) {
    std::vector<GluSpec> specs;
    for (GateKind kind : kinds)
        for (GluOrder order : {GluOrder::First, GluOrder::Second})
            for (double a : {0.0, 0.32, 1.0})
                for (RangeParam& r : detail::range_variants_for_alpha(a))
                    specs.push_back(GluSpec{kind, std::move(r), order});
    return specs;
}

inline std::vector<std::pair<double, double>> default_xy_grid(double lo = -5.0, double hi = 5.0,
                                                              std::size_t n = 11) {
    std::vector<std::pair<double, double>> grid;
    grid.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            grid.emplace_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1),
                              lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1));
    return grid;
}

}  // namespace xgate
