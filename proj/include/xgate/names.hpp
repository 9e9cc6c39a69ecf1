#pragma once

// Text names for activation and GLU specs, as used by the CLI and CSV files.
//
//   self-gated:  atlu | gelu | silu | relu          (standard range)
//                xatlu | xgelu | xsilu              (expanded, Symmetric)
//   glu:         atglu | geglu | swiglu | reglu + order digit, e.g. geglu2
//                x-prefix for expanded first/second order, e.g. xswiglu1
//
// An optional ":<range>" suffix on expanded names selects the variant:
// sym (default), min, max, asym, chan / per_channel. The threshold gate has
// no expanded preset.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xgate/activation.hpp"
#include "xgate/glu.hpp"

namespace xgate {

inline std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::Arctan: return "arctan";
        case GateKind::GaussCdf: return "gausscdf";
        case GateKind::Sigmoid: return "sigmoid";
        case GateKind::Threshold: return "threshold";
    }
    return "?";
}

inline std::string range_name(RangeKind kind) {
    switch (kind) {
        case RangeKind::Standard: return "std";
        case RangeKind::Symmetric: return "sym";
        case RangeKind::MinOnly: return "min";
        case RangeKind::MaxOnly: return "max";
        case RangeKind::Asymmetric: return "asym";
        case RangeKind::PerChannel: return "per_channel";
    }
    return "?";
}

namespace detail {

inline std::optional<RangeKind> parse_range_token(std::string_view tok) {
    if (tok == "std") return RangeKind::Standard;
    if (tok == "sym") return RangeKind::Symmetric;
    if (tok == "min") return RangeKind::MinOnly;
    if (tok == "max") return RangeKind::MaxOnly;
    if (tok == "asym") return RangeKind::Asymmetric;
    if (tok == "chan" || tok == "per_channel") return RangeKind::PerChannel;
    return std::nullopt;
}

inline std::optional<GateKind> act_base_gate(std::string_view base) {
    if (base == "atlu") return GateKind::Arctan;
    if (base == "gelu") return GateKind::GaussCdf;
    if (base == "silu") return GateKind::Sigmoid;
    if (base == "relu") return GateKind::Threshold;
    return std::nullopt;
}

inline std::optional<GateKind> glu_base_gate(std::string_view base) {
    if (base == "atglu") return GateKind::Arctan;
    if (base == "geglu") return GateKind::GaussCdf;
    if (base == "swiglu") return GateKind::Sigmoid;
    if (base == "reglu") return GateKind::Threshold;
    return std::nullopt;
}

inline std::string act_base_name(GateKind kind) {
    switch (kind) {
        case GateKind::Arctan: return "atlu";
        case GateKind::GaussCdf: return "gelu";
        case GateKind::Sigmoid: return "silu";
        case GateKind::Threshold: return "relu";
    }
    return "?";
}

inline std::string glu_base_name(GateKind kind) {
    switch (kind) {
        case GateKind::Arctan: return "atglu";
        case GateKind::GaussCdf: return "geglu";
        case GateKind::Sigmoid: return "swiglu";
        case GateKind::Threshold: return "reglu";
    }
    return "?";
}

// Free-parameter count at parse time; PerChannel is sized later by the
// caller once the channel dimension is known.
inline RangeParam empty_range(RangeKind kind) {
    std::size_t n = 0;
    if (kind == RangeKind::Symmetric || kind == RangeKind::MinOnly || kind == RangeKind::MaxOnly)
        n = 1;
    else if (kind == RangeKind::Asymmetric)
        n = 2;
    return RangeParam{kind, std::vector<double>(n, 0.0)};
}

// Shared x-prefix / ":range" handling. Returns {base, range kind}.
struct NameParts {
    std::string_view base;
    RangeKind range;
};

inline NameParts split_name(std::string_view name) {
    RangeKind range = RangeKind::Standard;
    bool expanded = false;
    std::string_view rest = name;
    std::string_view suffix;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
        suffix = rest.substr(colon + 1);
        rest = rest.substr(0, colon);
    }
    if (rest.size() > 1 && rest.front() == 'x') {
        expanded = true;
        rest.remove_prefix(1);
        range = RangeKind::Symmetric;
    }
    if (!suffix.empty()) {
        if (!expanded)
            throw std::invalid_argument("spec name '" + std::string(name) +
                                        "': range suffix requires an x- prefix");
        const auto r = parse_range_token(suffix);
        if (!r)
            throw std::invalid_argument("spec name '" + std::string(name) +
                                        "': unknown range suffix '" + std::string(suffix) + "'");
        range = *r;
    }
    return {rest, range};
}

}  // namespace detail

// Parses a self-gated activation name. Alpha parameters come back zeroed
// (PerChannel with an empty vector, to be sized by the caller).
inline ActivationSpec parse_activation_name(std::string_view name) {
    const auto parts = detail::split_name(name);
    const auto gate = detail::act_base_gate(parts.base);
    if (!gate) throw std::invalid_argument("unknown activation name '" + std::string(name) + "'");
    if (*gate == GateKind::Threshold && parts.range != RangeKind::Standard)
        throw std::invalid_argument("the threshold gate has no expanded preset ('" +
                                    std::string(name) + "')");
    ActivationSpec spec;
    spec.gate = *gate;
    spec.range = detail::empty_range(parts.range);
    return spec;
}

// Parses a GLU name ending in an order digit, e.g. "geglu2", "xswiglu1".
inline GluSpec parse_glu_name(std::string_view name) {
    if (name.empty()) throw std::invalid_argument("empty glu name");
    std::string_view rest = name;
    std::string_view suffix;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
        suffix = rest.substr(colon);
        rest = rest.substr(0, colon);
    }
    if (rest.empty() || (rest.back() != '1' && rest.back() != '2'))
        throw std::invalid_argument("glu name '" + std::string(name) +
                                    "' must end in an order digit 1 or 2");
    const GluOrder order = rest.back() == '1' ? GluOrder::First : GluOrder::Second;
    rest.remove_suffix(1);

    const auto parts = detail::split_name(std::string(rest) + std::string(suffix));
    const auto gate = detail::glu_base_gate(parts.base);
    if (!gate) throw std::invalid_argument("unknown glu name '" + std::string(name) + "'");
    if (*gate == GateKind::Threshold && parts.range != RangeKind::Standard)
        throw std::invalid_argument("the threshold gate has no expanded preset ('" +
                                    std::string(name) + "')");
    GluSpec spec;
    spec.gate = *gate;
    spec.order = order;
    spec.range = detail::empty_range(parts.range);
    return spec;
}

inline std::string format_activation_name(const ActivationSpec& spec) {
    std::string base = detail::act_base_name(spec.gate);
    if (spec.range.kind == RangeKind::Standard) return base;
    std::string name = "x" + base;
    if (spec.range.kind != RangeKind::Symmetric) name += ":" + range_name(spec.range.kind);
    return name;
}

inline std::string format_glu_name(const GluSpec& spec) {
    std::string base = detail::glu_base_name(spec.gate);
    const char digit = spec.order == GluOrder::First ? '1' : '2';
    if (spec.range.kind == RangeKind::Standard) return base + digit;
    std::string name = "x" + base + digit;
    if (spec.range.kind != RangeKind::Symmetric) name += ":" + range_name(spec.range.kind);
    return name;
}

}  // namespace xgate
