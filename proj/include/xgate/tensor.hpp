#pragma once

// Dense row-major double tensor. Just storage plus the few helpers the
// network needs; all heavy lifting happens in net.hpp loops.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "xgate/rng.hpp"

namespace xgate {

struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(numel_of(shape), 0.0);
    }

    static std::size_t numel_of(const std::vector<std::size_t>& s) {
        return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
    }

    static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

    static Tensor randn(std::vector<std::size_t> s, double stddev, Xoshiro256& rng) {
        Tensor t(std::move(s));
        for (double& v : t.data) v = stddev * rng.gauss();
        return t;
    }

    static Tensor full(std::vector<std::size_t> s, double value) {
        Tensor t(std::move(s));
        for (double& v : t.data) v = value;
        return t;
    }

    std::size_t numel() const { return data.size(); }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    // 2-D accessors for weight matrices
    double& at(std::size_t r, std::size_t c) {
        assert(shape.size() == 2);
        return data[r * shape[1] + c];
    }
    double at(std::size_t r, std::size_t c) const {
        assert(shape.size() == 2);
        return data[r * shape[1] + c];
    }
};

// Debug-mode finiteness sweep; compiled out of release builds.
inline void debug_check_finite(const Tensor& t, const char* label) {
#ifndef NDEBUG
    for (double v : t.data)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string("non-finite value in tensor ") + label);
#else
    (void)t;
    (void)label;
#endif
}

}  // namespace xgate
