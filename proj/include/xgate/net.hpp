#pragma once

// Minimal dense transformer language model with manual backpropagation.
// Pre-norm blocks, learned positional embeddings, causal multi-head
// attention, and an MLP block hosting the activation specs with one
// trainable range parameter per block. Everything is double precision and
// single-threaded; two runs with the same config and seed produce
// bit-identical parameters.
//
// Layout follows nanoGPT-style conventions: weights ~ N(0, 0.02), residual
// projections scaled by 1/sqrt(2*depth), gain-only layer norms, biasless
// linears, zero-initialized output head (so the initial loss is
// ln(vocab_size) exactly).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "xgate/activation.hpp"
#include "xgate/data.hpp"
#include "xgate/glu.hpp"
#include "xgate/tensor.hpp"

namespace xgate {

enum class BlockType { SelfGated, Gated };

struct NetConfig {
    std::size_t depth = 2;
    std::size_t model_dim = 64;
    std::size_t head_dim = 64;
    std::size_t seq_len = 64;
    std::size_t vocab_size = 256;

    BlockType block_type = BlockType::SelfGated;
    GateKind gate = GateKind::Arctan;
    RangeKind range = RangeKind::Symmetric;
    GluOrder glu_order = GluOrder::Second;
    bool train_alpha = true;      // false: alpha stays frozen at its initial value
    double alpha_start = 0.0;     // initial value for every free range parameter
    double alpha_start_2 = 0.0;   // second parameter (Asymmetric)

    double lr_peak = 2e-3;
    double warmup_frac = 0.02;
    double min_lr_ratio = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.95;
    double weight_decay = 0.1;
    double adam_eps = 1e-8;
    double grad_clip = 0.0;       // 0 disables clipping
    std::size_t iterations = 500;
    std::size_t batch_size = 16;
    std::uint64_t seed = 1;

    // Self-gated blocks use ratio 4; gated blocks use ratio 8/3 rounded to a
    // multiple of 8, which keeps the parameter counts of the two block types
    // matched.
    std::size_t hidden_dim() const {
        if (block_type == BlockType::SelfGated) return 4 * model_dim;
        const double exact = static_cast<double>(model_dim) * 8.0 / 3.0;
        std::size_t h = 8 * static_cast<std::size_t>(std::llround(exact / 8.0));
        return h == 0 ? 8 : h;
    }

    std::size_t n_heads() const { return model_dim / head_dim; }

    void validate() const {
        if (depth == 0) throw std::invalid_argument("NetConfig: depth must be positive");
        if (model_dim == 0 || head_dim == 0 || model_dim % head_dim != 0)
            throw std::invalid_argument("NetConfig: model_dim must be a multiple of head_dim");
        if (seq_len == 0 || batch_size == 0 || iterations == 0)
            throw std::invalid_argument("NetConfig: seq_len/batch_size/iterations must be positive");
        if (vocab_size < 2 || vocab_size > 256)
            throw std::invalid_argument("NetConfig: vocab_size must be in [2, 256]");
        if (!(warmup_frac > 0.0 && warmup_frac < 1.0))
            throw std::invalid_argument("NetConfig: warmup_frac must be in (0, 1)");
        if (!(min_lr_ratio > 0.0 && min_lr_ratio <= 1.0))
            throw std::invalid_argument("NetConfig: min_lr_ratio must be in (0, 1]");
        if (grad_clip < 0.0) throw std::invalid_argument("NetConfig: grad_clip must be >= 0");
    }

    RangeParam make_range(std::size_t channels) const {
        switch (range) {
            case RangeKind::Standard: return RangeParam::standard();
            case RangeKind::Symmetric: return RangeParam::symmetric(alpha_start);
            case RangeKind::MinOnly: return RangeParam::min_only(alpha_start);
            case RangeKind::MaxOnly: return RangeParam::max_only(alpha_start);
            case RangeKind::Asymmetric: return RangeParam::asymmetric(alpha_start, alpha_start_2);
            case RangeKind::PerChannel:
                return RangeParam::per_channel(std::vector<double>(channels, alpha_start));
        }
        throw std::logic_error("NetConfig: unknown range kind");
    }
};

struct LayerParams {
    Tensor ln1_g, ln2_g;           // [dim]
    Tensor wq, wk, wv, wo;         // [dim, dim]
    Tensor w_in, w_in2, w_out;     // [dim, hidden], gated second proj, [hidden, dim]
    RangeParam alpha;              // trainable range parameters of this block
    mutable std::uint64_t forward_seq = 0;  // stale-cache detection
};

struct ModelParams {
    Tensor wte, wpe;               // [vocab, dim], [seq, dim]
    std::vector<LayerParams> layers;
    Tensor lnf_g;                  // [dim]
    Tensor head;                   // [dim, vocab]
};

// Flat view of one parameter tensor for the optimizer, clipping, checkpoints
// and finite-difference probes. Order of the refs is fixed by construction.
struct ParamRef {
    std::string name;
    double* data = nullptr;
    std::size_t size = 0;
    std::vector<std::size_t> shape;
    bool decay = false;  // weight decay applies (matrix weights only)
};

namespace detail {

inline void push_ref(std::vector<ParamRef>& refs, const std::string& name, Tensor& t, bool decay) {
    refs.push_back(ParamRef{name, t.data.data(), t.data.size(), t.shape, decay});
}

}  // namespace detail

inline std::vector<ParamRef> collect_params(ModelParams& p, const NetConfig& cfg) {
    std::vector<ParamRef> refs;
    detail::push_ref(refs, "wte", p.wte, true);
    detail::push_ref(refs, "wpe", p.wpe, true);
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        LayerParams& layer = p.layers[l];
        const std::string base = "layers." + std::to_string(l) + ".";
        detail::push_ref(refs, base + "ln1_g", layer.ln1_g, false);
        detail::push_ref(refs, base + "wq", layer.wq, true);
        detail::push_ref(refs, base + "wk", layer.wk, true);
        detail::push_ref(refs, base + "wv", layer.wv, true);
        detail::push_ref(refs, base + "wo", layer.wo, true);
        detail::push_ref(refs, base + "ln2_g", layer.ln2_g, false);
        detail::push_ref(refs, base + "w_in", layer.w_in, true);
        if (cfg.block_type == BlockType::Gated)
            detail::push_ref(refs, base + "w_in2", layer.w_in2, true);
        detail::push_ref(refs, base + "w_out", layer.w_out, true);
        if (cfg.train_alpha && !layer.alpha.alpha.empty())
            refs.push_back(ParamRef{base + "alpha", layer.alpha.alpha.data(),
                                    layer.alpha.alpha.size(), {layer.alpha.alpha.size()}, false});
    }
    detail::push_ref(refs, "lnf_g", p.lnf_g, false);
    detail::push_ref(refs, "head", p.head, true);
    return refs;
}

// ---------------------------------------------------------------------------
// dense kernels (row-major, fixed loop order for determinism)

namespace detail {

// C[n,m] = A[n,k] * B[k,m]
inline void mm(double* c, const double* a, const double* b, std::size_t n, std::size_t k,
               std::size_t m) {
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = c + i * m;
        for (std::size_t j = 0; j < m; ++j) crow[j] = 0.0;
        const double* arow = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            const double* brow = b + p * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
}

// C[k,m] += A[n,k]^T * B[n,m]   (weight gradient accumulation)
inline void mm_at_b_acc(double* c, const double* a, const double* b, std::size_t n, std::size_t k,
                        std::size_t m) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a + i * k;
        const double* brow = b + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            double* crow = c + p * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
}

// C[n,k] = A[n,m] * B[k,m]^T    (input gradient through a weight)
inline void mm_a_bt(double* c, const double* a, const double* b, std::size_t n, std::size_t m,
                    std::size_t k) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a + i * m;
        double* crow = c + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double* brow = b + p * m;
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += arow[j] * brow[j];
            crow[p] = acc;
        }
    }
}

// y = layernorm(x) * g, gain only, row-wise over [n, dim]
inline void ln_forward(const double* x, const double* g, double* y, double* mean, double* rstd,
                       std::size_t n, std::size_t dim) {
    constexpr double eps = 1e-5;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xr = x + i * dim;
        double mu = 0.0;
        for (std::size_t j = 0; j < dim; ++j) mu += xr[j];
        mu /= static_cast<double>(dim);
        double var = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = xr[j] - mu;
            var += d * d;
        }
        var /= static_cast<double>(dim);
        const double rs = 1.0 / std::sqrt(var + eps);
        mean[i] = mu;
        rstd[i] = rs;
        double* yr = y + i * dim;
        for (std::size_t j = 0; j < dim; ++j) yr[j] = (xr[j] - mu) * rs * g[j];
    }
}

// dx (assigned), dg (accumulated) from dy
inline void ln_backward(const double* dy, const double* x, const double* g, const double* mean,
                        const double* rstd, double* dx, double* dg, std::size_t n,
                        std::size_t dim) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* dyr = dy + i * dim;
        const double* xr = x + i * dim;
        double* dxr = dx + i * dim;
        const double mu = mean[i];
        const double rs = rstd[i];
        double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double xhat = (xr[j] - mu) * rs;
            const double dxhat = dyr[j] * g[j];
            dg[j] += dyr[j] * xhat;
            mean_dxhat += dxhat;
            mean_dxhat_xhat += dxhat * xhat;
        }
        mean_dxhat /= static_cast<double>(dim);
        mean_dxhat_xhat /= static_cast<double>(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const double xhat = (xr[j] - mu) * rs;
            const double dxhat = dyr[j] * g[j];
            dxr[j] = rs * (dxhat - mean_dxhat - xhat * mean_dxhat_xhat);
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// MLP block

struct MlpCache {
    Tensor x;   // block input, [n, dim]
    Tensor u;   // first projection, [n, hidden]
    Tensor u2;  // second projection (gated), [n, hidden]
    Tensor a;   // activation output, [n, hidden]
    const LayerParams* src = nullptr;
    std::uint64_t seq = 0;
};

// out = w_out(act(w_in(x))) for self-gated blocks, or the two-projection
// gated form. Shapes are preserved; intermediates land in `cache`.
inline void mlp_forward(const LayerParams& layer, const NetConfig& cfg, const Tensor& x,
                        MlpCache& cache, Tensor& out) {
    const std::size_t n = x.numel() / cfg.model_dim;
    const std::size_t dim = cfg.model_dim;
    const std::size_t hidden = cfg.hidden_dim();
    if (x.numel() % dim != 0)
        throw std::invalid_argument("mlp_forward: input is not a multiple of model_dim");

    cache.x = x;
    cache.u = Tensor({n, hidden});
    cache.a = Tensor({n, hidden});
    detail::mm(cache.u.data.data(), x.data.data(), layer.w_in.data.data(), n, dim, hidden);

    if (cfg.block_type == BlockType::SelfGated) {
        const ActivationSpec spec{cfg.gate, layer.alpha};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < hidden; ++c)
                cache.a.data[i * hidden + c] = act_forward(spec, cache.u.data[i * hidden + c], c);
    } else {
        cache.u2 = Tensor({n, hidden});
        detail::mm(cache.u2.data.data(), x.data.data(), layer.w_in2.data.data(), n, dim, hidden);
        const GluSpec spec{cfg.gate, layer.alpha, cfg.glu_order};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < hidden; ++c)
                cache.a.data[i * hidden + c] = glu_forward(spec, cache.u.data[i * hidden + c],
                                                           cache.u2.data[i * hidden + c], c);
    }

    out = Tensor({n, dim});
    detail::mm(out.data.data(), cache.a.data.data(), layer.w_out.data.data(), n, hidden, dim);

    layer.forward_seq += 1;
    cache.src = &layer;
    cache.seq = layer.forward_seq;
}

// grad_in assigned; weight and alpha grads accumulated into `grads`.
inline void mlp_backward(const LayerParams& layer, LayerParams& grads, const NetConfig& cfg,
                         const MlpCache& cache, const Tensor& grad_out, Tensor& grad_in) {
    if (cache.src != &layer || cache.seq != layer.forward_seq)
        throw std::logic_error("mlp_backward: cache is stale (run mlp_forward first)");
    const std::size_t dim = cfg.model_dim;
    const std::size_t hidden = cfg.hidden_dim();
    const std::size_t n = cache.x.numel() / dim;

    // through out_proj
    Tensor da({n, hidden});
    detail::mm_a_bt(da.data.data(), grad_out.data.data(), layer.w_out.data.data(), n, dim, hidden);
    detail::mm_at_b_acc(grads.w_out.data.data(), cache.a.data.data(), grad_out.data.data(), n,
                        hidden, dim);

    Tensor du({n, hidden});
    grad_in = Tensor({n, dim});

    if (cfg.block_type == BlockType::SelfGated) {
        const ActivationSpec spec{cfg.gate, layer.alpha};
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < hidden; ++c) {
                const double g = da.data[i * hidden + c];
                const auto p = detail::act_partials(spec, cache.u.data[i * hidden + c], c);
                du.data[i * hidden + c] = g * p.d_input;
                switch (layer.alpha.kind) {
                    case RangeKind::Standard: break;
                    case RangeKind::PerChannel: grads.alpha.alpha[c] += g * p.d_a1; break;
                    case RangeKind::Asymmetric:
                        grads.alpha.alpha[0] += g * p.d_a1;
                        grads.alpha.alpha[1] += g * p.d_a2;
                        break;
                    default: grads.alpha.alpha[0] += g * p.d_a1; break;
                }
            }
        }
        detail::mm_a_bt(grad_in.data.data(), du.data.data(), layer.w_in.data.data(), n, hidden,
                        dim);
        detail::mm_at_b_acc(grads.w_in.data.data(), cache.x.data.data(), du.data.data(), n, dim,
                            hidden);
    } else {
        const GluSpec spec{cfg.gate, layer.alpha, cfg.glu_order};
        Tensor du2({n, hidden});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < hidden; ++c) {
                const double g = da.data[i * hidden + c];
                const auto p = detail::glu_partials(spec, cache.u.data[i * hidden + c],
                                                    cache.u2.data[i * hidden + c], c);
                du.data[i * hidden + c] = g * p.d_x;
                du2.data[i * hidden + c] = g * p.d_y;
                switch (layer.alpha.kind) {
                    case RangeKind::Standard: break;
                    case RangeKind::PerChannel: grads.alpha.alpha[c] += g * p.d_a1; break;
                    case RangeKind::Asymmetric:
                        grads.alpha.alpha[0] += g * p.d_a1;
                        grads.alpha.alpha[1] += g * p.d_a2;
                        break;
                    default: grads.alpha.alpha[0] += g * p.d_a1; break;
                }
            }
        }
        detail::mm_a_bt(grad_in.data.data(), du.data.data(), layer.w_in.data.data(), n, hidden,
                        dim);
        detail::mm_at_b_acc(grads.w_in.data.data(), cache.x.data.data(), du.data.data(), n, dim,
                            hidden);
        Tensor gi2({n, dim});
        detail::mm_a_bt(gi2.data.data(), du2.data.data(), layer.w_in2.data.data(), n, hidden, dim);
        for (std::size_t i = 0; i < grad_in.numel(); ++i) grad_in.data[i] += gi2.data[i];
        detail::mm_at_b_acc(grads.w_in2.data.data(), cache.x.data.data(), du2.data.data(), n, dim,
                            hidden);
    }
}

// ---------------------------------------------------------------------------
// full model

class Model {
  public:
    Model(const NetConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
        cfg_.validate();
        init_params(seed);
        grads_ = make_like(params_);
    }

    const NetConfig& config() const { return cfg_; }
    ModelParams& params() { return params_; }
    const ModelParams& params() const { return params_; }
    ModelParams& grads() { return grads_; }

    std::vector<ParamRef> param_refs() { return collect_params(params_, cfg_); }
    std::vector<ParamRef> grad_refs() { return collect_params(grads_, cfg_); }

    std::size_t param_count() {
        std::size_t n = 0;
        for (const auto& r : param_refs()) n += r.size;
        return n;
    }

    void zero_grads() {
        for (auto& r : grad_refs())
            for (std::size_t i = 0; i < r.size; ++i) r.data[i] = 0.0;
    }

    // Mean next-token cross-entropy in nats; gradients are not touched.
    double loss(const Batch& batch) { return run(batch, /*with_grads=*/false); }

    // Loss plus gradients for every parameter (accumulated into zeroed grads).
    double loss_and_grads(const Batch& batch) {
        zero_grads();
        return run(batch, /*with_grads=*/true);
    }

  private:
    struct LayerCache {
        Tensor x0;        // residual input to the attention sub-block
        Tensor xln1;      // ln1 output
        std::vector<double> mean1, rstd1;
        Tensor q, k, v;   // [n, dim]
        Tensor probs;     // [B, heads, T, T]
        Tensor atto;      // heads re-concatenated, [n, dim]
        Tensor x_mid;     // residual input to the MLP sub-block
        Tensor xln2;      // ln2 output
        std::vector<double> mean2, rstd2;
        MlpCache mlp;
    };

    NetConfig cfg_;
    ModelParams params_;
    ModelParams grads_;
    std::vector<LayerCache> caches_;
    Tensor x_final_;
    Tensor xlnf_;
    std::vector<double> meanf_, rstdf_;

    void init_params(std::uint64_t seed) {
        Xoshiro256 rng(seed);
        const std::size_t dim = cfg_.model_dim;
        const std::size_t hidden = cfg_.hidden_dim();
        const double base_std = 0.02;
        const double resid_std = base_std / std::sqrt(2.0 * static_cast<double>(cfg_.depth));

        params_.wte = Tensor::randn({cfg_.vocab_size, dim}, base_std, rng);
        params_.wpe = Tensor::randn({cfg_.seq_len, dim}, base_std, rng);
        params_.layers.resize(cfg_.depth);
        for (auto& layer : params_.layers) {
            layer.ln1_g = Tensor::full({dim}, 1.0);
            layer.ln2_g = Tensor::full({dim}, 1.0);
            layer.wq = Tensor::randn({dim, dim}, base_std, rng);
            layer.wk = Tensor::randn({dim, dim}, base_std, rng);
            layer.wv = Tensor::randn({dim, dim}, base_std, rng);
            layer.wo = Tensor::randn({dim, dim}, resid_std, rng);
            layer.w_in = Tensor::randn({dim, hidden}, base_std, rng);
            if (cfg_.block_type == BlockType::Gated)
                layer.w_in2 = Tensor::randn({dim, hidden}, base_std, rng);
            layer.w_out = Tensor::randn({hidden, dim}, resid_std, rng);
            layer.alpha = cfg_.make_range(hidden);
        }
        params_.lnf_g = Tensor::full({dim}, 1.0);
        params_.head = Tensor::zeros({dim, cfg_.vocab_size});
    }

    // Gradient holder with the same structure but zeroed values.
    ModelParams make_like(const ModelParams& src) {
        ModelParams g;
        g.wte = Tensor::zeros(src.wte.shape);
        g.wpe = Tensor::zeros(src.wpe.shape);
        g.layers.resize(src.layers.size());
        for (std::size_t l = 0; l < src.layers.size(); ++l) {
            const auto& s = src.layers[l];
            auto& d = g.layers[l];
            d.ln1_g = Tensor::zeros(s.ln1_g.shape);
            d.ln2_g = Tensor::zeros(s.ln2_g.shape);
            d.wq = Tensor::zeros(s.wq.shape);
            d.wk = Tensor::zeros(s.wk.shape);
            d.wv = Tensor::zeros(s.wv.shape);
            d.wo = Tensor::zeros(s.wo.shape);
            d.w_in = Tensor::zeros(s.w_in.shape);
            if (cfg_.block_type == BlockType::Gated) d.w_in2 = Tensor::zeros(s.w_in2.shape);
            d.w_out = Tensor::zeros(s.w_out.shape);
            d.alpha = alpha_init(s.alpha);
        }
        g.lnf_g = Tensor::zeros(src.lnf_g.shape);
        g.head = Tensor::zeros(src.head.shape);
        return g;
    }

    double run(const Batch& batch, bool with_grads) {
        const std::size_t B = batch.batch_size;
        const std::size_t T = batch.seq_len;
        const std::size_t dim = cfg_.model_dim;
        const std::size_t V = cfg_.vocab_size;
        const std::size_t n = B * T;
        if (T != cfg_.seq_len)
            throw std::invalid_argument("Model: batch seq_len does not match config");
        if (batch.inputs.size() != n || batch.targets.size() != n)
            throw std::invalid_argument("Model: batch buffers do not match batch_size x seq_len");
        for (std::uint8_t tok : batch.inputs)
            if (tok >= V) throw std::out_of_range("Model: token id out of vocabulary range");
        for (std::uint8_t tok : batch.targets)
            if (tok >= V) throw std::out_of_range("Model: target id out of vocabulary range");

        caches_.resize(cfg_.depth);

        // embeddings
        Tensor h({n, dim});
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t tok = batch.inputs[i];
            const std::size_t pos = i % T;
            const double* te = params_.wte.data.data() + tok * dim;
            const double* pe = params_.wpe.data.data() + pos * dim;
            double* hr = h.data.data() + i * dim;
            for (std::size_t j = 0; j < dim; ++j) hr[j] = te[j] + pe[j];
        }

        for (std::size_t l = 0; l < cfg_.depth; ++l) {
            LayerCache& cc = caches_[l];
            const LayerParams& layer = params_.layers[l];
            cc.x0 = h;
            cc.xln1 = Tensor({n, dim});
            cc.mean1.resize(n);
            cc.rstd1.resize(n);
            detail::ln_forward(cc.x0.data.data(), layer.ln1_g.data.data(), cc.xln1.data.data(),
                               cc.mean1.data(), cc.rstd1.data(), n, dim);
            attention_forward(layer, cc, B, T);
            Tensor attproj({n, dim});
            detail::mm(attproj.data.data(), cc.atto.data.data(), layer.wo.data.data(), n, dim,
                       dim);
            for (std::size_t i = 0; i < n * dim; ++i) h.data[i] += attproj.data[i];

            cc.x_mid = h;
            cc.xln2 = Tensor({n, dim});
            cc.mean2.resize(n);
            cc.rstd2.resize(n);
            detail::ln_forward(cc.x_mid.data.data(), layer.ln2_g.data.data(), cc.xln2.data.data(),
                               cc.mean2.data(), cc.rstd2.data(), n, dim);
            Tensor mlp_out;
            mlp_forward(layer, cfg_, cc.xln2, cc.mlp, mlp_out);
            for (std::size_t i = 0; i < n * dim; ++i) h.data[i] += mlp_out.data[i];
            debug_check_finite(h, "residual stream");
        }

        x_final_ = h;
        xlnf_ = Tensor({n, dim});
        meanf_.resize(n);
        rstdf_.resize(n);
        detail::ln_forward(x_final_.data.data(), params_.lnf_g.data.data(), xlnf_.data.data(),
                           meanf_.data(), rstdf_.data(), n, dim);

        Tensor logits({n, V});
        detail::mm(logits.data.data(), xlnf_.data.data(), params_.head.data.data(), n, dim, V);
        debug_check_finite(logits, "logits");

        // mean cross-entropy, numerically stable; keep per-row lse for backward
        std::vector<double> lse(n);
        double loss_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = logits.data.data() + i * V;
            double mx = row[0];
            for (std::size_t j = 1; j < V; ++j) mx = std::max(mx, row[j]);
            double s = 0.0;
            for (std::size_t j = 0; j < V; ++j) s += std::exp(row[j] - mx);
            lse[i] = mx + std::log(s);
            loss_sum += lse[i] - row[batch.targets[i]];
        }
        const double loss = loss_sum / static_cast<double>(n);
        if (!with_grads) return loss;

        // ----- backward -----
        Tensor dlogits({n, V});
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = logits.data.data() + i * V;
            double* drow = dlogits.data.data() + i * V;
            for (std::size_t j = 0; j < V; ++j) drow[j] = std::exp(row[j] - lse[i]) * inv_n;
            drow[batch.targets[i]] -= inv_n;
        }

        Tensor dxlnf({n, dim});
        detail::mm_a_bt(dxlnf.data.data(), dlogits.data.data(), params_.head.data.data(), n, V,
                        dim);
        detail::mm_at_b_acc(grads_.head.data.data(), xlnf_.data.data(), dlogits.data.data(), n,
                            dim, V);

        Tensor dh({n, dim});
        detail::ln_backward(dxlnf.data.data(), x_final_.data.data(), params_.lnf_g.data.data(),
                            meanf_.data(), rstdf_.data(), dh.data.data(),
                            grads_.lnf_g.data.data(), n, dim);

        for (std::size_t li = cfg_.depth; li-- > 0;) {
            LayerCache& cc = caches_[li];
            const LayerParams& layer = params_.layers[li];
            LayerParams& glayer = grads_.layers[li];

            // MLP sub-block: dh covers dL/d(x_mid + mlp(ln2(x_mid)))
            Tensor dxln2;
            mlp_backward(layer, glayer, cfg_, cc.mlp, dh, dxln2);
            Tensor dx_mid({n, dim});
            detail::ln_backward(dxln2.data.data(), cc.x_mid.data.data(), layer.ln2_g.data.data(),
                                cc.mean2.data(), cc.rstd2.data(), dx_mid.data.data(),
                                glayer.ln2_g.data.data(), n, dim);
            for (std::size_t i = 0; i < n * dim; ++i) dh.data[i] += dx_mid.data[i];

            // attention sub-block
            Tensor datto({n, dim});
            detail::mm_a_bt(datto.data.data(), dh.data.data(), layer.wo.data.data(), n, dim, dim);
            detail::mm_at_b_acc(glayer.wo.data.data(), cc.atto.data.data(), dh.data.data(), n,
                                dim, dim);
            Tensor dxln1({n, dim});
            attention_backward(layer, glayer, cc, datto, dxln1, B, T);
            Tensor dx0({n, dim});
            detail::ln_backward(dxln1.data.data(), cc.x0.data.data(), layer.ln1_g.data.data(),
                                cc.mean1.data(), cc.rstd1.data(), dx0.data.data(),
                                glayer.ln1_g.data.data(), n, dim);
            for (std::size_t i = 0; i < n * dim; ++i) dh.data[i] += dx0.data[i];
        }

        // embedding scatter
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t tok = batch.inputs[i];
            const std::size_t pos = i % T;
            const double* dhr = dh.data.data() + i * dim;
            double* te = grads_.wte.data.data() + tok * dim;
            double* pe = grads_.wpe.data.data() + pos * dim;
            for (std::size_t j = 0; j < dim; ++j) {
                te[j] += dhr[j];
                pe[j] += dhr[j];
            }
        }
        return loss;
    }

    void attention_forward(const LayerParams& layer, LayerCache& cc, std::size_t B,
                           std::size_t T) {
        const std::size_t dim = cfg_.model_dim;
        const std::size_t hd = cfg_.head_dim;
        const std::size_t nh = cfg_.n_heads();
        const std::size_t n = B * T;
        const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

        cc.q = Tensor({n, dim});
        cc.k = Tensor({n, dim});
        cc.v = Tensor({n, dim});
        detail::mm(cc.q.data.data(), cc.xln1.data.data(), layer.wq.data.data(), n, dim, dim);
        detail::mm(cc.k.data.data(), cc.xln1.data.data(), layer.wk.data.data(), n, dim, dim);
        detail::mm(cc.v.data.data(), cc.xln1.data.data(), layer.wv.data.data(), n, dim, dim);
        cc.probs = Tensor({B, nh, T, T});
        cc.atto = Tensor({n, dim});

        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t h = 0; h < nh; ++h) {
                for (std::size_t t = 0; t < T; ++t) {
                    const double* qrow = cc.q.data.data() + (b * T + t) * dim + h * hd;
                    double* prow = cc.probs.data.data() + ((b * nh + h) * T + t) * T;
                    double mx = -1e300;
                    for (std::size_t u = 0; u <= t; ++u) {
                        const double* krow = cc.k.data.data() + (b * T + u) * dim + h * hd;
                        double s = 0.0;
                        for (std::size_t j = 0; j < hd; ++j) s += qrow[j] * krow[j];
                        s *= scale;
                        prow[u] = s;
                        mx = std::max(mx, s);
                    }
                    double denom = 0.0;
                    for (std::size_t u = 0; u <= t; ++u) {
                        prow[u] = std::exp(prow[u] - mx);
                        denom += prow[u];
                    }
                    const double inv = 1.0 / denom;
                    for (std::size_t u = 0; u <= t; ++u) prow[u] *= inv;
                    for (std::size_t u = t + 1; u < T; ++u) prow[u] = 0.0;

                    double* orow = cc.atto.data.data() + (b * T + t) * dim + h * hd;
                    for (std::size_t j = 0; j < hd; ++j) orow[j] = 0.0;
                    for (std::size_t u = 0; u <= t; ++u) {
                        const double p = prow[u];
                        const double* vrow = cc.v.data.data() + (b * T + u) * dim + h * hd;
                        for (std::size_t j = 0; j < hd; ++j) orow[j] += p * vrow[j];
                    }
                }
            }
        }
    }

    void attention_backward(const LayerParams& layer, LayerParams& glayer, LayerCache& cc,
                            const Tensor& datto, Tensor& dxln1, std::size_t B, std::size_t T) {
        const std::size_t dim = cfg_.model_dim;
        const std::size_t hd = cfg_.head_dim;
        const std::size_t nh = cfg_.n_heads();
        const std::size_t n = B * T;
        const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

        Tensor dq({n, dim}), dk({n, dim}), dv({n, dim});
        std::vector<double> ds(T);

        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t h = 0; h < nh; ++h) {
                for (std::size_t t = 0; t < T; ++t) {
                    const double* prow = cc.probs.data.data() + ((b * nh + h) * T + t) * T;
                    const double* dorow = datto.data.data() + (b * T + t) * dim + h * hd;

                    // dp and the softmax Jacobian, then dv
                    double dot = 0.0;
                    for (std::size_t u = 0; u <= t; ++u) {
                        const double* vrow = cc.v.data.data() + (b * T + u) * dim + h * hd;
                        double dp = 0.0;
                        for (std::size_t j = 0; j < hd; ++j) dp += dorow[j] * vrow[j];
                        ds[u] = dp;
                        dot += prow[u] * dp;
                        double* dvrow = dv.data.data() + (b * T + u) * dim + h * hd;
                        for (std::size_t j = 0; j < hd; ++j) dvrow[j] += prow[u] * dorow[j];
                    }
                    const double* qrow = cc.q.data.data() + (b * T + t) * dim + h * hd;
                    double* dqrow = dq.data.data() + (b * T + t) * dim + h * hd;
                    for (std::size_t u = 0; u <= t; ++u) {
                        const double dsc = prow[u] * (ds[u] - dot) * scale;
                        const double* krow = cc.k.data.data() + (b * T + u) * dim + h * hd;
                        double* dkrow = dk.data.data() + (b * T + u) * dim + h * hd;
                        for (std::size_t j = 0; j < hd; ++j) {
                            dqrow[j] += dsc * krow[j];
                            dkrow[j] += dsc * qrow[j];
                        }
                    }
                }
            }
        }

        // back through the q/k/v projections
        Tensor tmp({n, dim});
        detail::mm_a_bt(dxln1.data.data(), dq.data.data(), layer.wq.data.data(), n, dim, dim);
        detail::mm_a_bt(tmp.data.data(), dk.data.data(), layer.wk.data.data(), n, dim, dim);
        for (std::size_t i = 0; i < n * dim; ++i) dxln1.data[i] += tmp.data[i];
        detail::mm_a_bt(tmp.data.data(), dv.data.data(), layer.wv.data.data(), n, dim, dim);
        for (std::size_t i = 0; i < n * dim; ++i) dxln1.data[i] += tmp.data[i];
        detail::mm_at_b_acc(glayer.wq.data.data(), cc.xln1.data.data(), dq.data.data(), n, dim,
                            dim);
        detail::mm_at_b_acc(glayer.wk.data.data(), cc.xln1.data.data(), dk.data.data(), n, dim,
                            dim);
        detail::mm_at_b_acc(glayer.wv.data.data(), cc.xln1.data.data(), dv.data.data(), n, dim,
                            dim);
    }
};

}  // namespace xgate
