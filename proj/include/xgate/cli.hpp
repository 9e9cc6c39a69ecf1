#pragma once

// Implementations of the experiment commands behind the xgate CLI. The
// binary in tools/ only parses flags and dispatches here, so tests can call
// the commands in-process. All CSV output is deterministic for fixed flags
// and seeds; wall-clock values never reach the files.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xgate/checkpoint.hpp"
#include "xgate/csv.hpp"
#include "xgate/data.hpp"
#include "xgate/gradcheck.hpp"
#include "xgate/names.hpp"
#include "xgate/train.hpp"

namespace xgate::cli {

// ---------------------------------------------------------------------------
// shared helpers

struct Stats {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

inline Stats mean_stderr(const std::vector<double>& xs) {
    Stats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double sq = 0.0;
        for (double x : xs) sq += (x - s.mean) * (x - s.mean);
        s.stderr_ = std::sqrt(sq / static_cast<double>(xs.size() - 1)) /
                    std::sqrt(static_cast<double>(xs.size()));
    }
    return s;
}

// Last up-to-5 recorded losses of one run; summaries report their mean and
// standard error.
inline std::vector<double> last5_losses(const std::vector<TrainRecord>& records) {
    std::vector<double> out;
    const std::size_t take = std::min<std::size_t>(5, records.size());
    for (std::size_t i = records.size() - take; i < records.size(); ++i)
        out.push_back(records[i].loss);
    return out;
}

inline std::string sanitize_label(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == '\\') c = '-';
    return s;
}

inline std::size_t sweep_threads(std::size_t cells) {
    std::size_t cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (const char* env = std::getenv("XGATE_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && v > 0) cap = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(cap, cells));
}

inline std::string bool_text(bool b) { return b ? "1" : "0"; }

// Flat key=value text embedded in checkpoints (same format the --config
// flag accepts for the flags it covers).
inline std::string config_text(const NetConfig& cfg, const std::string& label) {
    std::ostringstream os;
    os << "spec=" << label << "\n";
    os << "block=" << (cfg.block_type == BlockType::SelfGated ? "selfgated" : "gated") << "\n";
    os << "gate=" << gate_name(cfg.gate) << "\n";
    os << "range=" << range_name(cfg.range) << "\n";
    os << "order=" << (cfg.glu_order == GluOrder::First ? "1" : "2") << "\n";
    os << "depth=" << cfg.depth << "\n";
    os << "dim=" << cfg.model_dim << "\n";
    os << "head_dim=" << cfg.head_dim << "\n";
    os << "seq_len=" << cfg.seq_len << "\n";
    os << "vocab=" << cfg.vocab_size << "\n";
    os << "lr=" << format_double(cfg.lr_peak) << "\n";
    os << "warmup_frac=" << format_double(cfg.warmup_frac) << "\n";
    os << "min_lr_ratio=" << format_double(cfg.min_lr_ratio) << "\n";
    os << "beta1=" << format_double(cfg.beta1) << "\n";
    os << "beta2=" << format_double(cfg.beta2) << "\n";
    os << "weight_decay=" << format_double(cfg.weight_decay) << "\n";
    os << "grad_clip=" << format_double(cfg.grad_clip) << "\n";
    os << "iterations=" << cfg.iterations << "\n";
    os << "batch=" << cfg.batch_size << "\n";
    os << "seed=" << cfg.seed << "\n";
    os << "train_alpha=" << bool_text(cfg.train_alpha) << "\n";
    os << "alpha_start=" << format_double(cfg.alpha_start) << "\n";
    os << "alpha_start2=" << format_double(cfg.alpha_start_2) << "\n";
    return os.str();
}

inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

// ---------------------------------------------------------------------------
// spec-name resolution onto a NetConfig

struct ResolvedSpec {
    std::string label;  // canonical name used in CSV and filenames
    GateKind gate;
    RangeKind range;
    BlockType block;
    GluOrder order = GluOrder::Second;
};

// name comes from --activation or --glu; range_override from --range;
// order_override from --order (glu names without a digit).
inline ResolvedSpec resolve_spec(const std::string& name, bool is_glu,
                                 std::optional<RangeKind> range_override,
                                 std::optional<GluOrder> order_override) {
    ResolvedSpec r;
    if (is_glu) {
        std::string full = name;
        if (!name.empty() && name.back() != '1' && name.back() != '2' &&
            name.find(':') == std::string::npos)
            full += order_override && *order_override == GluOrder::First ? "1" : "2";
        GluSpec spec = parse_glu_name(full);
        if (order_override) spec.order = *order_override;
        if (range_override) {
            if (spec.gate == GateKind::Threshold && *range_override != RangeKind::Standard)
                throw std::invalid_argument("the threshold gate has no expanded preset");
            spec.range = detail::empty_range(*range_override);
        }
        r.gate = spec.gate;
        r.range = spec.range.kind;
        r.order = spec.order;
        r.block = BlockType::Gated;
        r.label = format_glu_name(spec);
    } else {
        ActivationSpec spec = parse_activation_name(name);
        if (range_override) {
            if (spec.gate == GateKind::Threshold && *range_override != RangeKind::Standard)
                throw std::invalid_argument("the threshold gate has no expanded preset");
            spec.range = detail::empty_range(*range_override);
        }
        r.gate = spec.gate;
        r.range = spec.range.kind;
        r.block = BlockType::SelfGated;
        r.label = format_activation_name(spec);
    }
    return r;
}

inline void apply_spec(NetConfig& cfg, const ResolvedSpec& spec) {
    cfg.block_type = spec.block;
    cfg.gate = spec.gate;
    cfg.range = spec.range;
    cfg.glu_order = spec.order;
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradcheckOptions {
    std::vector<std::string> kinds;  // empty = all
    double tol = 1e-6;
    double h = 1e-5;
    bool corrupt_demo = false;
};

inline std::vector<GateKind> parse_kind_list(const std::vector<std::string>& names) {
    if (names.empty())
        return {GateKind::Arctan, GateKind::GaussCdf, GateKind::Sigmoid, GateKind::Threshold};
    std::vector<GateKind> kinds;
    for (const auto& n : names) {
        if (n == "arctan") kinds.push_back(GateKind::Arctan);
        else if (n == "gausscdf") kinds.push_back(GateKind::GaussCdf);
        else if (n == "sigmoid") kinds.push_back(GateKind::Sigmoid);
        else if (n == "threshold") kinds.push_back(GateKind::Threshold);
        else throw std::invalid_argument("unknown gate kind '" + n + "'");
    }
    return kinds;
}

inline void print_report(std::ostream& os, const std::string& what, const GradReport& rep,
                         double seconds) {
    os << what << ": " << (rep.passed ? "PASS" : "FAIL") << "  points=" << rep.n_points
       << "  max_rel_error=" << format_double(rep.max_rel_error)
       << "  max_abs_error=" << format_double(rep.max_abs_error) << "  worst at x="
       << format_double(rep.worst_x) << " alpha=" << format_double(rep.worst_param) << "  ("
       << format_double(seconds) << " s)\n";
    if (!rep.passed && !rep.detail.empty()) os << "  " << rep.detail << "\n";
}

inline int cmd_gradcheck(const GradcheckOptions& opt, std::ostream& os = std::cout) {
    const auto kinds = parse_kind_list(opt.kinds);
    GradCheckOptions gco;
    gco.tol_rel = opt.tol;
    gco.h = opt.h;
    gco.corrupt = opt.corrupt_demo ? 0.01 : 0.0;
    if (opt.corrupt_demo) os << "corrupt-demo: 0.01 added to every analytic gradient\n";

    const auto t0 = std::chrono::steady_clock::now();
    const GradReport rep_act = check_activation_grads(default_activation_specs(kinds),
                                                      default_x_grid(), gco);
    const auto t1 = std::chrono::steady_clock::now();
    const GradReport rep_glu = check_glu_grads(default_glu_specs(kinds), default_xy_grid(), gco);
    const auto t2 = std::chrono::steady_clock::now();

    print_report(os, "activation gradients", rep_act,
                 std::chrono::duration<double>(t1 - t0).count());
    print_report(os, "glu gradients", rep_glu, std::chrono::duration<double>(t2 - t1).count());
    return rep_act.passed && rep_glu.passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// training jobs (shared by train / sweep-alpha / ablate)

struct JobResult {
    std::vector<TrainRecord> records;
    bool failed = false;
    std::string failure;
    TrainResult outcome;
    std::unique_ptr<Model> model;  // final state, for checkpoints and alpha export
};

inline JobResult run_job(const NetConfig& cfg, const Corpus& corpus) {
    JobResult jr;
    jr.model = std::make_unique<Model>(cfg, cfg.seed);
    try {
        jr.outcome = train(cfg, corpus, *jr.model,
                           [&jr](const TrainRecord& rec) { jr.records.push_back(rec); });
    } catch (const TrainDiverged& e) {
        jr.failed = true;
        jr.failure = e.what();
    }
    return jr;
}

// Runs all jobs, possibly in parallel worker slots (capped by XGATE_THREADS);
// each job itself stays single-threaded and results keep input order.
inline std::vector<JobResult> run_jobs(const std::vector<NetConfig>& cfgs, const Corpus& corpus) {
    std::vector<JobResult> results(cfgs.size());
    const std::size_t workers = sweep_threads(cfgs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfgs.size(); ++i) results[i] = run_job(cfgs[i], corpus);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cfgs.size()) return;
                results[i] = run_job(cfgs[i], corpus);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

struct TrainOptions {
    std::string name = "xatlu";
    bool is_glu = false;
    std::optional<RangeKind> range_override;
    std::optional<GluOrder> order_override;
    NetConfig cfg;                  // sizes/schedule from flags
    bool clip_explicit = false;     // --clip given: do not apply the block default
    std::vector<std::uint64_t> seeds = {1};
    std::filesystem::path corpus_path;
    std::filesystem::path out_dir = "out";
    double val_fraction = 0.1;
};

// Applies the block-type clip default (0.0 self-gated, 0.1 GLU) unless the
// user set --clip.
inline void apply_clip_default(NetConfig& cfg, bool clip_explicit) {
    if (!clip_explicit) cfg.grad_clip = cfg.block_type == BlockType::Gated ? 0.1 : 0.0;
}

inline void write_records_csv(const std::filesystem::path& path, const std::string& label,
                              std::uint64_t seed, std::size_t depth,
                              const std::vector<TrainRecord>& records) {
    CsvWriter csv(path, "train-records");
    std::vector<std::string> header = {"activation", "seed", "iteration", "loss", "lr"};
    for (std::size_t b = 0; b < depth; ++b) header.push_back("alpha_" + std::to_string(b));
    csv.row(header);
    for (const auto& rec : records) {
        std::vector<std::string> row = {label, std::to_string(seed),
                                        std::to_string(rec.iteration), format_double(rec.loss),
                                        format_double(rec.lr)};
        for (double a : rec.alpha_snapshot) row.push_back(format_double(a));
        csv.row(row);
    }
}

inline int cmd_train(const TrainOptions& opt, std::ostream& os = std::cout) {
    const ResolvedSpec spec = resolve_spec(opt.name, opt.is_glu, opt.range_override,
                                           opt.order_override);
    if (opt.seeds.empty()) throw std::invalid_argument("seeds list must be nonempty");
    NetConfig base = opt.cfg;
    apply_spec(base, spec);
    apply_clip_default(base, opt.clip_explicit);
    base.train_alpha = true;
    base.validate();

    const Corpus corpus = load_corpus(opt.corpus_path, opt.val_fraction);
    if (corpus.tokens.size() < 2 * (base.seq_len + 1))
        throw std::runtime_error("corpus too small: need at least " +
                                 std::to_string(2 * (base.seq_len + 1)) + " bytes");
    std::filesystem::create_directories(opt.out_dir);

    std::vector<NetConfig> cfgs;
    for (std::uint64_t seed : opt.seeds) {
        NetConfig c = base;
        c.seed = seed;
        cfgs.push_back(c);
    }
    const auto results = run_jobs(cfgs, corpus);

    const std::string file_label = sanitize_label(spec.label);
    std::vector<double> pooled_losses;
    bool any_failed = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const JobResult& jr = results[i];
        const std::uint64_t seed = opt.seeds[i];
        const auto stem = opt.out_dir / (file_label + "_seed" + std::to_string(seed));
        write_records_csv(stem.string() + ".csv", spec.label, seed, base.depth, jr.records);
        if (jr.failed) {
            any_failed = true;
            os << "seed " << seed << ": " << jr.failure << "\n";
            continue;
        }
        save_checkpoint(stem.string() + ".ckpt", config_text(cfgs[i], spec.label),
                        collect_params(jr.model->params(), cfgs[i]));
        for (double l : last5_losses(jr.records)) pooled_losses.push_back(l);
    }

    std::vector<double> pooled_ppl;
    for (double l : pooled_losses) pooled_ppl.push_back(std::exp(l));
    const Stats loss_stats = mean_stderr(pooled_losses);
    const Stats ppl_stats = mean_stderr(pooled_ppl);
    {
        CsvWriter csv(opt.out_dir / "summary.csv", "train-summary");
        csv.row({"activation", "n_seeds", "mean_loss", "stderr_loss", "mean_ppl", "stderr_ppl"});
        csv.row({spec.label, std::to_string(opt.seeds.size()), format_double(loss_stats.mean),
                 format_double(loss_stats.stderr_), format_double(ppl_stats.mean),
                 format_double(ppl_stats.stderr_)});
    }
    os << spec.label << ": last-5 loss " << format_double(loss_stats.mean) << " +/- "
       << format_double(loss_stats.stderr_) << " nats, ppl " << format_double(ppl_stats.mean)
       << " +/- " << format_double(ppl_stats.stderr_) << " over " << opt.seeds.size()
       << " seed(s)\n";
    return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------------------
// sweep-alpha: frozen fixed-alpha grid

struct SweepOptions {
    TrainOptions base;
    std::vector<double> alphas = {0.0, 0.25, 0.5};
};

inline int cmd_sweep_alpha(const SweepOptions& opt, std::ostream& os = std::cout) {
    const ResolvedSpec spec = resolve_spec(opt.base.name, opt.base.is_glu,
                                           opt.base.range_override, opt.base.order_override);
    if (opt.base.seeds.empty()) throw std::invalid_argument("seeds list must be nonempty");
    if (opt.alphas.empty()) throw std::invalid_argument("alpha list must be nonempty");
    for (double a : opt.alphas)
        if (!std::isfinite(a)) throw std::invalid_argument("alpha values must be finite");

    NetConfig base = opt.base.cfg;
    apply_spec(base, spec);
    apply_clip_default(base, opt.base.clip_explicit);
    // Fixed-alpha protocol: alpha frozen; Standard names sweep the Symmetric
    // expansion of their gate (alpha = 0 reproduces the Standard run).
    base.train_alpha = false;
    if (base.range == RangeKind::Standard) base.range = RangeKind::Symmetric;
    base.validate();

    const Corpus corpus = load_corpus(opt.base.corpus_path, opt.base.val_fraction);
    std::filesystem::create_directories(opt.base.out_dir);

    struct Cell {
        double alpha;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    std::vector<NetConfig> cfgs;
    for (double a : opt.alphas) {
        for (std::uint64_t seed : opt.base.seeds) {
            NetConfig c = base;
            c.alpha_start = a;
            c.alpha_start_2 = a;
            c.seed = seed;
            cells.push_back({a, seed});
            cfgs.push_back(c);
        }
    }
    const auto results = run_jobs(cfgs, corpus);

    {
        CsvWriter csv(opt.base.out_dir / "sweep.csv", "sweep");
        csv.row({"activation", "alpha", "seed", "iteration", "loss", "lr"});
        for (std::size_t i = 0; i < cells.size(); ++i) {
            for (const auto& rec : results[i].records)
                csv.row({spec.label, format_double(cells[i].alpha),
                         std::to_string(cells[i].seed), std::to_string(rec.iteration),
                         format_double(rec.loss), format_double(rec.lr)});
            if (results[i].failed)
                csv.row({spec.label, format_double(cells[i].alpha),
                         std::to_string(cells[i].seed), std::to_string(results[i].records.size()),
                         "nan", "nan"});
        }
    }

    bool any_failed = false;
    double best_alpha = opt.alphas.front();
    double best_loss = std::numeric_limits<double>::infinity();
    {
        CsvWriter csv(opt.base.out_dir / "sweep_summary.csv", "sweep-summary");
        csv.row({"activation", "alpha", "n_seeds", "n_failed", "mean_loss", "stderr_loss",
                 "mean_ppl", "stderr_ppl"});
        for (std::size_t ai = 0; ai < opt.alphas.size(); ++ai) {
            std::vector<double> losses, ppls;
            std::size_t failed = 0;
            for (std::size_t si = 0; si < opt.base.seeds.size(); ++si) {
                const JobResult& jr = results[ai * opt.base.seeds.size() + si];
                if (jr.failed) {
                    failed += 1;
                    continue;
                }
                for (double l : last5_losses(jr.records)) {
                    losses.push_back(l);
                    ppls.push_back(std::exp(l));
                }
            }
            any_failed = any_failed || failed > 0;
            const Stats ls = mean_stderr(losses), ps = mean_stderr(ppls);
            csv.row({spec.label, format_double(opt.alphas[ai]),
                     std::to_string(opt.base.seeds.size()), std::to_string(failed),
                     format_double(ls.mean), format_double(ls.stderr_), format_double(ps.mean),
                     format_double(ps.stderr_)});
            if (!losses.empty() && ls.mean < best_loss) {
                best_loss = ls.mean;
                best_alpha = opt.alphas[ai];
            }
        }
    }
    os << spec.label << " sweep: best fixed alpha " << format_double(best_alpha)
       << " (mean last-5 loss " << format_double(best_loss)
       << "); published full-scale runs favor alpha near 0.32\n";
    return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------------------
// ablate: the full range-parameterization grid at one config

struct AblateOptions {
    TrainOptions base;
    double fixed_alpha = 0.32;
};

inline int cmd_ablate(const AblateOptions& opt, std::ostream& os = std::cout) {
    const ResolvedSpec spec = resolve_spec(opt.base.name, opt.base.is_glu,
                                           opt.base.range_override, opt.base.order_override);
    if (spec.gate == GateKind::Threshold)
        throw std::invalid_argument("the threshold gate has no expanded presets to ablate");
    if (opt.base.seeds.empty()) throw std::invalid_argument("seeds list must be nonempty");

    NetConfig base = opt.base.cfg;
    apply_spec(base, spec);
    apply_clip_default(base, opt.base.clip_explicit);
    base.validate();

    const Corpus corpus = load_corpus(opt.base.corpus_path, opt.base.val_fraction);
    std::filesystem::create_directories(opt.base.out_dir);

    struct Variant {
        std::string tag;
        RangeKind range;
        bool train_alpha;
        double alpha0;
    };
    const std::vector<Variant> variants = {
        {"std", RangeKind::Standard, false, 0.0},
        {"sym", RangeKind::Symmetric, true, 0.0},
        {"sym_fixed", RangeKind::Symmetric, false, opt.fixed_alpha},
        {"min", RangeKind::MinOnly, true, 0.0},
        {"max", RangeKind::MaxOnly, true, 0.0},
        {"asym", RangeKind::Asymmetric, true, 0.0},
        {"chan", RangeKind::PerChannel, true, 0.0},
    };

    std::vector<NetConfig> cfgs;
    for (const auto& v : variants) {
        for (std::uint64_t seed : opt.base.seeds) {
            NetConfig c = base;
            c.range = v.range;
            c.train_alpha = v.train_alpha;
            c.alpha_start = v.alpha0;
            c.alpha_start_2 = 0.0;
            c.seed = seed;
            cfgs.push_back(c);
        }
    }
    const auto results = run_jobs(cfgs, corpus);

    bool any_failed = false;
    CsvWriter csv(opt.base.out_dir / "ablate.csv", "ablate");
    csv.row({"activation", "variant", "seed", "mean_loss", "stderr_loss", "mean_ppl",
             "alpha_mean", "alpha_min", "alpha_max"});
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        for (std::size_t si = 0; si < opt.base.seeds.size(); ++si) {
            const JobResult& jr = results[vi * opt.base.seeds.size() + si];
            if (jr.failed) {
                any_failed = true;
                csv.row({spec.label, variants[vi].tag, std::to_string(opt.base.seeds[si]), "nan",
                         "nan", "nan", "", "", ""});
                continue;
            }
            std::vector<double> losses = last5_losses(jr.records), ppls;
            for (double l : losses) ppls.push_back(std::exp(l));
            const Stats ls = mean_stderr(losses), ps = mean_stderr(ppls);
            // per-block alpha stats, one '|'-joined element per block
            std::string a_mean, a_min, a_max;
            for (const auto& layer : jr.model->params().layers) {
                const auto& a = layer.alpha.alpha;
                double mn = 0.0, mx = 0.0, mu = 0.0;
                if (!a.empty()) {
                    mn = *std::min_element(a.begin(), a.end());
                    mx = *std::max_element(a.begin(), a.end());
                    for (double x : a) mu += x;
                    mu /= static_cast<double>(a.size());
                }
                if (!a_mean.empty()) {
                    a_mean += '|';
                    a_min += '|';
                    a_max += '|';
                }
                a_mean += format_double(mu);
                a_min += format_double(mn);
                a_max += format_double(mx);
            }
            csv.row({spec.label, variants[vi].tag, std::to_string(opt.base.seeds[si]),
                     format_double(ls.mean), format_double(ls.stderr_), format_double(ps.mean),
                     a_mean, a_min, a_max});
        }
    }
    os << "ablate " << spec.label << ": " << variants.size() << " variants x "
       << opt.base.seeds.size() << " seed(s) written\n";
    return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------------------
// export-alpha

struct ExportAlphaOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path out_csv = "alpha.csv";
};

inline int cmd_export_alpha(const ExportAlphaOptions& opt, std::ostream& os = std::cout) {
    const Checkpoint ckpt = load_checkpoint(opt.checkpoint);
    CsvWriter csv(opt.out_csv, "alpha-export");
    csv.row({"layer", "index", "alpha"});
    std::size_t rows = 0;
    for (const auto& name : ckpt.order) {
        // layers.<l>.alpha
        if (name.rfind("layers.", 0) != 0 || name.size() < 7 + 6) continue;
        const auto dot = name.find('.', 7);
        if (dot == std::string::npos || name.substr(dot + 1) != "alpha") continue;
        const std::string layer = name.substr(7, dot - 7);
        const Tensor& t = ckpt.tensors.at(name);
        for (std::size_t i = 0; i < t.numel(); ++i) {
            csv.row({layer, std::to_string(i), format_double(t.data[i])});
            rows += 1;
        }
    }
    os << "exported " << rows << " alpha value(s) from " << opt.checkpoint.string() << " to "
       << opt.out_csv.string() << "\n";
    return 0;
}

}  // namespace xgate::cli
