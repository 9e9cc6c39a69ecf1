// xgate — experiment CLI for expanded-gating-range activations.
//
// Subcommands: gradcheck, train, sweep-alpha, ablate, export-alpha.
// Every subcommand accepts --config <file> with flat key=value lines;
// precedence is flags > config file > built-in defaults. XGATE_THREADS caps
// sweep parallelism. Exit codes: 0 ok, 1 check/run failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xgate/cli.hpp"

namespace {

// Expands "--config <file>" into synthetic --key=value tokens for every key
// the user did not pass explicitly, which yields the documented precedence:
// flags > config file > built-in defaults. The file is flat key=value text
// with '#' comments; keys are the long flag names without dashes.
std::vector<std::string> merge_config_args(int argc, char** argv) {
    std::vector<std::string> tokens(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < tokens.size();) {
        if (tokens[i] == "--config" && i + 1 < tokens.size()) {
            config_path = tokens[i + 1];
            tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                         tokens.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (tokens[i].rfind("--config=", 0) == 0) {
            config_path = tokens[i].substr(9);
            tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return tokens;

    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open '" + config_path + "'");

    std::set<std::string> given;
    for (const auto& t : tokens) {
        if (t.rfind("--", 0) != 0) continue;
        const auto eq = t.find('=');
        given.insert(eq == std::string::npos ? t : t.substr(0, eq));
    }

    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", "expected key=value, got '" + line + "'");
        const std::string flag = "--" + line.substr(0, eq);
        if (given.count(flag)) continue;  // explicit flag wins
        tokens.push_back(flag + "=" + line.substr(eq + 1));
    }
    return tokens;
}

struct CommonFlags {
    std::string activation;
    std::string glu;
    int order = 0;          // 0 = not given
    std::string range;      // std|sym|min|max|asym|chan
    std::size_t depth = 2;
    std::size_t dim = 64;
    std::size_t head_dim = 0;  // 0 = pick automatically
    std::size_t seq_len = 64;
    std::size_t iters = 500;
    std::size_t batch = 16;
    double lr = 2e-3;
    double clip = -1.0;     // <0 = not given, use block-type default
    std::vector<std::uint64_t> seeds = {1};
    std::string corpus;
    std::string out = "out";
};

void add_common_flags(CLI::App* sub, CommonFlags& f, bool needs_corpus) {
    sub->add_option("--activation", f.activation, "self-gated activation name, e.g. xatlu");
    sub->add_option("--glu", f.glu, "gated linear unit name, e.g. geglu2");
    sub->add_option("--order", f.order, "GLU order (1 or 2) when --glu has no digit")
        ->check(CLI::IsMember({1, 2}));
    sub->add_option("--range", f.range, "range variant override")
        ->check(CLI::IsMember({"std", "sym", "min", "max", "asym", "chan"}));
    sub->add_option("--depth", f.depth, "transformer depth");
    sub->add_option("--dim", f.dim, "model dimension");
    sub->add_option("--head-dim", f.head_dim, "attention head dimension (default 64, or dim)");
    sub->add_option("--seq-len", f.seq_len, "sequence length");
    sub->add_option("--iters", f.iters, "training iterations");
    sub->add_option("--batch", f.batch, "batch size");
    sub->add_option("--lr", f.lr, "peak learning rate");
    sub->add_option("--clip", f.clip, "gradient clipping norm (0 disables)");
    sub->add_option("--seeds", f.seeds, "seed list")->delimiter(',');
    auto* c = sub->add_option("--corpus", f.corpus, "path to the text corpus");
    if (needs_corpus) c->required();
    sub->add_option("--out", f.out, "output directory");
}

// help-only entry; the file is expanded before parsing
void add_config_help(CLI::App* sub) {
    static std::string sink;
    sub->add_option("--config", sink, "flat key=value config file (flags take precedence)");
}

std::optional<xgate::RangeKind> range_flag(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return *xgate::detail::parse_range_token(s);
}

xgate::cli::TrainOptions to_train_options(const CLI::App* sub, const CommonFlags& f) {
    xgate::cli::TrainOptions opt;
    const bool has_act = !f.activation.empty();
    const bool has_glu = !f.glu.empty();
    if (has_act == has_glu)
        throw CLI::ValidationError("spec", "give exactly one of --activation or --glu");
    opt.name = has_glu ? f.glu : f.activation;
    opt.is_glu = has_glu;
    opt.range_override = range_flag(f.range);
    if (f.order != 0)
        opt.order_override = f.order == 1 ? xgate::GluOrder::First : xgate::GluOrder::Second;
    opt.cfg.depth = f.depth;
    opt.cfg.model_dim = f.dim;
    opt.cfg.head_dim = f.head_dim != 0 ? f.head_dim : (f.dim % 64 == 0 ? 64 : f.dim);
    opt.cfg.seq_len = f.seq_len;
    opt.cfg.iterations = f.iters;
    opt.cfg.batch_size = f.batch;
    opt.cfg.lr_peak = f.lr;
    opt.clip_explicit = sub->count("--clip") > 0 || f.clip >= 0.0;
    if (opt.clip_explicit) opt.cfg.grad_clip = f.clip < 0.0 ? 0.0 : f.clip;
    opt.seeds = f.seeds;
    opt.corpus_path = f.corpus;
    opt.out_dir = f.out;
    return opt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"expanded-gating-range activation experiments"};
    app.require_subcommand(1);

    // gradcheck
    auto* gc = app.add_subcommand("gradcheck", "finite-difference check of analytic gradients");
    xgate::cli::GradcheckOptions gc_opt;
    gc->add_option("--kinds", gc_opt.kinds, "gate kinds to check (arctan,gausscdf,sigmoid,threshold)")
        ->delimiter(',');
    gc->add_option("--tol", gc_opt.tol, "relative tolerance");
    gc->add_option("--step", gc_opt.h, "finite-difference step");
    gc->add_flag("--corrupt-demo", gc_opt.corrupt_demo,
                 "corrupt analytic gradients to demonstrate failure detection");
    add_config_help(gc);

    // train
    auto* tr = app.add_subcommand("train", "train with a trainable gating range");
    CommonFlags tr_flags;
    add_common_flags(tr, tr_flags, /*needs_corpus=*/true);
    add_config_help(tr);

    // sweep-alpha
    auto* sw = app.add_subcommand("sweep-alpha", "fixed-alpha sweep (alpha frozen per run)");
    CommonFlags sw_flags;
    std::vector<double> sw_alphas = {0.0, 0.25, 0.5};
    add_common_flags(sw, sw_flags, /*needs_corpus=*/true);
    sw->add_option("--alpha", sw_alphas, "fixed alpha values to sweep")->delimiter(',');
    add_config_help(sw);

    // ablate
    auto* ab = app.add_subcommand("ablate", "range-parameterization ablation grid");
    CommonFlags ab_flags;
    double ab_fixed_alpha = 0.32;
    add_common_flags(ab, ab_flags, /*needs_corpus=*/true);
    ab->add_option("--fixed-alpha", ab_fixed_alpha, "alpha for the fixed-Symmetric variant");
    add_config_help(ab);

    // export-alpha
    auto* ex = app.add_subcommand("export-alpha", "dump learned alphas from a checkpoint to CSV");
    xgate::cli::ExportAlphaOptions ex_opt;
    std::string ex_ckpt, ex_out = "alpha.csv";
    ex->add_option("checkpoint", ex_ckpt, "checkpoint file")->required();
    ex->add_option("--out", ex_out, "output CSV path");

    try {
        std::vector<std::string> args = merge_config_args(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gc->parsed()) return xgate::cli::cmd_gradcheck(gc_opt);
        if (tr->parsed()) return xgate::cli::cmd_train(to_train_options(tr, tr_flags));
        if (sw->parsed()) {
            xgate::cli::SweepOptions opt;
            opt.base = to_train_options(sw, sw_flags);
            opt.alphas = sw_alphas;
            return xgate::cli::cmd_sweep_alpha(opt);
        }
        if (ab->parsed()) {
            xgate::cli::AblateOptions opt;
            opt.base = to_train_options(ab, ab_flags);
            opt.fixed_alpha = ab_fixed_alpha;
            return xgate::cli::cmd_ablate(opt);
        }
        if (ex->parsed()) {
            ex_opt.checkpoint = ex_ckpt;
            ex_opt.out_csv = ex_out;
            return xgate::cli::cmd_export_alpha(ex_opt);
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
