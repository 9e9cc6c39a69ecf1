#pragma once

// Corpus ingestion and seeded batch sampling. Tokenization is the identity
// map over bytes (vocab 256), which keeps the softmax small at desk scale
// and removes any tokenizer dependency.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xgate/rng.hpp"

namespace xgate {

struct Corpus {
    std::vector<std::uint8_t> tokens;
    std::size_t split_point = 0;  // [0, split_point) train, [split_point, end) val
};

enum class Split { Train, Val };

// Reads a file as raw byte tokens and places the train/val boundary at
// (1 - val_fraction) of its length.
inline Corpus load_corpus(const std::filesystem::path& path, double val_fraction) {
    if (!(val_fraction >= 0.0 && val_fraction < 1.0))
        throw std::invalid_argument("load_corpus: val_fraction must be in [0, 1)");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_corpus: cannot open '" + path.string() + "'");
    Corpus corpus;
    corpus.tokens.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("load_corpus: read error on '" + path.string() + "'");
    if (corpus.tokens.size() < 2)
        throw std::runtime_error("load_corpus: '" + path.string() +
                                 "' is too small (" + std::to_string(corpus.tokens.size()) +
                                 " bytes)");
    corpus.split_point = static_cast<std::size_t>(
        (1.0 - val_fraction) * static_cast<double>(corpus.tokens.size()));
    return corpus;
}

struct Batch {
    std::size_t batch_size = 0;
    std::size_t seq_len = 0;
    std::vector<std::uint8_t> inputs;   // batch_size * seq_len
    std::vector<std::uint8_t> targets;  // inputs shifted by one position
};

// Draws batch_size random contiguous windows from one side of the split;
// windows never cross the train/val boundary. The rng evolves in place, so
// repeated calls with the same starting state reproduce the same batches.
inline void sample_batch(const Corpus& corpus, Split split, std::size_t batch_size,
                         std::size_t seq_len, Xoshiro256& rng, Batch& out) {
    const std::size_t lo = split == Split::Train ? 0 : corpus.split_point;
    const std::size_t hi = split == Split::Train ? corpus.split_point : corpus.tokens.size();
    if (hi - lo < seq_len + 1)
        throw std::runtime_error("sample_batch: split side has " + std::to_string(hi - lo) +
                                 " tokens, need at least " + std::to_string(seq_len + 1));
    const std::uint64_t span = hi - lo - seq_len;  // valid window start count
    out.batch_size = batch_size;
    out.seq_len = seq_len;
    out.inputs.resize(batch_size * seq_len);
    out.targets.resize(batch_size * seq_len);
    for (std::size_t b = 0; b < batch_size; ++b) {
        const std::size_t off = lo + static_cast<std::size_t>(rng.below(span));
        for (std::size_t t = 0; t < seq_len; ++t) {
            out.inputs[b * seq_len + t] = corpus.tokens[off + t];
            out.targets[b * seq_len + t] = corpus.tokens[off + t + 1];
        }
    }
}

}  // namespace xgate
