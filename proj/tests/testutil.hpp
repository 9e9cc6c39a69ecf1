#pragma once

// Shared helpers for the test suites: a deterministic synthetic text corpus
// and a scratch-directory guard.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "xgate/rng.hpp"

namespace testutil {

// English-like filler text with a small vocabulary, so a byte-level model
// can make fast progress. Deterministic for a given seed and size.
inline std::string synthetic_text(std::size_t min_bytes, std::uint64_t seed = 42) {
    static const std::vector<std::string> words = {
        "the",    "gate",   "range",  "signal", "model",  "learns", "slowly", "value",
        "grows",  "when",   "input",  "flows",  "through", "layers", "and",   "every",
        "token",  "counts", "small",  "steps",  "make",   "steady", "gains",  "while",
        "noise",  "fades",  "under",  "long",   "training", "runs", "deep",   "nets",
        "need",   "care",   "data",   "drives", "all",    "of",     "it",     "loss",
        "falls",  "as",     "alpha",  "opens",  "wider",  "paths",  "for",    "gradients"};
    xgate::Xoshiro256 rng(seed);
    std::string text;
    text.reserve(min_bytes + 128);
    while (text.size() < min_bytes) {
        const std::size_t count = 5 + rng.below(8);
        for (std::size_t i = 0; i < count; ++i) {
            std::string w = words[rng.below(words.size())];
            if (i == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
            text += w;
            text += i + 1 == count ? "" : " ";
        }
        text += rng.below(10) == 0 ? "!\n" : ".\n";
    }
    return text;
}

inline std::filesystem::path write_corpus(const std::filesystem::path& path,
                                          std::size_t min_bytes, std::uint64_t seed = 42) {
    std::ofstream out(path, std::ios::binary);
    const std::string text = synthetic_text(min_bytes, seed);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    return path;
}

// Fresh scratch directory under the build tree, wiped on construction.
struct ScratchDir {
    std::filesystem::path path;

    explicit ScratchDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / ("xgate_test_" + name)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
};

}  // namespace testutil
