#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "synlens/corpus.hpp"

namespace synlens::test {

inline std::filesystem::path source_dir() { return SYNLENS_SOURCE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Tokens and tags only; no dependencies.
inline AnnotatedExample make_example(std::size_t id, const std::vector<std::string>& tokens,
                                     const std::vector<std::string>& pos = {}) {
    AnnotatedExample ex;
    ex.raw.id = id;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) ex.raw.text += ' ';
        ex.raw.text += tokens[i];
        TokenAnnotation t;
        t.surface = tokens[i];
        t.pos = pos.empty() ? "X" : pos[i];
        ex.tokens.push_back(t);
    }
    return ex;
}

// A chain parse: token 0 is the root, token i is headed by token i - 1.
inline AnnotatedExample make_parsed(std::size_t id, const std::vector<std::string>& tokens,
                                    const std::vector<std::string>& pos,
                                    const std::vector<std::string>& deprels) {
    auto ex = make_example(id, tokens, pos);
    for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
        if (i == 0) {
            ex.tokens[i].root = true;
        } else {
            ex.tokens[i].head = i - 1;
        }
        ex.tokens[i].deprel = deprels[i];
    }
    ex.has_dependencies = true;
    return ex;
}

inline const std::vector<std::string>& small_vocab() {
    static const std::vector<std::string> v = {"music", "songs", "you", "can", "dance", "to",
                                               "like",  "rain",  "the", "best", "from", "90s"};
    return v;
}

inline const std::vector<std::string>& small_tags() {
    static const std::vector<std::string> v = {"NOUN", "VERB", "ADP", "PRON", "DET", "ADJ"};
    return v;
}

// Random short example over a small vocabulary so n-grams overlap often.
inline AnnotatedExample random_example(std::mt19937_64& rng, std::size_t id, std::size_t max_len = 7) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    const auto n = len(rng);
    std::vector<std::string> toks, tags, rels;
    for (std::size_t i = 0; i < n; ++i) {
        toks.push_back(small_vocab()[rng() % small_vocab().size()]);
        tags.push_back(small_tags()[rng() % small_tags().size()]);
        rels.push_back(i == 0 ? "ROOT" : (rng() % 2 ? "dep" : "prep"));
    }
    return make_parsed(id, toks, tags, rels);
}

}  // namespace synlens::test
