#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synlens/corpus.hpp"

namespace synlens::metrics {

enum class View { Token, Pos, Dep, Embedding };

inline constexpr std::array<View, 4> kAllViews = {View::Token, View::Pos, View::Dep,
                                                  View::Embedding};

/// "TOKEN", "POS", "DEP", "EMBEDDING".
std::string_view to_string(View view);
std::optional<View> parse_view(std::string_view name);

/// Joins the items of one n-gram (U+241F SYMBOL FOR UNIT SEPARATOR).
inline constexpr std::string_view kGramSeparator = "\xE2\x90\x9F";

inline constexpr std::size_t kMaxGram = 3;

/// Multiset of 1-, 2- and 3-grams of one example under one view. Each
/// multiset is kept as a sorted (gram, count) list.
struct NGramProfile {
    using Multiset = std::vector<std::pair<std::string, std::size_t>>;

    View view = View::Token;
    std::size_t length = 0;
    std::array<Multiset, kMaxGram> grams;  // grams[n - 1]

    /// Total number of n-grams of order n (counting multiplicity).
    std::size_t total(std::size_t n) const;
    std::size_t count(std::size_t n, std::string_view gram) const;
};

/// Builds the profile for TOKEN (lowercased surfaces), POS (UPOS tags) or
/// DEP (deprel labels). Throws UnavailableViewError for DEP on an example
/// without dependencies, ContractError for EMBEDDING.
NGramProfile extract_profile(const AnnotatedExample& example, View view);

/// Mean over n of |A_n ∩ B_n| / max(|A_n|, |B_n|), taken over the orders n
/// where both profiles have at least one n-gram. Multiset intersection.
double ngram_similarity(const NGramProfile& a, const NGramProfile& b);

inline constexpr std::size_t kDefaultEmbeddingDim = 256;

/// Feature-hashed bag of lowercased unigrams and bigrams, L2-normalized.
/// Each feature hashes with 64-bit FNV-1a; the low bit picks the sign and
/// the remaining bits pick the bucket.
std::vector<double> fallback_embed(const AnnotatedExample& example,
                                   std::size_t dim = kDefaultEmbeddingDim);

/// 1 - cos(u, v), clamped to [0, 1].
double embedding_distance(std::span<const double> u, std::span<const double> v);

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
    const std::vector<double>& entries() const { return entries_; }

    /// Sets (i, j) and (j, i).
    void set_symmetric(std::size_t i, std::size_t j, double value) {
        (*this)(i, j) = value;
        (*this)(j, i) = value;
    }

    bool operator==(const DistanceMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

struct EmbeddingOptions {
    bool fallback_enabled = true;
    std::size_t dim = kDefaultEmbeddingDim;
};

/// Why `view` cannot be computed for this corpus, or nullopt when it can.
std::optional<std::string> unavailable_reason(std::span<const AnnotatedExample> corpus, View view,
                                              const EmbeddingOptions& options = {});

/// True when EMBEDDING will use the vectors supplied with the input.
bool uses_supplied_embeddings(std::span<const AnnotatedExample> corpus);

/// Pairwise distances under one view: 1 - ngram_similarity for TOKEN, POS
/// and DEP; embedding_distance for EMBEDDING (supplied vectors when every
/// example has one, otherwise the fallback embedder). Throws
/// UnavailableViewError naming the examples that lack the annotation.
DistanceMatrix distance_matrix(std::span<const AnnotatedExample> corpus, View view,
                               const EmbeddingOptions& options = {});

}  // namespace synlens::metrics
