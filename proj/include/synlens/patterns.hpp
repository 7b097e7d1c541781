#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synlens/corpus.hpp"

namespace synlens::patterns {

enum class ItemKind { Token, Pos };

/// A pattern element: either a lowercased token surface or a UPOS tag.
struct PatternItem {
    ItemKind kind = ItemKind::Token;
    std::string value;

    auto operator<=>(const PatternItem&) const = default;
    bool operator==(const PatternItem&) const = default;
};

/// One sequence position carrying both readings of a token.
struct DualItem {
    std::string token;  // lowercased
    std::string pos;

    bool operator==(const DualItem&) const = default;
};

using DualSequence = std::vector<DualItem>;

struct Pattern {
    std::vector<PatternItem> items;
    std::size_t support = 0;
    double score = 0.0;

    bool operator==(const Pattern&) const = default;
};

/// Weights of the linear pattern score. All three signals favor longer,
/// more lexical, more frequent patterns.
struct ScoringWeights {
    double token_item = 2.0;
    double pos_item = 1.0;
    double log2_support = 0.5;

    bool operator==(const ScoringWeights&) const = default;
};

struct SummaryOptions {
    double min_support_fraction = 0.3;
    std::size_t min_support_floor = 2;
    std::size_t max_length = 8;
    ScoringWeights weights;

    bool operator==(const SummaryOptions&) const = default;
};

inline constexpr std::size_t kDefaultMaxPatternLength = 8;

DualSequence to_item_sequence(const AnnotatedExample& example);

bool matches(const PatternItem& item, const DualItem& position);

/// Gapped-subsequence containment: items match increasing positions.
bool contains(const DualSequence& sequence, std::span<const PatternItem> items);

/// Number of sequences containing the pattern, by direct scan.
std::size_t count_support(std::span<const DualSequence> sequences,
                          std::span<const PatternItem> items);

/// PrefixSpan over dual-item sequences. Returns every pattern of length
/// 1..max_length whose support (sequences containing it) is at least
/// min_support, in depth-first order with items sorted (TOKEN before POS,
/// then by value). Scores are left at zero. Throws ContractError when
/// min_support < 2.
std::vector<Pattern> mine_patterns(std::span<const DualSequence> sequences,
                                   std::size_t min_support,
                                   std::size_t max_length = kDefaultMaxPatternLength);

/// token_item·#TOKEN + pos_item·#POS + log2_support·log2(support).
double score_pattern(const Pattern& pattern, const ScoringWeights& weights = {});

/// True if `a` should be preferred over `b` as a summary: higher score,
/// then higher support, then lexicographically smaller items.
bool better_summary(const Pattern& a, const Pattern& b);

/// The preferred pattern among all frequent patterns, found by the same
/// prefix-projection search with branch-and-bound pruning on the score.
std::optional<Pattern> best_pattern(std::span<const DualSequence> sequences,
                                    std::size_t min_support,
                                    std::size_t max_length = kDefaultMaxPatternLength,
                                    const ScoringWeights& weights = {});

/// max(floor, ceil(fraction · cluster_size)).
std::size_t summary_min_support(std::size_t cluster_size, const SummaryOptions& options = {});

/// Highest-scoring frequent pattern of a cluster, or nullopt for a
/// singleton or when nothing reaches the minimum support.
std::optional<Pattern> summarize_cluster(std::span<const std::size_t> cluster,
                                         std::span<const AnnotatedExample> corpus,
                                         const SummaryOptions& options = {});

/// "(music, you, can, VERB, to)"
std::string format_items(std::span<const PatternItem> items);

/// "(music, you, can, VERB, to) ×12"
std::string format_pattern(const Pattern& pattern);

}  // namespace synlens::patterns
