#include "synlens/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "synlens/error.hpp"
#include "text_util.hpp"

namespace synlens::patterns {

namespace {

constexpr double kScoreTolerance = 1e-9;

/// A sequence whose prefix match ends just before `start`.
struct Projection {
    std::size_t seq;
    std::size_t start;
};

/// Depth-first prefix-projection search. `visit(prefix, projections)` is
/// called for every frequent pattern and returns whether to extend it.
class PrefixSearch {
public:
    PrefixSearch(std::span<const DualSequence> sequences, std::size_t min_support,
                 std::size_t max_length)
        : sequences_(sequences), min_support_(min_support), max_length_(max_length) {}

    template <typename Visit>
    void run(Visit&& visit) {
        std::vector<Projection> all;
        all.reserve(sequences_.size());
        for (std::size_t s = 0; s < sequences_.size(); ++s) all.push_back({s, 0});
        std::vector<PatternItem> prefix;
        grow(prefix, all, visit);
    }

private:
    template <typename Visit>
    void grow(std::vector<PatternItem>& prefix, const std::vector<Projection>& projected,
              Visit& visit) {
        if (prefix.size() >= max_length_) return;

        // Leftmost occurrence of each item in every projected suffix.
        std::map<PatternItem, std::vector<Projection>> extensions;
        std::map<PatternItem, std::size_t> first;
        for (const auto& proj : projected) {
            first.clear();
            const auto& seq = sequences_[proj.seq];
            for (std::size_t pos = proj.start; pos < seq.size(); ++pos) {
                first.try_emplace(PatternItem{ItemKind::Token, seq[pos].token}, pos);
                first.try_emplace(PatternItem{ItemKind::Pos, seq[pos].pos}, pos);
            }
            for (const auto& [item, pos] : first) {
                extensions[item].push_back({proj.seq, pos + 1});
            }
        }
        for (const auto& [item, next] : extensions) {
            if (next.size() < min_support_) continue;
            prefix.push_back(item);
            if (visit(static_cast<const std::vector<PatternItem>&>(prefix), next)) {
                grow(prefix, next, visit);
            }
            prefix.pop_back();
        }
    }

    std::span<const DualSequence> sequences_;
    std::size_t min_support_;
    std::size_t max_length_;
};

double item_score(std::span<const PatternItem> items, const ScoringWeights& w) {
    double s = 0.0;
    for (const auto& it : items) s += it.kind == ItemKind::Token ? w.token_item : w.pos_item;
    return s;
}

}  // namespace

DualSequence to_item_sequence(const AnnotatedExample& example) {
    DualSequence seq;
    seq.reserve(example.tokens.size());
    for (const auto& tok : example.tokens) {
        seq.push_back({detail::ascii_lower(tok.surface), tok.pos});
    }
    return seq;
}

bool matches(const PatternItem& item, const DualItem& position) {
    return item.kind == ItemKind::Token ? item.value == position.token : item.value == position.pos;
}

bool contains(const DualSequence& sequence, std::span<const PatternItem> items) {
    std::size_t k = 0;
    for (std::size_t pos = 0; pos < sequence.size() && k < items.size(); ++pos) {
        if (matches(items[k], sequence[pos])) ++k;
    }
    return k == items.size();
}

std::size_t count_support(std::span<const DualSequence> sequences,
                          std::span<const PatternItem> items) {
    return static_cast<std::size_t>(std::count_if(
        sequences.begin(), sequences.end(), [&](const auto& seq) { return contains(seq, items); }));
}

std::vector<Pattern> mine_patterns(std::span<const DualSequence> sequences,
                                   std::size_t min_support, std::size_t max_length) {
    if (min_support < 2) throw ContractError("mine_patterns: min_support must be at least 2");
    std::vector<Pattern> out;
    PrefixSearch(sequences, min_support, max_length)
        .run([&](const std::vector<PatternItem>& prefix, const std::vector<Projection>& proj) {
            out.push_back({prefix, proj.size(), 0.0});
            return true;
        });
    return out;
}

double score_pattern(const Pattern& pattern, const ScoringWeights& weights) {
    if (pattern.support == 0) throw ContractError("score_pattern: support must be at least 1");
    return item_score(pattern.items, weights) +
           weights.log2_support * std::log2(static_cast<double>(pattern.support));
}

bool better_summary(const Pattern& a, const Pattern& b) {
    if (std::abs(a.score - b.score) > kScoreTolerance) return a.score > b.score;
    if (a.support != b.support) return a.support > b.support;
    return a.items < b.items;
}

std::optional<Pattern> best_pattern(std::span<const DualSequence> sequences,
                                    std::size_t min_support, std::size_t max_length,
                                    const ScoringWeights& weights) {
    if (min_support < 2) throw ContractError("best_pattern: min_support must be at least 2");
    const bool can_prune =
        weights.token_item >= 0 && weights.pos_item >= 0 && weights.log2_support >= 0;
    const double max_item = std::max(weights.token_item, weights.pos_item);

    std::optional<Pattern> best;
    PrefixSearch(sequences, min_support, max_length)
        .run([&](const std::vector<PatternItem>& prefix, const std::vector<Projection>& proj) {
            Pattern candidate{prefix, proj.size(), 0.0};
            candidate.score = score_pattern(candidate, weights);
            if (!best || better_summary(candidate, *best)) best = candidate;
            if (!can_prune) return true;

            // Extensions gain at most `room` items and never gain support.
            std::size_t room = 0;
            for (const auto& p : proj) {
                room = std::max(room, sequences[p.seq].size() - p.start);
            }
            room = std::min(room, max_length - prefix.size());
            const double bound = candidate.score + static_cast<double>(room) * max_item;
            return bound >= best->score - kScoreTolerance;
        });
    return best;
}

std::size_t summary_min_support(std::size_t cluster_size, const SummaryOptions& options) {
    const auto frac = static_cast<std::size_t>(
        std::ceil(options.min_support_fraction * static_cast<double>(cluster_size) - 1e-12));
    return std::max(options.min_support_floor, frac);
}

std::optional<Pattern> summarize_cluster(std::span<const std::size_t> cluster,
                                         std::span<const AnnotatedExample> corpus,
                                         const SummaryOptions& options) {
    const auto min_support = summary_min_support(cluster.size(), options);
    if (cluster.size() < 2 || min_support > cluster.size()) return std::nullopt;
    std::vector<DualSequence> sequences;
    sequences.reserve(cluster.size());
    for (const auto id : cluster) {
        if (id >= corpus.size()) throw ContractError("summarize_cluster: unknown example id");
        sequences.push_back(to_item_sequence(corpus[id]));
    }
    return best_pattern(sequences, std::max<std::size_t>(2, min_support), options.max_length,
                        options.weights);
}

std::string format_items(std::span<const PatternItem> items) {
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i].value;
    }
    out += ')';
    return out;
}

std::string format_pattern(const Pattern& pattern) {
    return format_items(pattern.items) + " \xC3\x97" + std::to_string(pattern.support);
}

}  // namespace synlens::patterns
