#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synlens/cluster.hpp"
#include "synlens/compare.hpp"
#include "synlens/corpus.hpp"
#include "synlens/metrics.hpp"
#include "synlens/patterns.hpp"

namespace synlens::report {

inline constexpr std::string_view kBundleVersion = "synlens-bundle/1";
inline constexpr double kDefaultDupThreshold = 0.2;

struct AnalysisOptions {
    std::vector<metrics::View> metrics{metrics::kAllViews.begin(), metrics::kAllViews.end()};
    std::vector<std::size_t> ks = cluster::kDefaultKs;
    double dup_threshold = kDefaultDupThreshold;
    cluster::Linkage linkage = cluster::Linkage::Average;
    metrics::EmbeddingOptions embedding;
    patterns::SummaryOptions summary;
    bool include_matrices = false;
};

struct NearDuplicateGroup {
    metrics::View metric = metrics::View::Token;
    std::vector<std::size_t> ids;  // leaf order
    double max_distance = 0.0;

    bool operator==(const NearDuplicateGroup&) const = default;
};

struct ClusterSummary {
    std::vector<std::size_t> members;
    std::size_t min_support = 0;
    std::optional<patterns::Pattern> summary;

    bool operator==(const ClusterSummary&) const = default;
};

struct FlatClustering {
    std::size_t k = 0;
    std::vector<ClusterSummary> clusters;

    bool operator==(const FlatClustering&) const = default;
};

struct MetricResult {
    metrics::View metric = metrics::View::Token;
    cluster::Dendrogram dendrogram;
    std::vector<FlatClustering> clusterings;  // ascending k
    std::vector<NearDuplicateGroup> near_duplicates;
    std::optional<metrics::DistanceMatrix> matrix;

    const FlatClustering* clustering(std::size_t k) const;
    bool operator==(const MetricResult&) const = default;
};

struct Availability {
    metrics::View metric = metrics::View::Token;
    bool requested = false;
    bool available = false;
    std::string reason;  // empty when available

    bool operator==(const Availability&) const = default;
};

/// Everything the explorer needs, in one self-contained document.
struct AnalysisBundle {
    std::string version{kBundleVersion};
    SourceKind source = SourceKind::Csv;
    std::vector<std::size_t> ks;
    double dup_threshold = kDefaultDupThreshold;
    cluster::Linkage linkage = cluster::Linkage::Average;
    std::string embedding_source;  // "supplied", "fallback-hash" or empty
    std::size_t embedding_dim = 0;
    patterns::SummaryOptions summary;
    std::vector<AnnotatedExample> examples;  // embeddings stripped
    std::vector<Availability> availability;  // one entry per View
    std::vector<MetricResult> metrics;
    std::optional<compare::MetricComparison> comparison;
    std::string comparison_note;

    const MetricResult* metric(metrics::View view) const;
    bool operator==(const AnalysisBundle&) const = default;
};

/// Maximal dendrogram subtrees whose merge height is within `threshold`,
/// each confirmed by checking every pairwise distance directly (a subtree
/// failing the check is split into its children). Sorted by size, largest
/// first; equal sizes keep leaf order. Throws ContractError unless
/// 0 < threshold < 1.
std::vector<NearDuplicateGroup> near_duplicates(const cluster::Dendrogram& dendro,
                                                const metrics::DistanceMatrix& d,
                                                metrics::View metric,
                                                double threshold = kDefaultDupThreshold);

/// Runs metrics, clustering, summaries, near-duplicate detection and the
/// metric comparison. Metrics that cannot be computed are recorded in
/// `availability` rather than failing the run. Module errors are rethrown
/// with the module name prefixed.
AnalysisBundle build_analysis(const std::vector<AnnotatedExample>& examples, SourceKind source,
                              const AnalysisOptions& options = {});

/// Deterministic JSON text (sorted keys, shortest round-trip floats,
/// trailing newline).
std::string serialize_bundle(const AnalysisBundle& bundle);

/// Inverse of serialize_bundle(). Throws DataError on malformed input or a
/// version mismatch.
AnalysisBundle parse_bundle(std::string_view json_text);

/// k used by render_text_report() when none is requested: 10 if present,
/// otherwise the largest k in the bundle.
std::size_t default_report_k(const AnalysisBundle& bundle);

/// Human-readable summary: per metric the clusters at one k with sizes and
/// summary patterns, the near-duplicate groups, then the comparison table.
std::string render_text_report(const AnalysisBundle& bundle,
                               std::optional<std::size_t> k = std::nullopt);

/// Just the metric-comparison section.
std::string render_comparison(const AnalysisBundle& bundle);

}  // namespace synlens::report
