#pragma once

#include <map>
#include <string>
#include <vector>

#include "synlens/metrics.hpp"

namespace synlens::compare {

/// Pairwise Frobenius distances between per-metric distance matrices.
struct MetricComparison {
    std::vector<metrics::View> metrics;
    std::vector<std::vector<double>> table;

    double at(metrics::View a, metrics::View b) const;
    bool operator==(const MetricComparison&) const = default;
};

/// ||A - B||_F. Throws ContractError on a size mismatch.
double frobenius_distance(const metrics::DistanceMatrix& a, const metrics::DistanceMatrix& b);

/// Table over the supplied metrics, rows ordered EMBEDDING, TOKEN, POS, DEP.
/// Throws DataError with fewer than two metrics.
MetricComparison metric_table(const std::map<metrics::View, metrics::DistanceMatrix>& matrices);

/// Fixed-width text table with a blank diagonal.
std::string render_table(const MetricComparison& comparison);

}  // namespace synlens::compare
